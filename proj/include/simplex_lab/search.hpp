#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "simplex_lab/core.hpp"

namespace simplex_lab::search {

/// Deterministic generator for batch `index` of a run seeded with `seed`.
inline std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// Fills `out` with random points. Even draws are uniform; odd draws pick from
/// a small random pool so that repeated arguments (and z landing on a data
/// point) actually occur on continuous spaces.
template <class Rng>
void draw(const Space& space, Rng& rng, std::span<Point> out, bool pooled) {
  if (!pooled || out.size() < 2) {
    for (Point& p : out) p = space.sample(rng);
    return;
  }
  std::uniform_int_distribution<std::size_t> pool_size(1, out.size() - 1);
  std::vector<Point> pool(pool_size(rng), Point::symbol(0));
  for (Point& p : pool) p = space.sample(rng);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (Point& p : out) p = pool[pick(rng)];
}

/// Grid used for exhaustive enumeration of `length`-tuples on a continuous
/// space, shrunk until the enumeration fits in `cap`. Empty when nothing fits.
inline std::vector<Point> enumeration_grid(const Space& space, std::size_t length, std::size_t cap) {
  auto fits = [&](std::size_t size) {
    double total = std::pow(static_cast<double>(size), static_cast<double>(length));
    return total <= static_cast<double>(cap);
  };
  std::vector<Point> g = space.grid();
  if (space.is_finite()) return fits(g.size()) ? g : std::vector<Point>{};
  if (fits(g.size())) return g;
  const double lo = space.box().lo, hi = space.box().hi, mid = 0.5 * (lo + hi);
  if (space.kind() == SpaceKind::plane) {
    g = {Point::planar(mid, mid), Point::planar(lo, mid), Point::planar(hi, mid), Point::planar(mid, lo),
         Point::planar(mid, hi)};
    if (fits(g.size())) return g;
    g = {Point::planar(mid, mid), Point::planar(lo, mid), Point::planar(hi, mid)};
  } else {
    g = {Point::real(lo), Point::real(hi), Point::real(mid)};
  }
  return fits(g.size()) ? g : std::vector<Point>{};
}

/// Visits every `length`-tuple over `grid`.
template <class Visit>
void for_each_grid_tuple(std::span<const Point> grid, std::size_t length, Visit&& visit) {
  if (grid.empty()) return;
  std::vector<std::size_t> digits(length, 0);
  std::vector<Point> current(length, grid[0]);
  while (true) {
    visit(std::span<const Point>(current));
    std::size_t pos = length;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < grid.size()) {
        current[pos] = grid[digits[pos]];
        done = false;
        break;
      }
      digits[pos] = 0;
      current[pos] = grid[0];
    }
    if (done) return;
  }
}

namespace detail {

inline Point lerp(const Point& a, const Point& b, double t) {
  if (a.kind() == SpaceKind::real_line) return Point::real(a.as_real() + t * (b.as_real() - a.as_real()));
  const Planar& p = a.as_planar();
  const Planar& q = b.as_planar();
  return Point::planar(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y));
}

}  // namespace detail

/// Structured `length`-point configurations whose last entry plays the role
/// of z: two-value tuples with z swept along the segment, arithmetic
/// progressions, points on a circle with z at the centre or on the circle,
/// and points in general position with z on a data point.
inline std::vector<std::vector<Point>> structured_probes(const Space& space, std::size_t length) {
  std::vector<std::vector<Point>> out;
  if (length < 2) return out;
  const std::size_t n = length - 1;

  if (space.is_finite()) {
    for (std::size_t m = 1; m < n; ++m) {
      for (const Point& z : space.elements()) {
        std::vector<Point> t(n, space.element(1));
        std::fill(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(m), space.element(0));
        t.push_back(z);
        out.push_back(std::move(t));
      }
    }
    return out;
  }

  const double lo = space.box().lo, hi = space.box().hi, mid = 0.5 * (lo + hi), w = hi - lo;
  std::vector<Point> values = space.grid();

  // two-value tuples (m copies of x, n - m copies of y) with z swept along xy
  for (const Point& x : values) {
    for (const Point& y : values) {
      if (x == y) continue;
      for (std::size_t m = 1; m < n; ++m) {
        std::vector<Point> base(n, y);
        std::fill(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(m), x);
        for (int j = -4; j <= 12; ++j) {
          std::vector<Point> t = base;
          t.push_back(detail::lerp(x, y, static_cast<double>(j) / 8.0));
          out.push_back(std::move(t));
        }
      }
    }
  }

  // arithmetic progressions with z on a fine grid of the same segment
  {
    const Point a = space.kind() == SpaceKind::real_line ? Point::real(lo) : Point::planar(lo, mid);
    const Point b = space.kind() == SpaceKind::real_line ? Point::real(hi) : Point::planar(hi, mid);
    std::vector<Point> base;
    for (std::size_t i = 0; i < n; ++i) {
      base.push_back(detail::lerp(a, b, n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    const std::size_t steps = 4 * std::max<std::size_t>(n - 1, 1);
    for (std::size_t j = 0; j <= steps; ++j) {
      std::vector<Point> t = base;
      t.push_back(detail::lerp(a, b, static_cast<double>(j) / static_cast<double>(steps)));
      out.push_back(std::move(t));
    }
    if (space.kind() == SpaceKind::plane) {
      std::vector<Point> t = base;
      t.push_back(Point::planar(mid, hi));
      out.push_back(std::move(t));
    }
  }

  if (space.kind() == SpaceKind::plane && n >= 2) {
    // n points equally spaced on a circle around the box centre
    std::vector<Point> circle;
    for (std::size_t i = 0; i < n; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      circle.push_back(Point::planar(mid + 0.5 * w * std::cos(angle), mid + 0.5 * w * std::sin(angle)));
    }
    for (const Point& z : {Point::planar(mid, mid), circle[0], detail::lerp(circle[0], circle[1], 0.5),
                           detail::lerp(circle[0], Point::planar(mid, mid), 2.0)}) {
      std::vector<Point> t = circle;
      t.push_back(z);
      out.push_back(std::move(t));
    }
    // integer points on a parabola: no three collinear
    std::vector<Point> parabola;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = static_cast<double>(i);
      parabola.push_back(Point::planar(u, u * u));
    }
    for (const Point& z : {parabola[0], parabola[1], Point::planar(0.5, 0.0)}) {
      std::vector<Point> t = parabola;
      t.push_back(z);
      out.push_back(std::move(t));
    }
  }
  return out;
}

/// Deterministic probe stream of `length`-point lists: on finite spaces the
/// full enumeration when it fits in `budget`, otherwise structured
/// configurations, a grid enumeration that fits in `budget`, and `budget`
/// seeded random draws.
template <class Visit>
std::size_t for_each_probe(const Space& space, std::size_t length, std::size_t budget, std::uint64_t seed,
                           Visit&& visit) {
  std::size_t count = 0;
  auto counted = [&](std::span<const Point> p) {
    ++count;
    visit(p);
  };
  if (space.is_finite() && space.enumeration_size(length) <= budget) {
    space.for_each_tuple(length, counted);
    return count;
  }
  for (const auto& probe : structured_probes(space, length)) counted(probe);
  if (!space.is_finite()) {
    const auto grid = enumeration_grid(space, length, budget);
    for_each_grid_tuple(grid, length, counted);
  }
  auto rng = batch_rng(seed, 0);
  std::vector<Point> buffer(length, Point::symbol(0));
  for (std::size_t i = 0; i < budget; ++i) {
    draw(space, rng, buffer, (i % 2) == 1);
    counted(buffer);
  }
  return count;
}

}  // namespace simplex_lab::search

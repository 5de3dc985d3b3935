#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "simplex_lab/core.hpp"

namespace simplex_lab {

/// Ground distance d_2 used by the pairwise and Fermat constructions.
enum class Ground { abs, euclidean, chebyshev, discrete };

inline const char* to_string(Ground g) {
  switch (g) {
    case Ground::abs: return "abs";
    case Ground::euclidean: return "euclidean";
    case Ground::chebyshev: return "chebyshev";
    case Ground::discrete: return "discrete";
  }
  return "?";
}

inline double ground_distance(Ground g, const Point& p, const Point& q) {
  if (g == Ground::discrete) return p == q ? 0.0 : 1.0;
  if (p.kind() == SpaceKind::real_line && q.kind() == SpaceKind::real_line) {
    return std::abs(p.as_real() - q.as_real());
  }
  if (p.kind() == SpaceKind::plane && q.kind() == SpaceKind::plane) {
    const double dx = p.as_planar().x - q.as_planar().x;
    const double dy = p.as_planar().y - q.as_planar().y;
    switch (g) {
      case Ground::euclidean: return std::hypot(dx, dy);
      case Ground::chebyshev: return std::max(std::abs(dx), std::abs(dy));
      case Ground::abs: return std::abs(dx) + std::abs(dy);
      case Ground::discrete: break;
    }
  }
  throw Error(Errc::space_mismatch, std::string("ground distance ") + to_string(g) + " undefined for these points");
}

namespace geometry {

struct Circle {
  Planar center;
  double radius = 0.0;

  bool encloses(const Planar& p, double tolerance = 1e-9) const {
    return std::hypot(p.x - center.x, p.y - center.y) <= radius + tolerance;
  }
};

namespace detail {

inline Circle diametral(const Planar& a, const Planar& b) {
  return {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, 0.5 * std::hypot(a.x - b.x, a.y - b.y)};
}

inline Circle circumscribed(const Planar& a, const Planar& b, const Planar& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double det = 2.0 * (bx * cy - by * cx);
  const double scale = std::max({bx * bx + by * by, cx * cx + cy * cy, 1e-300});
  if (std::abs(det) <= 1e-14 * scale) {
    // collinear: the farthest pair spans the circle
    Circle best = diametral(a, b);
    for (const Circle& cand : {diametral(a, c), diametral(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / det;
  const double uy = (bx * c2 - cx * b2) / det;
  return {{a.x + ux, a.y + uy}, std::hypot(ux, uy)};
}

inline bool inside(const Circle& c, const Planar& p) {
  return std::hypot(p.x - c.center.x, p.y - c.center.y) <= c.radius * (1.0 + 1e-12) + 1e-15;
}

}  // namespace detail

/// Minimal enclosing circle by the randomized incremental (Welzl) method.
/// The shuffle is seeded per call so results are reproducible; the radius is
/// unique regardless of the order.
inline Circle smallest_enclosing_circle(std::span<const Planar> points, std::uint64_t seed = 0x5eedULL) {
  if (points.empty()) throw Error(Errc::invalid_argument, "enclosing circle of an empty point set");
  std::vector<Planar> p(points.begin(), points.end());
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);

  Circle c{p[0], 0.0};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (detail::inside(c, p[i])) continue;
    c = Circle{p[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (detail::inside(c, p[j])) continue;
      c = detail::diametral(p[i], p[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (detail::inside(c, p[k])) continue;
        c = detail::circumscribed(p[i], p[j], p[k]);
      }
    }
  }
  return c;
}

/// Canonical key of the line a*x + b*y = c.
struct LineKey {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  friend bool operator==(const LineKey&, const LineKey&) = default;
};

/// Distinct lines spanned by a point multiset.
class LineSet {
 public:
  explicit LineSet(std::span<const Planar> points) {
    std::vector<Planar> distinct(points.begin(), points.end());
    std::sort(distinct.begin(), distinct.end(), [](const Planar& l, const Planar& r) {
      return l.x < r.x || (l.x == r.x && l.y < r.y);
    });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    exact_ = std::all_of(distinct.begin(), distinct.end(), [](const Planar& q) {
      return q.x == std::trunc(q.x) && q.y == std::trunc(q.y) && std::abs(q.x) < 1e9 && std::abs(q.y) < 1e9;
    });
    double magnitude = 1.0;
    for (const Planar& q : distinct) magnitude = std::max({magnitude, std::abs(q.x), std::abs(q.y)});
    tolerance_ = 1e-9 * magnitude;

    for (std::size_t i = 0; i < distinct.size(); ++i) {
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        const Planar& p = distinct[i];
        const Planar& q = distinct[j];
        if (exact_) {
          insert_exact(p, q);
        } else {
          insert_approximate(p, q);
        }
      }
    }
  }

  std::size_t size() const noexcept { return keys_.size(); }
  const std::vector<LineKey>& keys() const noexcept { return keys_; }
  bool exact() const noexcept { return exact_; }

 private:
  void insert_exact(const Planar& p, const Planar& q) {
    auto a = static_cast<std::int64_t>(q.y - p.y);
    auto b = static_cast<std::int64_t>(p.x - q.x);
    std::int64_t c = a * static_cast<std::int64_t>(p.x) + b * static_cast<std::int64_t>(p.y);
    std::int64_t g = std::gcd(std::gcd(a, b), c);
    a /= g;
    b /= g;
    c /= g;
    if (a < 0 || (a == 0 && b < 0)) {
      a = -a;
      b = -b;
      c = -c;
    }
    LineKey key{static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
    if (std::find(keys_.begin(), keys_.end(), key) == keys_.end()) keys_.push_back(key);
  }

  void insert_approximate(const Planar& p, const Planar& q) {
    for (const auto& [r, s] : representatives_) {
      if (collinear(r, s, p) && collinear(r, s, q)) return;
    }
    representatives_.emplace_back(p, q);
    double a = q.y - p.y, b = p.x - q.x;
    const double norm = std::hypot(a, b);
    a /= norm;
    b /= norm;
    if (a < 0 || (a == 0 && b < 0)) {
      a = -a;
      b = -b;
    }
    keys_.push_back({a, b, a * p.x + b * p.y});
  }

  bool collinear(const Planar& r, const Planar& s, const Planar& p) const {
    // distance from p to the line rs, so that a short pair does not absorb every point
    const double cross = (s.x - r.x) * (p.y - r.y) - (s.y - r.y) * (p.x - r.x);
    return std::abs(cross) <= tolerance_ * std::hypot(s.x - r.x, s.y - r.y);
  }

  bool exact_ = true;
  double tolerance_ = 1e-9;
  std::vector<LineKey> keys_;
  std::vector<std::pair<Planar, Planar>> representatives_;
};

inline std::size_t count_lines(std::span<const Planar> points) { return LineSet(points).size(); }

struct FermatResult {
  double value = 0.0;
  Point minimizer = Point::real(0.0);
  std::size_t iterations = 0;
  bool converged = true;
};

namespace detail {

inline double median_cost(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  // sum of |v_i - median| = (sum of upper half) - (sum of lower half)
  double cost = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n / 2; ++i) cost += v[n - 1 - i] - v[i];
  return cost;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

inline double euclidean_cost(std::span<const Planar> pts, const Planar& x) {
  double s = 0.0;
  for (const Planar& p : pts) s += std::hypot(p.x - x.x, p.y - x.y);
  return s;
}

inline FermatResult weiszfeld(std::span<const Planar> pts, double tolerance, std::size_t max_iterations) {
  // Optimality test at a data point: the pull of the other points must not
  // exceed the multiplicity of the vertex.
  auto vertex_pull = [&](const Planar& v, double& rx, double& ry) {
    double weight = 0.0;
    rx = ry = 0.0;
    for (const Planar& p : pts) {
      const double dx = p.x - v.x, dy = p.y - v.y;
      const double r = std::hypot(dx, dy);
      if (r == 0.0) {
        weight += 1.0;
      } else {
        rx += dx / r;
        ry += dy / r;
      }
    }
    return weight;
  };

  Planar best_vertex = pts.front();
  double best_vertex_cost = euclidean_cost(pts, best_vertex);
  for (const Planar& p : pts) {
    const double c = euclidean_cost(pts, p);
    if (c < best_vertex_cost) {
      best_vertex_cost = c;
      best_vertex = p;
    }
  }
  double rx, ry;
  if (vertex_pull(best_vertex, rx, ry) >= std::hypot(rx, ry)) {
    return {best_vertex_cost, Point(best_vertex), 0, true};
  }

  Planar x{0.0, 0.0};
  for (const Planar& p : pts) {
    x.x += p.x;
    x.y += p.y;
  }
  x.x /= static_cast<double>(pts.size());
  x.y /= static_cast<double>(pts.size());

  FermatResult result{best_vertex_cost, Point(best_vertex), 0, false};
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    result.iterations = it;
    double wx = 0.0, wy = 0.0, wsum = 0.0;
    bool at_vertex = false;
    for (const Planar& p : pts) {
      const double r = std::hypot(p.x - x.x, p.y - x.y);
      if (r == 0.0) {
        at_vertex = true;
        break;
      }
      wx += p.x / r;
      wy += p.y / r;
      wsum += 1.0 / r;
    }
    Planar next;
    if (at_vertex) {
      const double w = vertex_pull(x, rx, ry);
      const double pull = std::hypot(rx, ry);
      if (w >= pull) {
        result.value = std::min(result.value, euclidean_cost(pts, x));
        result.minimizer = Point(x);
        result.converged = true;
        return result;
      }
      next = {x.x + 1e-8 * rx / pull, x.y + 1e-8 * ry / pull};
    } else {
      next = {wx / wsum, wy / wsum};
    }
    const double step = std::hypot(next.x - x.x, next.y - x.y);
    x = next;
    const double cost = euclidean_cost(pts, x);
    if (cost < result.value) {
      result.value = cost;
      result.minimizer = Point(x);
    }
    if (!at_vertex && step <= tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace detail

/// min over x in X of sum_i d_2(x_i, x). Exact on the line and on the
/// Chebyshev plane (median of rotated coordinates), Weiszfeld on the
/// Euclidean plane, exhaustive on finite spaces.
inline FermatResult fermat_value(std::span<const Point> points, Ground ground, const Space& space,
                                 double tolerance = 1e-10, std::size_t max_iterations = 10000) {
  if (points.empty()) throw Error(Errc::invalid_argument, "Fermat value of an empty tuple");
  if (space.is_finite()) {
    FermatResult best{std::numeric_limits<double>::infinity(), Point::symbol(0), 0, true};
    for (const Point& x : space.elements()) {
      double s = 0.0;
      for (const Point& p : points) s += ground_distance(ground, p, x);
      if (s < best.value) best = {s, x, 0, true};
    }
    return best;
  }
  if (space.kind() == SpaceKind::real_line) {
    std::vector<double> v;
    for (const Point& p : points) v.push_back(p.as_real());
    return {detail::median_cost(v), Point::real(detail::median_of(v)), 0, true};
  }
  std::vector<Planar> pts;
  for (const Point& p : points) pts.push_back(p.as_planar());
  if (ground == Ground::chebyshev || ground == Ground::abs) {
    // Chebyshev in the plane is half the Manhattan distance of the
    // coordinates rotated by 45 degrees; the L1 problem separates.
    std::vector<double> u, w;
    for (const Planar& p : pts) {
      if (ground == Ground::chebyshev) {
        u.push_back(p.x + p.y);
        w.push_back(p.x - p.y);
      } else {
        u.push_back(p.x);
        w.push_back(p.y);
      }
    }
    const double factor = ground == Ground::chebyshev ? 0.5 : 1.0;
    const double mu = detail::median_of(u), mw = detail::median_of(w);
    const Point at = ground == Ground::chebyshev ? Point::planar(0.5 * (mu + mw), 0.5 * (mu - mw))
                                                 : Point::planar(mu, mw);
    return {factor * (detail::median_cost(u) + detail::median_cost(w)), at, 0, true};
  }
  if (ground != Ground::euclidean) throw Error(Errc::space_mismatch, "unsupported ground for planar Fermat value");
  return detail::weiszfeld(pts, tolerance, max_iterations);
}

}  // namespace geometry
}  // namespace simplex_lab

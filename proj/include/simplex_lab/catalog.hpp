#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "simplex_lab/core.hpp"
#include "simplex_lab/geometry.hpp"

namespace simplex_lab {

/// A catalog distance together with a recipe for the tuple at which its best
/// constant is attained (when that is known), and extra search hints.
struct CatalogEntry {
  using Recipe = std::function<std::optional<Candidate>(const Space&)>;

  NDistance distance;
  Recipe witness;
  Recipe hint;

  std::optional<Candidate> witness_for(const Space& space) const {
    return witness ? witness(space) : std::nullopt;
  }

  std::vector<Candidate> hints_for(const Space& space) const {
    std::vector<Candidate> out;
    if (auto w = witness_for(space)) out.push_back(*w);
    if (hint) {
      if (auto h = hint(space)) out.push_back(*h);
    }
    return out;
  }
};

namespace catalog {

namespace detail {

inline std::vector<Planar> planar_points(std::span<const Point> points) {
  std::vector<Planar> out;
  out.reserve(points.size());
  for (const Point& p : points) out.push_back(p.as_planar());
  return out;
}

inline bool constant(std::span<const Point> points) {
  return std::all_of(points.begin(), points.end(), [&](const Point& p) { return p == points.front(); });
}

inline void require_arity(std::size_t n, std::size_t minimum, const std::string& name) {
  if (n < minimum) {
    throw Error(Errc::domain_error, name + " requires n >= " + std::to_string(minimum) + ", got " + std::to_string(n));
  }
}

inline NDistance& mark_standard(NDistance& d) {
  const std::size_t n = d.arity();
  d.set_known_constant(1.0 / static_cast<double>(n - 1));
  for (std::size_t k = 2; k <= n; ++k) d.set_known_k_constant(k, 1.0 / static_cast<double>(k - 1));
  return d;
}

/// Two distinct points of the space: (lo, hi) of the box on continuous spaces.
inline std::pair<Point, Point> two_points(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::finite: return {space.element(0), space.element(1)};
    case SpaceKind::real_line: return {Point::real(space.box().lo), Point::real(space.box().hi)};
    case SpaceKind::plane:
      return {Point::planar(space.box().lo, 0.0), Point::planar(space.box().hi, 0.0)};
  }
  return {space.element(0), space.element(1)};
}

inline Point midpoint(const Point& a, const Point& b) {
  if (a.kind() == SpaceKind::real_line) return Point::real(0.5 * (a.as_real() + b.as_real()));
  return Point::planar(0.5 * (a.as_planar().x + b.as_planar().x), 0.5 * (a.as_planar().y + b.as_planar().y));
}

/// (x, y, ..., y; y): attains 1/(n-1) for every standard catalog entry.
inline CatalogEntry::Recipe two_value_witness(std::size_t n, std::optional<SpaceKind> kind) {
  return [n, kind](const Space& space) -> std::optional<Candidate> {
    if (kind && space.kind() != *kind) return std::nullopt;
    auto [x, y] = two_points(space);
    std::vector<Point> t(n, y);
    t[0] = x;
    return Candidate{Tuple(std::move(t)), y};
  };
}

/// (x, y, ..., y; (x+y)/2): attains the inner-interval constants.
inline CatalogEntry::Recipe midpoint_witness(std::size_t n) {
  return [n](const Space& space) -> std::optional<Candidate> {
    if (space.kind() != SpaceKind::real_line) return std::nullopt;
    auto [x, y] = two_points(space);
    std::vector<Point> t(n, y);
    t[0] = x;
    return Candidate{Tuple(std::move(t)), midpoint(x, y)};
  };
}

}  // namespace detail

inline CatalogEntry drastic(std::size_t n) {
  NDistance d("drastic", n, std::nullopt,
              [](std::span<const Point> p) { return detail::constant(p) ? 0.0 : 1.0; });
  detail::mark_standard(d).set_traits({true, true, true});
  return {std::move(d), detail::two_value_witness(n, std::nullopt), {}};
}

inline CatalogEntry cardinality(std::size_t n) {
  NDistance d("cardinality", n, std::nullopt,
              [](std::span<const Point> p) { return static_cast<double>(distinct_count(p) - 1); });
  detail::mark_standard(d).set_traits({true, true, true});
  return {std::move(d), detail::two_value_witness(n, std::nullopt), {}};
}

inline std::optional<SpaceKind> ground_kind(Ground g) {
  switch (g) {
    case Ground::abs: return SpaceKind::real_line;
    case Ground::euclidean: return SpaceKind::plane;
    case Ground::chebyshev: return std::nullopt;
    case Ground::discrete: return std::nullopt;
  }
  return std::nullopt;
}

/// max over pairs of d_2.
inline CatalogEntry diameter(std::size_t n, Ground g) {
  NDistance d(std::string("diameter-") + to_string(g), n, ground_kind(g), [g](std::span<const Point> p) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) best = std::max(best, ground_distance(g, p[i], p[j]));
    return best;
  });
  detail::mark_standard(d).set_traits({true, true, true});
  return {std::move(d), detail::two_value_witness(n, ground_kind(g)), {}};
}

/// Sum over pairs of d_2. Only repetition invariant for n <= 3.
inline CatalogEntry sum_based(std::size_t n, Ground g) {
  NDistance d(std::string("sum-") + to_string(g), n, ground_kind(g), [g](std::span<const Point> p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) sum += ground_distance(g, p[i], p[j]);
    return sum;
  });
  detail::mark_standard(d).set_traits({true, n <= 3, n <= 3});
  return {std::move(d), detail::two_value_witness(n, ground_kind(g)), {}};
}

/// mean - min on the real line.
inline CatalogEntry arithmetic_mean(std::size_t n) {
  NDistance d("arithmetic-mean", n, SpaceKind::real_line, [](std::span<const Point> p) {
    double lo = p.front().as_real();
    for (const Point& q : p) lo = std::min(lo, q.as_real());
    // summing offsets keeps constant tuples at exactly zero
    double s = 0.0;
    for (const Point& q : p) s += q.as_real() - lo;
    return s / static_cast<double>(p.size());
  });
  detail::mark_standard(d).set_traits({true, n <= 2, n <= 2});
  return {std::move(d), detail::two_value_witness(n, SpaceKind::real_line), {}};
}

/// min over x in X of sum_i d_2(x_i, x). Best constant open; only the
/// published upper bound is attached.
inline CatalogEntry fermat(std::size_t n, Ground g, const Space& space) {
  Space captured = space;
  NDistance d(std::string("fermat-") + to_string(g), n, space.kind(), [g, captured](std::span<const Point> p) {
    return geometry::fermat_value(p, g, captured).value;
  });
  const double nn = static_cast<double>(n);
  d.set_bounds({1.0 / (nn - 1.0), (4.0 * nn - 4.0) / (3.0 * nn * nn - 4.0 * nn), false});
  d.set_traits({std::nullopt, n >= 4 ? std::optional<bool>(false) : std::nullopt,
                n >= 4 ? std::optional<bool>(false) : std::nullopt});
  return {std::move(d), {}, {}};
}

/// Number of distinct lines through pairs of distinct points.
inline CatalogEntry line_count(std::size_t n) {
  NDistance d("line-count", n, SpaceKind::plane, [](std::span<const Point> p) {
    auto pts = detail::planar_points(p);
    return static_cast<double>(geometry::count_lines(pts));
  });
  d.set_traits({n == 2, true, true});
  if (n == 2) {
    d.set_known_constant(1.0);
  } else {
    const double nn = static_cast<double>(n);
    d.set_bounds({1.0 / (nn - 2.0 + 2.0 / nn), 1.0 / (nn - 2.0), true});
  }
  // points on a parabola (no three collinear) with z equal to the first one
  // realize the published lower bound
  auto hint = [n](const Space& space) -> std::optional<Candidate> {
    if (space.kind() != SpaceKind::plane || n < 3) return std::nullopt;
    std::vector<Point> t;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = static_cast<double>(i);
      t.push_back(Point::planar(u, u * u));
    }
    Point z = t.front();
    return Candidate{Tuple(std::move(t)), z};
  };
  return {std::move(d), {}, hint};
}

inline CatalogEntry enclosing_radius(std::size_t n) {
  NDistance d("enclosing-radius", n, SpaceKind::plane, [](std::span<const Point> p) {
    auto pts = detail::planar_points(p);
    return geometry::smallest_enclosing_circle(pts).radius;
  });
  detail::mark_standard(d).set_traits({true, true, true});
  return {std::move(d), detail::two_value_witness(n, SpaceKind::plane), {}};
}

/// pi r^2 of the smallest enclosing circle; an n-distance only for n >= 3.
inline CatalogEntry enclosing_area(std::size_t n) {
  detail::require_arity(n, 3, "enclosing-area");
  NDistance d("enclosing-area", n, SpaceKind::plane, [](std::span<const Point> p) {
    auto pts = detail::planar_points(p);
    const double r = geometry::smallest_enclosing_circle(pts).radius;
    return std::numbers::pi * r * r;
  });
  d.set_known_constant(1.0 / (static_cast<double>(n) - 1.5));
  for (std::size_t k = 2; k <= n; ++k) d.set_known_k_constant(k, 1.0 / (static_cast<double>(k) - 1.5));
  d.set_traits({false, true, true});
  // x_1 != x_2 and x_3 = ... = x_n = z = (x_1 + x_2) / 2
  auto witness = [n](const Space& space) -> std::optional<Candidate> {
    if (space.kind() != SpaceKind::plane) return std::nullopt;
    auto [x1, x2] = detail::two_points(space);
    const Point mid = detail::midpoint(x1, x2);
    std::vector<Point> t(n, mid);
    t[0] = x1;
    t[1] = x2;
    return Candidate{Tuple(std::move(t)), mid};
  };
  return {std::move(d), witness, {}};
}

/// Diameter under the sup norm of R^q, q in {1, 2}.
inline CatalogEntry chebyshev_diameter(std::size_t n, std::size_t q) {
  if (q != 1 && q != 2) throw Error(Errc::domain_error, "chebyshev-diameter supports q = 1 or q = 2");
  const SpaceKind kind = q == 1 ? SpaceKind::real_line : SpaceKind::plane;
  NDistance d("chebyshev-diameter", n, kind, [](std::span<const Point> p) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        best = std::max(best, ground_distance(Ground::chebyshev, p[i], p[j]));
    return best;
  });
  detail::mark_standard(d).set_traits({true, true, true});
  return {std::move(d), detail::two_value_witness(n, kind), {}};
}

inline double largest_gap(std::span<const Point> p) {
  std::vector<double> v;
  v.reserve(p.size());
  for (const Point& q : p) v.push_back(q.as_real());
  std::sort(v.begin(), v.end());
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) gap = std::max(gap, v[i + 1] - v[i]);
  return gap;
}

/// Length of a largest gap between consecutive order statistics.
/// K*_n = 2/n and K*_{n,k} = 2/k.
inline CatalogEntry largest_inner_interval(std::size_t n) {
  NDistance d("inner-interval", n, SpaceKind::real_line, largest_gap);
  const double nn = static_cast<double>(n);
  d.set_known_constant(2.0 / nn);
  for (std::size_t k = 2; k <= n; ++k) d.set_known_k_constant(k, 2.0 / static_cast<double>(k));
  d.set_traits({n == 2, true, n == 2});
  return {std::move(d), detail::midpoint_witness(n), {}};
}

/// Largest gap raised to the p-th power; an n-distance iff n >= 2^p, with
/// best constant 2^p / n.
inline CatalogEntry inner_interval_power(std::size_t n, unsigned p) {
  if (p < 1) throw Error(Errc::domain_error, "inner-interval-power requires p >= 1");
  if (p >= 63 || n < (std::size_t{1} << p)) {
    throw Error(Errc::domain_error, "inner-interval-power with p = " + std::to_string(p) +
                                        " is not an n-distance for n = " + std::to_string(n) + " (needs n >= 2^p)");
  }
  NDistance d("inner-interval-power", n, SpaceKind::real_line,
              [p](std::span<const Point> pts) { return std::pow(largest_gap(pts), static_cast<double>(p)); });
  d.set_known_constant(std::ldexp(1.0, static_cast<int>(p)) / static_cast<double>(n));
  d.set_traits({std::nullopt, true, std::nullopt});
  return {std::move(d), detail::midpoint_witness(n), {}};
}

/// Members of a multi-arity family, keyed by arity. The arity-2 member plays
/// the role of d_2.
using Family = std::map<std::size_t, NDistance>;

inline Family enclosing_radius_family(std::size_t max_arity) {
  Family f;
  for (std::size_t n = 2; n <= max_arity; ++n) f.emplace(n, enclosing_radius(n).distance);
  return f;
}

inline Family line_count_family(std::size_t max_arity) {
  Family f;
  for (std::size_t n = 2; n <= max_arity; ++n) f.emplace(n, line_count(n).distance);
  return f;
}

/// Arithmetic-mean distances for n >= 3; with `doubled` the binary member is
/// d_n(x,z,..,z) + d_n(z,x,..,x) = |x - z|, twice the binary arithmetic mean.
inline Family arithmetic_mean_family(std::size_t max_arity, bool doubled) {
  Family f;
  if (doubled) {
    NDistance d2("arithmetic-mean-doubled", 2, SpaceKind::real_line,
                 [](std::span<const Point> p) { return std::abs(p[0].as_real() - p[1].as_real()); });
    d2.set_known_constant(1.0);
    f.emplace(2, std::move(d2));
  } else {
    f.emplace(2, arithmetic_mean(2).distance);
  }
  for (std::size_t n = 3; n <= max_arity; ++n) f.emplace(n, arithmetic_mean(n).distance);
  return f;
}

}  // namespace catalog
}  // namespace simplex_lab

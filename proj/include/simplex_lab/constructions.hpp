#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "simplex_lab/catalog.hpp"
#include "simplex_lab/core.hpp"
#include "simplex_lab/properties.hpp"

namespace simplex_lab {

/// A standard base distance rescaled near one or two anchor points so that
/// its best constant is a prescribed s.
struct PrescribedDistance {
  NDistance distance;
  std::vector<Point> anchors;
  double s = 0.0;
  double C = 0.0;
};

namespace detail {

inline bool contains_point(std::span<const Point> t, const Point& p) {
  return std::find(t.begin(), t.end(), p) != t.end();
}

inline void require_member(const Space& space, const Point& p, const char* what) {
  if (!space.contains(p)) throw Error(Errc::invalid_argument, std::string(what) + " is not a point of the space");
}

}  // namespace detail

/// d_s = C d on tuples containing e and d elsewhere, where
/// C = (1/s) sup over e-free tuples of d(x) / sum_i d(x)_i^e. The sup is taken
/// by exhaustive enumeration, so only finite spaces are accepted.
inline PrescribedDistance build_single_anchor(const NDistance& base, const Point& e, double s, const Space& space) {
  const std::size_t n = base.arity();
  if (!space.is_finite()) throw Error(Errc::space_mismatch, "single-anchor build needs a finite space");
  if (space.size() < 3) throw Error(Errc::domain_error, "single-anchor build needs |X| >= 3");
  if (base.traits().standard != true) throw Error(Errc::invalid_argument, base.name() + " is not flagged standard");
  detail::require_member(space, e, "anchor e");
  const double lo = 1.0 / static_cast<double>(n - 1);
  if (!(s >= lo - 1e-15 && s <= 1.0)) {
    throw Error(Errc::domain_error, "single-anchor build needs s in [1/(n-1), 1], got " + format_double(s));
  }

  double sup = 0.0;
  std::vector<Point> buffer;
  space.for_each_tuple(n, [&](std::span<const Point> x) {
    if (detail::contains_point(x, e) || distinct_count(x) < 2) return;
    buffer.assign(x.begin(), x.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      buffer[i] = e;
      sum += base(std::span<const Point>(buffer));
      buffer[i] = x[i];
    }
    sup = std::max(sup, base(x) / sum);
  });
  const double C = sup / s;

  NDistance source = base;
  NDistance d("single-anchor(" + base.name() + ",s=" + format_double(s) + ")", n, SpaceKind::finite,
              [source, e, C](std::span<const Point> x) {
                const double value = source(x);
                return detail::contains_point(x, e) ? C * value : value;
              });
  d.set_known_constant(s);
  d.set_traits({std::abs(s - lo) <= 1e-15, base.traits().repetition_invariant, std::nullopt});
  if (base.name() == "drastic") {
    // closed form for the drastic base
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      d.set_known_k_constant(k, std::max(static_cast<double>(n) * s / kk, 1.0 / (kk - 1.0)));
    }
  }
  return {std::move(d), {e}, s, C};
}

/// Drastic distance scaled by C = 2/(1/s - n + 2) on tuples containing both
/// anchors a and b; K*_{n,k} = 1/(1/s - n + k).
inline PrescribedDistance build_two_anchor(const Point& a, const Point& b, double s, std::size_t n,
                                           const Space& space) {
  if (n < 3) throw Error(Errc::domain_error, "two-anchor build needs n >= 3");
  if (!space.is_finite() || space.size() < 4) throw Error(Errc::domain_error, "two-anchor build needs |X| >= 4");
  detail::require_member(space, a, "anchor a");
  detail::require_member(space, b, "anchor b");
  if (a == b) throw Error(Errc::invalid_argument, "two-anchor build needs distinct anchors");
  const double nn = static_cast<double>(n);
  const double lo = 1.0 / (nn - 1.0), hi = 1.0 / (nn - 2.0);
  if (!(s >= lo - 1e-15 && s < hi)) {
    throw Error(Errc::domain_error, "two-anchor build needs s in [1/(n-1), 1/(n-2)), got " + format_double(s));
  }
  const double C = 2.0 / (1.0 / s - nn + 2.0);
  NDistance d("two-anchor(s=" + format_double(s) + ")", n, SpaceKind::finite, [a, b, C](std::span<const Point> x) {
    if (catalog::detail::constant(x)) return 0.0;
    return detail::contains_point(x, a) && detail::contains_point(x, b) ? C : 1.0;
  });
  d.set_known_constant(s);
  for (std::size_t k = 2; k <= n; ++k) d.set_known_k_constant(k, 1.0 / (1.0 / s - nn + static_cast<double>(k)));
  d.set_traits({std::abs(s - lo) <= 1e-15, true, true});
  return {std::move(d), {a, b}, s, C};
}

/// Standard repetition-invariant n-distance on X = {y_1, ..., y_k, e} at
/// which the strong k-simplex constant 1/(k-1) + 1/(k(k-1)(n-1)) is attained.
/// Level values are kept as exact rationals.
class AppendixWitness {
 public:
  using Rational = boost::rational<std::int64_t>;

  AppendixWitness(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (k < 2 || k + 1 > n) throw Error(Errc::domain_error, "appendix witness needs 2 <= k <= n-1");
    const auto nn = static_cast<std::int64_t>(n), kk = static_cast<std::int64_t>(k);
    a_ = Rational((kk - 1) * (nn - 1), kk * (nn - 1) + 1);
    b_ = Rational(kk * (nn - 1), kk * (nn - 1) + 1);
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= k; ++i) labels.push_back("y" + std::to_string(i));
    labels.push_back("e");
    space_ = Space::finite(std::move(labels));
  }

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  Rational a() const { return a_; }
  Rational b() const { return b_; }
  const Space& space() const { return *space_; }
  Point e() const { return Point::symbol(k_); }

  /// Exact value on a tuple of any length over the k+1 letters.
  Rational exact(std::span<const Point> x) const {
    std::vector<bool> seen(k_ + 1, false);
    std::size_t distinct = 0;
    for (const Point& p : x) {
      const std::size_t i = p.as_symbol();
      if (i > k_) throw Error(Errc::space_mismatch, "point outside {y_1..y_k, e}");
      if (!seen[i]) {
        seen[i] = true;
        ++distinct;
      }
    }
    if (distinct <= 1) return Rational(0);
    if (!seen[k_]) return Rational(static_cast<std::int64_t>(distinct - 1), static_cast<std::int64_t>(k_ - 1));
    return distinct == k_ + 1 ? b_ : a_;
  }

  NDistance distance() const {
    AppendixWitness self = *this;
    NDistance d("appendix-witness(n=" + std::to_string(n_) + ",k=" + std::to_string(k_) + ")", n_,
                SpaceKind::finite, [self](std::span<const Point> x) { return boost::rational_cast<double>(self.exact(x)); });
    d.set_known_constant(1.0 / static_cast<double>(n_ - 1));
    for (std::size_t j = 2; j <= n_; ++j) d.set_known_k_constant(j, 1.0 / static_cast<double>(j - 1));
    d.set_traits({true, true, std::nullopt});
    return d;
  }

  /// 1/(k-1) + 1/(k(k-1)(n-1)), exactly.
  Rational strong_constant() const {
    const auto nn = static_cast<std::int64_t>(n_), kk = static_cast<std::int64_t>(k_);
    return Rational(1, kk - 1) + Rational(1, kk * (kk - 1) * (nn - 1));
  }

  /// d'(y_1..y_k) / sum_i d'(y_1..y_k)_i^e for the reduced map of `parts`,
  /// evaluated in rational arithmetic.
  Rational strong_ratio(const Composition& parts) const {
    if (parts.size() != k_) throw Error(Errc::domain_error, "composition must have k parts");
    auto reduced = [&](std::span<const Point> y) {
      std::vector<Point> expanded;
      for (std::size_t i = 0; i < k_; ++i) expanded.insert(expanded.end(), parts[i], y[i]);
      if (expanded.size() != n_) throw Error(Errc::domain_error, "composition must sum to n");
      return exact(expanded);
    };
    std::vector<Point> y;
    for (std::size_t i = 0; i < k_; ++i) y.push_back(Point::symbol(i));
    const Rational numerator = reduced(y);
    Rational denominator(0);
    for (std::size_t i = 0; i < k_; ++i) {
      std::vector<Point> section = y;
      section[i] = e();
      denominator += reduced(section);
    }
    return numerator / denominator;
  }

 private:
  std::size_t n_;
  std::size_t k_;
  Rational a_;
  Rational b_;
  std::optional<Space> space_;
};

inline AppendixWitness build_appendix_witness(std::size_t n, std::size_t k) { return AppendixWitness(n, k); }

}  // namespace simplex_lab

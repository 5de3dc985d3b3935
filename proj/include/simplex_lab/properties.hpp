#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simplex_lab/catalog.hpp"
#include "simplex_lab/core.hpp"
#include "simplex_lab/search.hpp"
#include "simplex_lab/verdict.hpp"

namespace simplex_lab {

/// (n_1, ..., n_k), each part >= 1, summing to n.
using Composition = std::vector<std::size_t>;

/// All compositions of n into k parts, in lexicographic order; there are
/// C(n-1, k-1) of them.
inline std::vector<Composition> compositions(std::size_t n, std::size_t k) {
  std::vector<Composition> out;
  if (k == 0 || k > n) return out;
  Composition current(k, 1);
  current.back() = n - k + 1;
  auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == k) {
      current[pos] = remaining;
      out.push_back(current);
      return;
    }
    for (std::size_t part = 1; part + (k - pos - 1) <= remaining; ++part) {
      current[pos] = part;
      self(self, pos + 1, remaining - part);
    }
  };
  rec(rec, 0, n);
  return out;
}

inline std::string to_string(const Composition& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

/// d'(x_1..x_k) = d(n_1 . x_1, ..., n_k . x_k): each x_i repeated n_i times.
inline NDistance reduced_map(const NDistance& d, const Composition& parts) {
  std::size_t total = 0;
  for (std::size_t p : parts) {
    if (p == 0) throw Error(Errc::domain_error, "composition parts must be positive");
    total += p;
  }
  if (total != d.arity()) {
    throw Error(Errc::domain_error, "composition " + to_string(parts) + " does not sum to n = " +
                                        std::to_string(d.arity()));
  }
  if (parts.size() < 2) throw Error(Errc::domain_error, "reduced map needs at least 2 parts");
  NDistance source = d;
  NDistance out(d.name() + "'" + to_string(parts), parts.size(), d.space_kind(),
                [source, parts](std::span<const Point> x) {
                  std::vector<Point> expanded;
                  expanded.reserve(source.arity());
                  for (std::size_t i = 0; i < parts.size(); ++i) expanded.insert(expanded.end(), parts[i], x[i]);
                  return source(std::span<const Point>(expanded));
                });
  if (d.traits().repetition_invariant == true) out.set_traits({std::nullopt, true, std::nullopt});
  return out;
}

struct CheckOptions {
  std::size_t budget = 100000;
  std::uint64_t seed = 42;
  /// Relative slack on inequalities, and on equalities off finite spaces.
  double tolerance = 1e-12;
};

namespace detail {

inline bool leq(double lhs, double rhs, double tolerance) {
  return lhs <= rhs + tolerance * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

inline bool same(double a, double b, double tolerance, bool exact) {
  if (exact) return a == b;
  return std::abs(a - b) <= tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::string describe(const Space& space, std::span<const Point> t) { return space.format(t); }

inline Counterexample counterexample(std::string description, std::vector<Tuple> tuples, std::optional<Point> z,
                                     double lhs, double rhs, Composition composition = {}) {
  Counterexample c;
  c.description = std::move(description);
  c.tuples = std::move(tuples);
  c.z = std::move(z);
  c.composition = std::move(composition);
  c.lhs = lhs;
  c.rhs = rhs;
  return c;
}

inline void note_ratio(PropertyVerdict& v, double lhs, double rhs) {
  if (rhs > 0.0) {
    const double r = lhs / rhs;
    if (!v.max_ratio || r > *v.max_ratio) v.max_ratio = r;
  }
}

}  // namespace detail

/// Identity of indiscernibles, symmetry and the simplex inequality (with
/// constant 1), each checked over the probe stream of the space.
struct AxiomReport {
  PropertyVerdict identity;
  PropertyVerdict symmetry;
  PropertyVerdict simplex;

  bool all_passed() const { return identity.passed() && symmetry.passed() && simplex.passed(); }
  std::vector<PropertyVerdict> verdicts() const { return {identity, symmetry, simplex}; }
};

inline AxiomReport check_axioms(const NDistance& d, const Space& space, const CheckOptions& opts = {}) {
  const std::size_t n = d.arity();
  const bool exact = space.is_finite();
  AxiomReport r;
  r.identity.property = "identity";
  r.symmetry.property = "symmetry";
  r.simplex.property = "simplex-inequality";

  std::vector<Point> buffer;
  std::size_t trials = search::for_each_probe(space, n + 1, opts.budget, opts.seed, [&](std::span<const Point> p) {
    const auto x = p.first(n);
    const Point& z = p[n];
    const double value = d(x);
    const bool constant = distinct_count(x) == 1;
    if (value < 0.0 || std::isnan(value) || (value == 0.0) != constant) {
      r.identity.record_violation(detail::counterexample(
          "d" + detail::describe(space, x) + " = " + format_double(value) + (constant ? " on a constant tuple" : ""),
          {Tuple(x)}, std::nullopt, value, 0.0));
    }

    Tuple t(x);
    for (const std::vector<Point>& perm : {t.sorted(), std::vector<Point>(x.rbegin(), x.rend())}) {
      const double other = d(std::span<const Point>(perm));
      if (!detail::same(value, other, opts.tolerance, exact)) {
        r.symmetry.record_violation(detail::counterexample(
            "d" + detail::describe(space, x) + " != d" + detail::describe(space, perm), {t, Tuple(perm)},
            std::nullopt, std::abs(value - other), 0.0));
      }
    }

    if (!constant) {
      buffer.assign(x.begin(), x.end());
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        buffer[i] = z;
        sum += d(std::span<const Point>(buffer));
        buffer[i] = x[i];
      }
      detail::note_ratio(r.simplex, value, sum);
      if (!detail::leq(value, sum, opts.tolerance)) {
        r.simplex.record_violation(detail::counterexample(
            "d" + detail::describe(space, x) + " > sum of sections at z = " + space.format(z), {t}, z, value, sum));
      }
    }
  });
  r.identity.trials = r.symmetry.trials = r.simplex.trials = trials;
  return r;
}

/// For every composition of n into k parts and every probed (x_1..x_k; z):
/// d'(x) <= M sum_i d'(x)_i^z.
inline PropertyVerdict check_strong_k_simplex(const NDistance& d, std::size_t k, double M, const Space& space,
                                              const CheckOptions& opts = {}) {
  const std::size_t n = d.arity();
  if (k < 2 || k > n) throw Error(Errc::domain_error, "strong k-simplex needs 2 <= k <= n");
  if (!(M > 0.0)) throw Error(Errc::domain_error, "strong k-simplex constant must be positive");
  PropertyVerdict v;
  v.property = "strong-" + std::to_string(k) + "-simplex";
  std::vector<Point> buffer;
  for (const Composition& parts : compositions(n, k)) {
    const NDistance reduced = reduced_map(d, parts);
    v.trials += search::for_each_probe(space, k + 1, opts.budget, opts.seed, [&](std::span<const Point> p) {
      const auto x = p.first(k);
      const Point& z = p[k];
      const double value = reduced(x);
      if (value == 0.0) return;
      buffer.assign(x.begin(), x.end());
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        buffer[i] = z;
        sum += reduced(std::span<const Point>(buffer));
        buffer[i] = x[i];
      }
      detail::note_ratio(v, value, sum);
      if (!detail::leq(value, M * sum, opts.tolerance)) {
        v.record_violation(detail::counterexample("d'" + to_string(parts) + detail::describe(space, x) + " > M * " +
                                                      format_double(sum) + " at z = " + space.format(z),
                                                  {Tuple(x)}, z, value, M * sum, parts));
      }
    });
  }
  return v;
}

/// Optimal strong k-simplex constant of a standard repetition-invariant
/// n-distance: 1/(k-1) + 1/(k(k-1)(n-1)), and 1/(n-1) when k = n.
inline double strong_constant_standard(std::size_t n, std::size_t k) {
  if (n < 2 || k < 2 || k > n) throw Error(Errc::domain_error, "strong constant needs 2 <= k <= n");
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  if (k == n) return 1.0 / (nn - 1.0);
  return 1.0 / (kk - 1.0) + 1.0 / (kk * (kk - 1.0) * (nn - 1.0));
}

struct StrongConstant {
  double value = 0.0;
  /// k >= n + 2 - 1/K*_n: the constant is at most 1.
  bool at_most_one = false;
  /// k <= n + 1 - 1/K*_n: the constant exceeds 1.
  bool above_one = false;
};

/// (K+1)/(1/K - n + k) - K/k, for n - 1/K < k < n.
inline StrongConstant strong_constant_general(std::size_t n, std::size_t k, double K) {
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  constexpr double eps = 1e-12;
  if (!(K > 0.0) || !(nn - 1.0 / K < kk - eps) || k >= n) {
    throw Error(Errc::domain_error, "general strong constant needs n - 1/K < k < n");
  }
  StrongConstant c;
  c.value = (K + 1.0) / (1.0 / K - nn + kk) - K / kk;
  c.at_most_one = kk >= nn + 2.0 - 1.0 / K - eps;
  c.above_one = kk <= nn + 1.0 - 1.0 / K + eps;
  return c;
}

namespace detail {

struct LemmaTerms {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of the mixed bound at (x_1..x_k; z), with x_k repeated n-k+1
/// times on the left and z repeated n-k+1 times in the last term.
inline LemmaTerms lemma_terms(const NDistance& d, std::span<const Point> x, const Point& z, std::size_t p,
                              std::vector<Point>& buffer) {
  const std::size_t n = d.arity(), k = x.size();
  const double kk = static_cast<double>(k), pp = static_cast<double>(p);
  const double c1 = (kk + pp) / ((kk - 1.0) * (kk + pp - 1.0));
  const double c2 = (pp + 1.0) / ((kk - 1.0) * (kk + pp - 1.0));
  buffer.assign(x.begin(), x.end() - 1);
  buffer.insert(buffer.end(), n - k + 1, x[k - 1]);
  LemmaTerms t;
  t.lhs = d(std::span<const Point>(buffer));
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    buffer[i] = z;
    sum += d(std::span<const Point>(buffer));
    buffer[i] = x[i];
  }
  std::fill(buffer.begin() + static_cast<std::ptrdiff_t>(k - 1), buffer.end(), z);
  t.rhs = c1 * sum + c2 * d(std::span<const Point>(buffer));
  return t;
}

}  // namespace detail

/// The two-coefficient mixed bound for standard repetition-invariant
/// distances, plus its tightness at the cardinality distance with distinct
/// x_1..x_k and z = x_k.
inline PropertyVerdict check_lemma_mixed_bound(const NDistance& d, std::size_t k, std::size_t p, const Space& space,
                                               const CheckOptions& opts = {}) {
  const std::size_t n = d.arity();
  if (k < 2 || k + 1 > n) throw Error(Errc::domain_error, "mixed bound needs 2 <= k <= n-1");
  if (p > n - k) throw Error(Errc::domain_error, "mixed bound needs 0 <= p <= n-k");
  PropertyVerdict v;
  v.property = "mixed-bound(k=" + std::to_string(k) + ",p=" + std::to_string(p) + ")";
  if (d.traits().standard != true || d.traits().repetition_invariant != true) {
    v.status = Status::not_applicable;
    v.detail = "requires a standard repetition-invariant distance";
    return v;
  }
  std::vector<Point> buffer;
  v.trials = search::for_each_probe(space, k + 1, opts.budget, opts.seed, [&](std::span<const Point> q) {
    const auto x = q.first(k);
    const auto terms = detail::lemma_terms(d, x, q[k], p, buffer);
    detail::note_ratio(v, terms.lhs, terms.rhs);
    if (!detail::leq(terms.lhs, terms.rhs, opts.tolerance)) {
      v.record_violation(detail::counterexample("mixed bound fails at " + detail::describe(space, x) +
                                                    " with z = " + space.format(q[k]),
                                                {Tuple(x)}, q[k], terms.lhs, terms.rhs));
    }
  });

  const Space letters = Space::finite(k);
  const NDistance dc = catalog::cardinality(n).distance;
  const std::vector<Point> distinct = letters.elements();
  const auto tight = detail::lemma_terms(dc, distinct, distinct.back(), p, buffer);
  v.relations.push_back(make_relation("cardinality witness attains the bound", tight.lhs, tight.rhs, 1e-12));
  if (!v.relations.back().equality) {
    v.status = Status::fail;
    v.detail = "bound not attained at the cardinality witness";
  }
  return v;
}

/// Equal underlying sets give equal values. Exhaustive on finite spaces
/// (grouped by underlying set); elsewhere each probed tuple is compared with
/// every redistribution of one repeated argument onto another value.
inline PropertyVerdict check_repetition_invariance(const NDistance& d, const Space& space,
                                                   const CheckOptions& opts = {}) {
  const std::size_t n = d.arity();
  const bool exact = space.is_finite();
  PropertyVerdict v;
  v.property = "repetition-invariance";
  if (exact && space.enumeration_size(n) <= opts.budget) {
    std::map<std::vector<Point>, std::pair<Tuple, double>> first;
    space.for_each_tuple(n, [&](std::span<const Point> x) {
      ++v.trials;
      Tuple t(x);
      const double value = d(x);
      auto [it, inserted] = first.try_emplace(t.underlying_set(), t, value);
      if (!inserted && !detail::same(it->second.second, value, opts.tolerance, true)) {
        v.record_violation(detail::counterexample(
            "d" + space.format(it->second.first.points()) + " = " + format_double(it->second.second) + " but d" +
                space.format(x) + " = " + format_double(value),
            {it->second.first, t}, std::nullopt, std::max(value, it->second.second),
            std::min(value, it->second.second)));
      }
    });
    return v;
  }
  std::vector<Point> moved;
  v.trials = search::for_each_probe(space, n, opts.budget, opts.seed, [&](std::span<const Point> x) {
    const Tuple t(x);
    const std::vector<Point> set = t.underlying_set();
    if (set.size() == n || set.size() == 1) return;
    const double value = d(x);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::count(x.begin(), x.end(), x[i]) < 2) continue;
      for (const Point& other : set) {
        if (other == x[i]) continue;
        moved.assign(x.begin(), x.end());
        moved[i] = other;
        const double value2 = d(std::span<const Point>(moved));
        if (!detail::same(value, value2, opts.tolerance, exact)) {
          v.record_violation(detail::counterexample(
              "d" + space.format(x) + " = " + format_double(value) + " but d" + space.format(moved) + " = " +
                  format_double(value2),
              {t, Tuple(moved)}, std::nullopt, std::max(value, value2), std::min(value, value2)));
        }
      }
    }
  });
  return v;
}

/// d(x) >= d(x with x_j replaced by x_i) for all i != j. On a pass the
/// implied repetition invariance is checked too and reported as a relation;
/// its failure would contradict the implication and marks the verdict failed.
inline PropertyVerdict check_nonincreasing_identification(const NDistance& d, const Space& space,
                                                          const CheckOptions& opts = {}) {
  const std::size_t n = d.arity();
  PropertyVerdict v;
  v.property = "nonincreasing-identification";
  std::vector<Point> moved;
  v.trials = search::for_each_probe(space, n, opts.budget, opts.seed, [&](std::span<const Point> x) {
    const double value = d(x);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || x[i] == x[j]) continue;
        moved.assign(x.begin(), x.end());
        moved[j] = x[i];
        const double identified = d(std::span<const Point>(moved));
        if (!detail::leq(identified, value, opts.tolerance)) {
          v.record_violation(detail::counterexample(
              format_double(value) + " = d" + space.format(x) + " < d" + space.format(moved) + " = " +
                  format_double(identified),
              {Tuple(x), Tuple(moved)}, std::nullopt, identified, value));
        }
      }
    }
  });
  if (v.passed()) {
    const PropertyVerdict ri = check_repetition_invariance(d, space, opts);
    v.relations.push_back(Relation{"implies repetition invariance", 0.0, 0.0, ri.passed(), true});
    if (!ri.passed()) {
      v.status = Status::fail;
      v.detail = "nonincreasing but not repetition invariant";
      v.counterexample = ri.counterexample;
      v.worst = ri.worst;
    }
  }
  return v;
}

/// Per-arity results of the multidistance checks.
struct ArityVerdicts {
  std::size_t n = 0;
  PropertyVerdict triangle;    // d_n(x) <= sum_i d_2(x_i, z)
  PropertyVerdict sufficient;  // d_n(x, z, ..., z) <= d_2(x, z)
  PropertyVerdict lemma;       // d_n(x_1..x_k, z..z) <= sum_{i<=k} d_2(x_i, z)
  /// d_n(x, z, ..., z) == d_2(x, z) on every probe.
  bool sufficient_equality = true;
};

struct MultidistanceReport {
  std::vector<ArityVerdicts> arities;
  PropertyVerdict overall;
};

/// Multidistance condition for a family keyed by arity (the arity-2 member
/// is d_2), with the sufficient condition and the intermediate bounds.
inline MultidistanceReport check_multidistance(const catalog::Family& family, const Space& space,
                                               const CheckOptions& opts = {}) {
  if (!family.contains(2)) throw Error(Errc::invalid_argument, "family needs an arity-2 member");
  const NDistance& d2 = family.at(2);
  MultidistanceReport report;
  report.overall.property = "multidistance";
  std::vector<Point> buffer;
  for (const auto& [n, dn] : family) {
    ArityVerdicts a;
    a.n = n;
    a.triangle.property = "multidistance-triangle(n=" + std::to_string(n) + ")";
    a.sufficient.property = "sufficient-condition(n=" + std::to_string(n) + ")";
    a.lemma.property = "intermediate-bounds(n=" + std::to_string(n) + ")";

    auto g = [&](const Point& x, const Point& z) {
      const Point pair[2] = {x, z};
      return d2(std::span<const Point>(pair, 2));
    };

    a.triangle.trials = search::for_each_probe(space, n + 1, opts.budget, opts.seed, [&](std::span<const Point> p) {
      const auto x = p.first(n);
      const Point& z = p[n];
      const double value = dn(x);
      double sum = 0.0;
      for (const Point& xi : x) sum += g(xi, z);
      detail::note_ratio(a.triangle, value, sum);
      if (!detail::leq(value, sum, opts.tolerance)) {
        a.triangle.record_violation(detail::counterexample(
            "d_" + std::to_string(n) + space.format(x) + " = " + format_double(value) + " > " + format_double(sum) +
                " = sum d_2(x_i, " + space.format(z) + ")",
            {Tuple(x)}, z, value, sum));
      }
    });

    a.sufficient.trials = search::for_each_probe(space, 2, opts.budget, opts.seed, [&](std::span<const Point> p) {
      buffer.assign(n, p[1]);
      buffer[0] = p[0];
      const double value = dn(std::span<const Point>(buffer));
      const double bound = g(p[0], p[1]);
      if (value != bound) a.sufficient_equality = false;
      if (!detail::leq(value, bound, opts.tolerance)) {
        a.sufficient.record_violation(detail::counterexample(
            "d_" + std::to_string(n) + space.format(buffer) + " > d_2" + space.format(p), {Tuple(buffer)}, p[1],
            value, bound));
      }
    });

    if (!a.sufficient.passed()) {
      a.lemma.status = Status::not_applicable;
      a.lemma.detail = "sufficient condition fails";
    } else {
      a.lemma.trials = search::for_each_probe(space, n + 1, opts.budget, opts.seed, [&](std::span<const Point> p) {
        const Point& z = p[n];
        for (std::size_t k = 1; k <= n; ++k) {
          buffer.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
          buffer.resize(n, z);
          const double value = dn(std::span<const Point>(buffer));
          double sum = 0.0;
          for (std::size_t i = 0; i < k; ++i) sum += g(p[i], z);
          detail::note_ratio(a.lemma, value, sum);
          if (!detail::leq(value, sum, opts.tolerance)) {
            a.lemma.record_violation(detail::counterexample(
                "k=" + std::to_string(k) + ": d_" + std::to_string(n) + space.format(buffer) + " > " +
                    format_double(sum),
                {Tuple(buffer)}, z, value, sum));
          }
        }
      });
    }

    if (a.triangle.failed()) {
      report.overall.status = Status::fail;
      if (!report.overall.counterexample) report.overall.counterexample = a.triangle.counterexample;
    }
    report.overall.trials += a.triangle.trials;
    report.arities.push_back(std::move(a));
  }
  return report;
}

/// The restriction d_n of a multidistance is an n-distance when it is
/// nonincreasing under identification and d_2(x, z) <= d_n(x, z, ..., z).
/// Checks both hypotheses, then the simplex inequality.
inline PropertyVerdict check_multi_to_ndistance(const NDistance& dn, const NDistance& d2, const Space& space,
                                                const CheckOptions& opts = {}) {
  const std::size_t n = dn.arity();
  if (d2.arity() != 2) throw Error(Errc::arity_mismatch, "d_2 must be binary");
  PropertyVerdict v;
  v.property = "multi-to-n-distance(n=" + std::to_string(n) + ")";

  const PropertyVerdict ni = check_nonincreasing_identification(dn, space, opts);
  v.relations.push_back(Relation{"nonincreasing under identification", 0.0, 0.0, ni.passed(), true});

  bool dominated = true;
  std::vector<Point> buffer;
  search::for_each_probe(space, 2, opts.budget, opts.seed, [&](std::span<const Point> p) {
    buffer.assign(n, p[1]);
    buffer[0] = p[0];
    if (!detail::leq(d2(p), dn(std::span<const Point>(buffer)), opts.tolerance)) dominated = false;
  });
  v.relations.push_back(Relation{"d_2(x,z) <= d_n(x,z,...,z)", 0.0, 0.0, dominated, dominated});

  if (!ni.passed() || !dominated) {
    v.status = Status::not_applicable;
    v.detail = !ni.passed() ? "not nonincreasing under identification" : "d_2 exceeds d_n(x,z,...,z)";
    if (!ni.passed()) v.counterexample = ni.counterexample;
    return v;
  }
  const AxiomReport axioms = check_axioms(dn, space, opts);
  v.trials = axioms.simplex.trials;
  v.max_ratio = axioms.simplex.max_ratio;
  if (!axioms.simplex.passed()) {
    v.status = Status::fail;
    v.counterexample = axioms.simplex.counterexample;
    v.worst = axioms.simplex.worst;
  }
  return v;
}

}  // namespace simplex_lab

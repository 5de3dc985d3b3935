#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "simplex_lab/catalog.hpp"
#include "simplex_lab/core.hpp"
#include "simplex_lab/search.hpp"
#include "simplex_lab/verdict.hpp"

namespace simplex_lab {

enum class Method { exact, sampled, analytic };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact-enumeration";
    case Method::sampled: return "sampled";
    case Method::analytic: return "analytic";
  }
  return "?";
}

/// (x_1..x_n; z) with the ratio d(x) / sum_{i in indices} d(x)_i^z it achieves.
struct Witness {
  Tuple tuple;
  Point z = Point::symbol(0);
  double ratio = 0.0;
  std::vector<std::size_t> indices;  // 0-based, ascending

  std::size_t k() const { return indices.size(); }
  Candidate candidate() const { return {tuple, z}; }
};

struct ConstantEstimate {
  std::size_t n = 0;
  std::size_t k = 0;  // k == n for the full constant
  double lower_bound = 0.0;
  std::optional<double> analytic;
  std::optional<Witness> witness;
  Method method = Method::sampled;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// A zero partial denominator was met: no K_{n,k} exists for this k.
  bool unbounded = false;
};

struct EstimateOptions {
  std::size_t budget = 100000;
  std::uint64_t seed = 42;
  /// nullopt: exact on finite spaces, sampled elsewhere.
  std::optional<Method> method;
  std::size_t refinement_rounds = 20;
  std::vector<Candidate> hints;
  std::size_t batch_size = 4096;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// d(t) / sum_{i in S} d(t)_i^z. A zero denominator yields +infinity, which
/// signals that no partial constant exists for that index set.
inline double ratio(const NDistance& d, const Tuple& t, const Point& z, std::span<const std::size_t> indices) {
  if (t.distinct_count() < 2) throw Error(Errc::degenerate_tuple, "ratio undefined for a constant tuple");
  if (indices.empty()) throw Error(Errc::invalid_argument, "ratio needs a nonempty index set");
  const double numerator = d(t);
  double denominator = 0.0;
  for (std::size_t i : indices) denominator += d(t.section(i, z));
  if (denominator == 0.0) return std::numeric_limits<double>::infinity();
  return numerator / denominator;
}

inline double ratio(const NDistance& d, const Tuple& t, const Point& z) {
  std::vector<std::size_t> all(t.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return ratio(d, t, z, all);
}

namespace detail {

struct Score {
  double ratio = 0.0;
  std::vector<std::size_t> indices;
};

/// Worst k-subset at (t; z): the k smallest section values. Ties go to the
/// lower index so the chosen subset is reproducible. `buffer` is scratch.
inline std::optional<Score> score(const NDistance& d, std::span<const Point> t, const Point& z, std::size_t k,
                                  std::vector<Point>& buffer, std::vector<double>& sections) {
  if (distinct_count(t) < 2) return std::nullopt;
  buffer.assign(t.begin(), t.end());
  const double numerator = d(std::span<const Point>(buffer));
  sections.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    buffer[i] = z;
    sections[i] = d(std::span<const Point>(buffer));
    buffer[i] = t[i];
  }
  Score s;
  s.indices.resize(t.size());
  std::iota(s.indices.begin(), s.indices.end(), std::size_t{0});
  if (k < t.size()) {
    std::stable_sort(s.indices.begin(), s.indices.end(),
                     [&](std::size_t a, std::size_t b) { return sections[a] < sections[b]; });
    s.indices.resize(k);
    std::sort(s.indices.begin(), s.indices.end());
  }
  double denominator = 0.0;
  for (std::size_t i : s.indices) denominator += sections[i];
  s.ratio = denominator == 0.0 ? std::numeric_limits<double>::infinity() : numerator / denominator;
  return s;
}

/// Running maximum with the lexicographic tie-break on (tuple, z).
class Best {
 public:
  void offer(const NDistance& d, std::span<const Point> t, const Point& z, std::size_t k, std::vector<Point>& buffer,
             std::vector<double>& sections) {
    ++trials_;
    auto s = score(d, t, z, k, buffer, sections);
    if (!s || std::isnan(s->ratio)) return;
    if (valid_ && s->ratio < witness_.ratio) return;
    Candidate c{Tuple(t), z};
    if (valid_ && s->ratio == witness_.ratio && !(c < witness_.candidate())) return;
    witness_ = {std::move(c.tuple), z, s->ratio, std::move(s->indices)};
    valid_ = true;
  }

  void merge(const Best& other) {
    trials_ += other.trials_;
    if (!other.valid_) return;
    if (!valid_ || other.witness_.ratio > witness_.ratio ||
        (other.witness_.ratio == witness_.ratio && other.witness_.candidate() < witness_.candidate())) {
      witness_ = other.witness_;
      valid_ = true;
    }
  }

  bool valid() const { return valid_; }
  const Witness& witness() const { return witness_; }
  std::size_t trials() const { return trials_; }

 private:
  bool valid_ = false;
  Witness witness_;
  std::size_t trials_ = 0;
};

inline std::vector<double> coordinates(const Candidate& c) {
  std::vector<double> out;
  auto push = [&](const Point& p) {
    if (p.kind() == SpaceKind::real_line) {
      out.push_back(p.as_real());
    } else {
      out.push_back(p.as_planar().x);
      out.push_back(p.as_planar().y);
    }
  };
  for (const Point& p : c.tuple) push(p);
  push(c.z);
  return out;
}

inline std::vector<Point> points_from(std::span<const double> coords, SpaceKind kind) {
  std::vector<Point> out;
  if (kind == SpaceKind::real_line) {
    for (double v : coords) out.push_back(Point::real(v));
  } else {
    for (std::size_t i = 0; i + 1 < coords.size(); i += 2) out.push_back(Point::planar(coords[i], coords[i + 1]));
  }
  return out;
}

/// Cyclic coordinate ascent on the ratio with a halving step.
inline void refine(const NDistance& d, const Space& space, std::size_t k, std::size_t rounds, Best& best) {
  if (!best.valid() || std::isinf(best.witness().ratio)) return;
  std::vector<Point> buffer;
  std::vector<double> sections;
  std::vector<double> coords = coordinates(best.witness().candidate());
  double current = best.witness().ratio;
  double step = 0.25 * space.box().width();
  for (std::size_t round = 0; round < rounds; ++round, step *= 0.5) {
    for (std::size_t c = 0; c < coords.size(); ++c) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> trial = coords;
        trial[c] += sign * step;
        auto pts = points_from(trial, space.kind());
        const Point z = pts.back();
        pts.pop_back();
        auto s = score(d, pts, z, k, buffer, sections);
        if (s && !std::isnan(s->ratio) && s->ratio > current) {
          current = s->ratio;
          coords = std::move(trial);
          best.offer(d, pts, z, k, buffer, sections);
          break;
        }
      }
    }
  }
}

inline void check_estimate_args(const NDistance& d, const Space& space, std::size_t k) {
  if (d.space_kind() && *d.space_kind() != space.kind()) {
    throw Error(Errc::space_mismatch, d.name() + " is not defined on a " + to_string(space.kind()) + " space");
  }
  if (k < 1 || k > d.arity()) {
    throw Error(Errc::domain_error, "partial constant needs 1 <= k <= n, got k = " + std::to_string(k));
  }
}

inline void enumerate_all(const NDistance& d, const Space& space, std::size_t k, Best& best) {
  const std::size_t n = d.arity();
  std::vector<Point> buffer;
  std::vector<double> sections;
  space.for_each_tuple(n + 1, [&](std::span<const Point> p) {
    best.offer(d, p.first(n), p[n], k, buffer, sections);
  });
}

/// Random draws in fixed-size batches, each with its own seeded generator,
/// merged in batch order: the result does not depend on the thread count.
inline void sample_batches(const NDistance& d, const Space& space, std::size_t k, const EstimateOptions& opts,
                           Best& best) {
  const std::size_t n = d.arity();
  const std::size_t batch = std::max<std::size_t>(opts.batch_size, 1);
  const std::size_t batches = (opts.budget + batch - 1) / batch;
  if (batches == 0) return;
  std::vector<Best> results(batches);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<Point> draw(n + 1, Point::symbol(0));
    std::vector<Point> buffer;
    std::vector<double> sections;
    for (std::size_t b = next++; b < batches; b = next++) {
      auto rng = search::batch_rng(opts.seed, b);
      const std::size_t count = std::min(batch, opts.budget - b * batch);
      for (std::size_t i = 0; i < count; ++i) {
        search::draw(space, rng, draw, (i % 2) == 1);
        results[b].offer(d, std::span<const Point>(draw).first(n), draw[n], k, buffer, sections);
      }
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, batches));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const Best& r : results) best.merge(r);
}

}  // namespace detail

/// Lower bound on the best k-constant K*_{n,k} as the largest ratio found.
/// Finite spaces are enumerated exhaustively over X^{n+1} (the sampled mode
/// also enumerates when that fits in the budget); continuous spaces combine
/// hints, structured families, a small grid enumeration, seeded random draws
/// and a final coordinate refinement of the best candidate.
inline ConstantEstimate estimate_partial_constant(const NDistance& d, const Space& space, std::size_t k,
                                                  const EstimateOptions& opts = {}) {
  detail::check_estimate_args(d, space, k);
  const std::size_t n = d.arity();
  const Method method = opts.method.value_or(space.is_finite() ? Method::exact : Method::sampled);
  if (method == Method::exact && !space.is_finite()) {
    throw Error(Errc::invalid_argument, "exact enumeration needs a finite space");
  }
  if (method == Method::analytic) throw Error(Errc::invalid_argument, "analytic values come from metadata only");

  detail::Best best;
  std::vector<Point> buffer;
  std::vector<double> sections;
  if (space.is_finite() && (method == Method::exact || space.enumeration_size(n + 1) <= opts.budget)) {
    detail::enumerate_all(d, space, k, best);
  } else {
    for (const Candidate& c : opts.hints) {
      if (space.contains(c.z)) best.offer(d, c.tuple.points(), c.z, k, buffer, sections);
    }
    for (const auto& probe : search::structured_probes(space, n + 1)) {
      best.offer(d, std::span<const Point>(probe).first(n), probe[n], k, buffer, sections);
    }
    if (!space.is_finite()) {
      const auto grid = search::enumeration_grid(space, n + 1, opts.budget);
      search::for_each_grid_tuple(grid, n + 1, [&](std::span<const Point> p) {
        best.offer(d, p.first(n), p[n], k, buffer, sections);
      });
    }
    detail::sample_batches(d, space, k, opts, best);
    if (!space.is_finite()) detail::refine(d, space, k, opts.refinement_rounds, best);
  }

  ConstantEstimate est;
  est.n = n;
  est.k = k;
  est.analytic = d.known_k_constant(k);
  est.method = method;
  est.trials = best.trials();
  est.seed = opts.seed;
  if (best.valid()) {
    est.witness = best.witness();
    est.lower_bound = best.witness().ratio;
    est.unbounded = std::isinf(est.lower_bound);
  }
  return est;
}

inline ConstantEstimate estimate_best_constant(const NDistance& d, const Space& space,
                                               const EstimateOptions& opts = {}) {
  return estimate_partial_constant(d, space, d.arity(), opts);
}

inline ConstantEstimate estimate_partial_constant(const CatalogEntry& entry, const Space& space, std::size_t k,
                                                  EstimateOptions opts = {}) {
  for (Candidate& c : entry.hints_for(space)) opts.hints.push_back(std::move(c));
  return estimate_partial_constant(entry.distance, space, k, opts);
}

inline ConstantEstimate estimate_best_constant(const CatalogEntry& entry, const Space& space,
                                               EstimateOptions opts = {}) {
  return estimate_partial_constant(entry, space, entry.distance.arity(), std::move(opts));
}

/// Partial-bound and chain relations between K*_n and K*_{n,k}:
///   1/(k-1) <= K*_{n,k} <= 1/(1/K*_n - n + k)
///   K*_n >= 1/(1/K*_{n,k} + n - k) >= 1/(n-1)
/// applicable when n - 1/K*_n < k <= n.
inline PropertyVerdict check_partial_bound(const ConstantEstimate& full, const ConstantEstimate& partial,
                                           double tolerance = 1e-6) {
  PropertyVerdict v;
  v.property = "partial-bound";
  const double n = static_cast<double>(full.n), k = static_cast<double>(partial.k);
  const double K = full.lower_bound, Kk = partial.lower_bound;
  if (!(n - 1.0 / K < k && partial.k <= full.n) || partial.unbounded) {
    v.status = Status::not_applicable;
    v.detail = "requires n - 1/K*_n < k <= n";
    return v;
  }
  v.relations.push_back(make_relation("1/(k-1) <= K*_{n,k}", 1.0 / (k - 1.0), Kk, tolerance));
  v.relations.push_back(make_relation("K*_{n,k} <= 1/(1/K*_n - n + k)", Kk, 1.0 / (1.0 / K - n + k), tolerance));
  const double mixed = 1.0 / (1.0 / Kk + n - k);
  v.relations.push_back(make_relation("1/(1/K*_{n,k} + n - k) <= K*_n", mixed, K, tolerance));
  v.relations.push_back(make_relation("1/(n-1) <= 1/(1/K*_{n,k} + n - k)", 1.0 / (n - 1.0), mixed, tolerance));
  const bool all = std::all_of(v.relations.begin(), v.relations.end(), [](const Relation& r) { return r.holds; });
  v.status = all ? Status::pass : Status::fail;
  return v;
}

/// K*_n <= (k/n) K*_{n,k}.
inline PropertyVerdict check_symmetrization(const ConstantEstimate& full, const ConstantEstimate& partial,
                                            double tolerance = 1e-6) {
  PropertyVerdict v;
  v.property = "symmetrization";
  if (partial.unbounded || partial.k < 2) {
    v.status = Status::not_applicable;
    v.detail = "K*_{n,k} does not exist";
    return v;
  }
  const double bound = static_cast<double>(partial.k) / static_cast<double>(full.n) * partial.lower_bound;
  v.relations.push_back(make_relation("K*_n <= (k/n) K*_{n,k}", full.lower_bound, bound, tolerance));
  v.status = v.relations.back().holds ? Status::pass : Status::fail;
  return v;
}

namespace detail {

inline bool close(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance * std::max(1.0, std::abs(a));
}

}  // namespace detail

/// At a tuple attaining K*_n, equality in the partial inequality with the
/// first k' sections holds iff sections k'+1..n leave d unchanged, and once
/// it holds it persists for every larger k'.
inline PropertyVerdict check_attainment_transfer(const NDistance& d, const Candidate& witness, std::size_t k,
                                                 double K, double tolerance = 1e-9) {
  PropertyVerdict v;
  v.property = "attainment-transfer";
  const std::size_t n = d.arity();
  const Tuple& t = witness.tuple;
  if (t.distinct_count() < 2 || !detail::close(ratio(d, t, witness.z), K, tolerance)) {
    v.status = Status::not_applicable;
    v.detail = "K*_n is not attained at this tuple";
    return v;
  }
  if (!(static_cast<double>(n) - 1.0 / K < static_cast<double>(k)) || k > n || k < 1) {
    v.status = Status::not_applicable;
    v.detail = "requires n - 1/K*_n < k <= n";
    return v;
  }
  const double value = d(t);
  std::vector<double> sections(n);
  for (std::size_t i = 0; i < n; ++i) sections[i] = d(t.section(i, witness.z));

  bool previous_equality = false;
  bool ok = true;
  for (std::size_t kk = k; kk <= n; ++kk) {
    double partial = 0.0;
    for (std::size_t i = 0; i < kk; ++i) partial += sections[i];
    const double rhs = partial / (1.0 / K - static_cast<double>(n) + static_cast<double>(kk));
    const bool equality = detail::close(value, rhs, tolerance);
    bool unchanged = true;
    for (std::size_t i = kk; i < n; ++i) unchanged = unchanged && detail::close(sections[i], value, tolerance);
    Relation r{"k=" + std::to_string(kk) + ": equality <=> sections k+1..n unchanged", value, rhs,
               equality == unchanged, equality};
    ok = ok && r.holds;
    if (previous_equality && !equality) {
      ok = false;
      r.name += " (equality lost for larger k)";
      r.holds = false;
    }
    previous_equality = previous_equality || equality;
    v.relations.push_back(std::move(r));
  }
  v.status = ok ? Status::pass : Status::fail;
  return v;
}

/// Sufficient condition for standardness: (a) K*_n < 1/(n-k), attained at a
/// tuple with n-k sections leaving d unchanged; (b) the partial inequality
/// holds with K_{n,k} = 1/(k-1). When both hold, K*_n must equal 1/(n-1).
inline PropertyVerdict check_sufficient_standard(const NDistance& d, std::size_t k, const ConstantEstimate& full,
                                                 const ConstantEstimate& partial, double tolerance = 1e-9,
                                                 std::optional<Candidate> attaining = std::nullopt) {
  PropertyVerdict v;
  v.property = "sufficient-standard";
  const std::size_t n = d.arity();
  const double K = full.lower_bound;
  if (k < 2 || k + 1 > n) {
    v.status = Status::not_applicable;
    v.detail = "requires 2 <= k <= n-1";
    return v;
  }
  if (!attaining && full.witness) attaining = full.witness->candidate();

  const bool a_bound = K < 1.0 / static_cast<double>(n - k) - tolerance;
  std::size_t unchanged = 0;
  if (attaining && attaining->tuple.distinct_count() >= 2 &&
      detail::close(ratio(d, attaining->tuple, attaining->z), K, tolerance)) {
    const double value = d(attaining->tuple);
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::close(d(attaining->tuple.section(i, attaining->z)), value, tolerance)) ++unchanged;
    }
  }
  const bool a_witness = unchanged >= n - k;
  const bool b = !partial.unbounded && partial.lower_bound <= 1.0 / static_cast<double>(k - 1) + tolerance;
  v.relations.push_back(make_relation("(a) K*_n < 1/(n-k)", K, 1.0 / static_cast<double>(n - k), tolerance));
  v.relations.back().holds = a_bound;
  v.relations.push_back(
      Relation{"(a) attained with n-k unchanged sections", static_cast<double>(n - k), static_cast<double>(unchanged),
               a_witness, false});
  v.relations.push_back(make_relation("(b) K*_{n,k} <= 1/(k-1)", partial.lower_bound,
                                      1.0 / static_cast<double>(k - 1), tolerance));
  if (!(a_bound && a_witness)) {
    v.status = Status::not_applicable;
    v.detail = "precondition (a) fails";
    return v;
  }
  if (!b) {
    v.status = Status::not_applicable;
    v.detail = "precondition (b) fails";
    return v;
  }
  const double standard = 1.0 / static_cast<double>(n - 1);
  v.relations.push_back(make_relation("K*_n = 1/(n-1)", K, standard, tolerance));
  if (detail::close(K, standard, tolerance)) {
    v.status = Status::pass;
    v.detail = "standard-implied";
  } else {
    v.status = Status::fail;
    v.detail = "conditions hold but K*_n differs from 1/(n-1)";
  }
  return v;
}

}  // namespace simplex_lab

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "simplex_lab/simplex_lab.hpp"

using namespace simplex_lab;

namespace {

Point sym(std::size_t i) { return Point::symbol(i); }

std::function<double(const std::vector<std::size_t>&)> as_oracle(const NDistance& d) {
  return [d](const std::vector<std::size_t>& x) {
    std::vector<Point> p;
    for (std::size_t v : x) p.push_back(sym(v));
    return d(p);
  };
}

// cardinality and drastic written out independently of the catalog
double distinct_minus_one(const std::vector<std::size_t>& x) {
  return static_cast<double>(std::set<std::size_t>(x.begin(), x.end()).size() - 1);
}

double not_constant(const std::vector<std::size_t>& x) {
  return std::set<std::size_t>(x.begin(), x.end()).size() > 1 ? 1.0 : 0.0;
}

EstimateOptions with_method(Method m) {
  EstimateOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST(Ratio, PartialIndexSets) {
  const auto drastic = catalog::drastic(3).distance;
  const std::vector<std::size_t> s23 = {1, 2};
  EXPECT_EQ(ratio(drastic, Tuple{sym(0), sym(1), sym(1)}, sym(1), s23), 0.5);
  EXPECT_EQ(ratio(catalog::cardinality(3).distance, Tuple{sym(0), sym(1), sym(1)}, sym(1)), 0.5);

  const Space plane = Space::plane();
  const auto area = catalog::enclosing_area(3);
  const auto w = area.witness_for(plane);
  ASSERT_TRUE(w);
  const std::vector<std::size_t> s12 = {0, 1};
  EXPECT_NEAR(ratio(area.distance, w->tuple, w->z, s12), 2.0, 1e-12);
}

TEST(Ratio, ZeroDenominatorIsInfinite) {
  const std::vector<std::size_t> first = {0};
  // (x, y, y) with z = y: the first section is constant
  EXPECT_TRUE(std::isinf(ratio(catalog::drastic(3).distance, Tuple{sym(0), sym(1), sym(1)}, sym(1), first)));
}

TEST(Ratio, ConstantTupleThrows) {
  EXPECT_THROW(ratio(catalog::drastic(3).distance, Tuple{sym(0), sym(0), sym(0)}, sym(1)), Error);
}

TEST(Estimate, ExactMatchesBruteForceOracle) {
  for (std::size_t m = 2; m <= 4; ++m) {
    const Space s = Space::finite(m);
    for (std::size_t n = 2; n <= 4; ++n) {
      for (std::size_t k = 2; k <= n; ++k) {
        const auto card = estimate_partial_constant(catalog::cardinality(n).distance, s, k);
        EXPECT_EQ(card.lower_bound, oracle::best_k_constant(m, n, k, distinct_minus_one)) << m << n << k;
        const auto dr = estimate_partial_constant(catalog::drastic(n).distance, s, k);
        EXPECT_EQ(dr.lower_bound, oracle::best_k_constant(m, n, k, not_constant)) << m << n << k;
        EXPECT_EQ(card.method, Method::exact);
      }
    }
  }
}

TEST(Estimate, ExactMatchesOracleForConstructedDistances) {
  const Space s = Space::finite(3);
  for (double value : {1.0 / 3.0, 0.4, 0.5, 1.0}) {
    const auto built = build_single_anchor(catalog::drastic(4).distance, sym(0), value, s);
    for (std::size_t k = 2; k <= 4; ++k) {
      const auto est = estimate_partial_constant(built.distance, s, k);
      EXPECT_NEAR(est.lower_bound, oracle::best_k_constant(3, 4, k, as_oracle(built.distance)), 1e-15);
    }
  }
}

TEST(Estimate, StandardEntriesAreAttainedExactly) {
  const Space s = Space::finite(3);
  const auto est = estimate_best_constant(catalog::cardinality(4), s);
  EXPECT_EQ(est.lower_bound, 1.0 / 3.0);
  ASSERT_TRUE(est.witness);
  EXPECT_EQ(ratio(catalog::cardinality(4).distance, est.witness->tuple, est.witness->z), est.lower_bound);
}

TEST(Estimate, SampledEqualsExactBitForBitOnSmallFiniteSpaces) {
  for (std::size_t m = 2; m <= 4; ++m) {
    const Space s = Space::finite(m);
    for (std::size_t n = 2; n <= 4; ++n) {
      for (const auto& d : {catalog::cardinality(n).distance, catalog::drastic(n).distance}) {
        for (std::size_t k = 2; k <= n; ++k) {
          const auto exact = estimate_partial_constant(d, s, k, with_method(Method::exact));
          const auto sampled = estimate_partial_constant(d, s, k, with_method(Method::sampled));
          EXPECT_EQ(exact.lower_bound, sampled.lower_bound);
          ASSERT_TRUE(exact.witness && sampled.witness);
          EXPECT_EQ(exact.witness->tuple, sampled.witness->tuple);
          EXPECT_EQ(exact.witness->z, sampled.witness->z);
        }
      }
    }
  }
}

TEST(Estimate, SampledModeIsDeterministicAcrossThreadCounts) {
  const Space plane = Space::plane();
  EstimateOptions one;
  one.budget = 20000;
  one.threads = 1;
  EstimateOptions many = one;
  many.threads = 4;
  const auto a = estimate_best_constant(catalog::enclosing_radius(4), plane, one);
  const auto b = estimate_best_constant(catalog::enclosing_radius(4), plane, many);
  EXPECT_EQ(a.lower_bound, b.lower_bound);
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_EQ(a.witness->tuple, b.witness->tuple);
  EXPECT_EQ(a.trials, b.trials);
}

TEST(Estimate, WitnessRatioRecomputes) {
  const Space line = Space::real_line(), plane = Space::plane();
  struct Case {
    CatalogEntry entry;
    Space space;
  };
  const std::vector<Case> cases = {{catalog::largest_inner_interval(4), line},
                                   {catalog::arithmetic_mean(4), line},
                                   {catalog::enclosing_area(4), plane},
                                   {catalog::fermat(4, Ground::abs, line), line}};
  EstimateOptions o;
  o.budget = 5000;
  for (const auto& c : cases) {
    for (std::size_t k = 2; k <= 4; ++k) {
      const auto est = estimate_partial_constant(c.entry, c.space, k, o);
      ASSERT_TRUE(est.witness);
      EXPECT_EQ(est.witness->k(), k);
      EXPECT_NEAR(ratio(c.entry.distance, est.witness->tuple, est.witness->z, est.witness->indices),
                  est.lower_bound, 1e-12);
    }
  }
}

TEST(Estimate, KEqualOneIsUnbounded) {
  const auto est = estimate_partial_constant(catalog::drastic(3).distance, Space::finite(3), 1);
  EXPECT_TRUE(est.unbounded);
}

TEST(Estimate, ArgumentErrors) {
  EXPECT_THROW(estimate_best_constant(catalog::arithmetic_mean(3).distance, Space::finite(3)), Error);
  EXPECT_THROW(estimate_partial_constant(catalog::drastic(3).distance, Space::finite(3), 4), Error);
  EXPECT_THROW(estimate_best_constant(catalog::arithmetic_mean(3).distance, Space::real_line(),
                                      with_method(Method::exact)),
               Error);
}

TEST(Estimate, KnownPartialConstants) {
  const Space line = Space::real_line(), plane = Space::plane();
  EstimateOptions o;
  o.budget = 20000;
  EXPECT_NEAR(estimate_partial_constant(catalog::largest_inner_interval(4), line, 3, o).lower_bound, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(estimate_partial_constant(catalog::enclosing_area(4), plane, 2, o).lower_bound, 2.0, 1e-6);
  EXPECT_NEAR(estimate_best_constant(catalog::largest_inner_interval(4), line, o).lower_bound, 0.5, 1e-9);
  EXPECT_NEAR(estimate_best_constant(catalog::enclosing_area(3), plane, o).lower_bound, 2.0 / 3.0, 1e-6);
  EXPECT_EQ(estimate_partial_constant(catalog::drastic(4), Space::finite(3), 4).lower_bound, 1.0 / 3.0);
}

TEST(Relations, PartialBoundAndSymmetrization) {
  const Space line = Space::real_line();
  EstimateOptions o;
  o.budget = 5000;
  const auto entry = catalog::largest_inner_interval(4);
  const auto full = estimate_best_constant(entry, line, o);
  for (std::size_t k = 3; k <= 4; ++k) {
    const auto partial = estimate_partial_constant(entry, line, k, o);
    EXPECT_TRUE(check_partial_bound(full, partial).passed());
    EXPECT_TRUE(check_symmetrization(full, partial).passed());
  }
  // k = 2 is outside n - 1/K < k for K = 1/2
  const auto k2 = estimate_partial_constant(entry, line, 2, o);
  EXPECT_EQ(check_partial_bound(full, k2).status, Status::not_applicable);
}

TEST(Relations, PartialBoundDetectsInconsistency) {
  ConstantEstimate full, partial;
  full.n = partial.n = 4;
  full.k = 4;
  partial.k = 3;
  full.lower_bound = 1.0 / 3.0;
  partial.lower_bound = 5.0;  // above 1/(1/K - n + k) = 1/2
  EXPECT_TRUE(check_partial_bound(full, partial).failed());
  EXPECT_TRUE(check_symmetrization(full, partial).passed());
  partial.lower_bound = 0.3;  // below 1/(k-1)
  EXPECT_TRUE(check_partial_bound(full, partial).failed());
  EXPECT_TRUE(check_symmetrization(full, partial).failed());
}

TEST(Relations, AttainmentTransferAtWitnesses) {
  const Space plane = Space::plane(), fin = Space::finite(3);
  const auto area = catalog::enclosing_area(4);
  const auto w = area.witness_for(plane);
  ASSERT_TRUE(w);
  for (std::size_t k = 2; k <= 4; ++k) {
    const auto v = check_attainment_transfer(area.distance, *w, k, 0.4);
    EXPECT_TRUE(v.passed()) << k;
    for (const auto& r : v.relations) EXPECT_TRUE(r.equality) << r.name;
  }
  const auto drastic = catalog::drastic(4);
  const auto dw = drastic.witness_for(fin);
  EXPECT_TRUE(check_attainment_transfer(drastic.distance, *dw, 3, 1.0 / 3.0).passed());
  // a tuple that does not attain K*_n
  const Candidate generic{Tuple{Point::symbol(0), Point::symbol(1), Point::symbol(2), Point::symbol(2)},
                          Point::symbol(0)};
  EXPECT_EQ(check_attainment_transfer(drastic.distance, generic, 3, 1.0 / 3.0).status, Status::not_applicable);
}

TEST(Relations, SufficientStandard) {
  const Space fin = Space::finite(3), plane = Space::plane();
  const auto card = catalog::cardinality(3);
  const auto full = estimate_best_constant(card, fin);
  const auto partial = estimate_partial_constant(card, fin, 2);
  const auto v = check_sufficient_standard(card.distance, 2, full, partial, 1e-9, card.witness_for(fin));
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.detail, "standard-implied");

  const auto drastic = catalog::drastic(4);
  const auto df = estimate_best_constant(drastic, fin);
  const auto dp = estimate_partial_constant(drastic, fin, 3);
  EXPECT_EQ(check_sufficient_standard(drastic.distance, 3, df, dp, 1e-9, drastic.witness_for(fin)).detail,
            "standard-implied");

  const auto area = catalog::enclosing_area(3);
  EstimateOptions o;
  o.budget = 5000;
  const auto af = estimate_best_constant(area, plane, o);
  const auto ap = estimate_partial_constant(area, plane, 2, o);
  const auto av = check_sufficient_standard(area.distance, 2, af, ap, 1e-6, area.witness_for(plane));
  EXPECT_EQ(av.status, Status::not_applicable);
  EXPECT_EQ(av.detail, "precondition (b) fails");
}

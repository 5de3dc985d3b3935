#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "simplex_lab/simplex_lab.hpp"

using namespace simplex_lab;

namespace {

Point re(double x) { return Point::real(x); }

CheckOptions budget(std::size_t b) {
  CheckOptions o;
  o.budget = b;
  return o;
}

}  // namespace

TEST(Compositions, CountAndShape) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const auto all = compositions(n, k);
      EXPECT_EQ(all.size(), oracle::binomial(n - 1, k - 1));
      for (const auto& c : all) {
        EXPECT_EQ(c.size(), k);
        EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), n);
        for (std::size_t part : c) EXPECT_GE(part, 1u);
      }
      EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    }
  }
  EXPECT_EQ(to_string(Composition{2, 1, 1}), "(2,1,1)");
}

TEST(ReducedMap, RepeatsArguments) {
  const auto d = catalog::arithmetic_mean(4).distance;
  const auto r = reduced_map(d, {3, 1});
  const Point xy[2] = {re(0), re(1)};
  EXPECT_EQ(r.arity(), 2u);
  EXPECT_NEAR(r(std::span<const Point>(xy, 2)), 0.25, 1e-15);
  EXPECT_THROW(reduced_map(d, {2, 1}), Error);
}

TEST(Axioms, CatalogEntriesPass) {
  const Space fin = Space::finite(3), line = Space::real_line(), plane = Space::plane();
  EXPECT_TRUE(check_axioms(catalog::cardinality(4).distance, fin).all_passed());
  EXPECT_TRUE(check_axioms(catalog::drastic(3).distance, fin).all_passed());
  EXPECT_TRUE(check_axioms(catalog::arithmetic_mean(4).distance, line, budget(20000)).all_passed());
  EXPECT_TRUE(check_axioms(catalog::largest_inner_interval(4).distance, line, budget(20000)).all_passed());
  EXPECT_TRUE(check_axioms(catalog::enclosing_radius(4).distance, plane, budget(5000)).all_passed());
}

TEST(Axioms, DetectsBrokenMaps) {
  const Space fin = Space::finite(3);
  NDistance asymmetric("asymmetric", 3, SpaceKind::finite, [](std::span<const Point> p) {
    return distinct_count(p) > 1 ? 1.0 + static_cast<double>(p[0].as_symbol()) : 0.0;
  });
  const auto a = check_axioms(asymmetric, fin);
  EXPECT_TRUE(a.symmetry.failed());
  EXPECT_TRUE(a.identity.passed());

  NDistance vanishing("vanishing", 3, SpaceKind::finite, [](std::span<const Point> p) {
    return distinct_count(p) > 2 ? 1.0 : 0.0;
  });
  EXPECT_TRUE(check_axioms(vanishing, fin).identity.failed());

  // one heavy triple: d(a,b,c) = 10 against three unit sections at z = d
  NDistance heavy("heavy", 3, SpaceKind::finite, [](std::span<const Point> p) {
    const std::size_t m = distinct_count(p);
    if (m == 1) return 0.0;
    const bool abc = m == 3 && std::none_of(p.begin(), p.end(), [](const Point& q) { return q.as_symbol() == 3; });
    return abc ? 10.0 : 1.0;
  });
  const auto h = check_axioms(heavy, Space::finite(4));
  EXPECT_TRUE(h.simplex.failed());
  ASSERT_TRUE(h.simplex.counterexample);
  EXPECT_GT(h.simplex.counterexample->lhs, h.simplex.counterexample->rhs);
}

TEST(StrongSimplex, ArithmeticMeanWithReciprocal) {
  const Space line = Space::real_line();
  for (std::size_t n : {4u, 5u}) {
    for (std::size_t k = 2; k <= n; ++k) {
      const auto v = check_strong_k_simplex(catalog::arithmetic_mean(n).distance, k, 1.0 / static_cast<double>(k - 1),
                                            line, budget(3000));
      EXPECT_TRUE(v.passed()) << n << "," << k;
    }
  }
}

TEST(StrongSimplex, StandardFormulaIsTightForCardinality) {
  const Space fin = Space::finite(4);
  const std::size_t n = 4;
  for (std::size_t k = 2; k < n; ++k) {
    const double M = strong_constant_standard(n, k);
    const auto v = check_strong_k_simplex(catalog::cardinality(n).distance, k, M, fin);
    EXPECT_TRUE(v.passed());
    ASSERT_TRUE(v.max_ratio);
    EXPECT_LE(*v.max_ratio, M + 1e-12);
    EXPECT_TRUE(check_strong_k_simplex(catalog::cardinality(n).distance, k, 0.5 / static_cast<double>(k - 1), fin)
                    .failed());
  }
}

TEST(StrongSimplex, FormulaValues) {
  EXPECT_NEAR(strong_constant_standard(4, 2), 7.0 / 6.0, 1e-15);
  EXPECT_NEAR(strong_constant_standard(5, 4), 1.0 / 3.0 + 1.0 / 48.0, 1e-15);
  EXPECT_NEAR(strong_constant_standard(5, 5), 0.25, 1e-15);
  EXPECT_NEAR(strong_constant_general(4, 3, 0.4).value, 0.8, 1e-12);
  const auto c = strong_constant_general(4, 3, 1.0 / 3.0);
  EXPECT_TRUE(c.at_most_one);
  EXPECT_LE(c.value, 1.0);
  EXPECT_THROW(strong_constant_general(4, 2, 0.5), Error);
  for (std::size_t n = 3; n <= 8; ++n) {
    for (std::size_t k = 2; k + 1 <= n; ++k) {
      EXPECT_NEAR(strong_constant_general(n, k, 1.0 / static_cast<double>(n - 1)).value,
                  strong_constant_standard(n, k), 1e-12);
    }
  }
}

TEST(StrongSimplex, ReducedMapIsKDistanceWhenConstantAtMostOne) {
  // cardinality n=4, k=3: M = 1/2 + 1/18 <= 1, so each reduced map satisfies the ternary axioms
  const Space fin = Space::finite(3);
  const auto d = catalog::cardinality(4).distance;
  ASSERT_LE(strong_constant_standard(4, 3), 1.0);
  for (const auto& parts : compositions(4, 3)) {
    EXPECT_TRUE(check_axioms(reduced_map(d, parts), fin).all_passed()) << to_string(parts);
  }
}

TEST(Lemma, MixedBoundHoldsAndIsTight) {
  const Space fin = Space::finite(4);
  for (std::size_t p = 0; p <= 2; ++p) {
    const auto v = check_lemma_mixed_bound(catalog::cardinality(4).distance, 2, p, fin);
    EXPECT_TRUE(v.passed()) << p;
    ASSERT_FALSE(v.relations.empty());
    EXPECT_TRUE(v.relations.back().equality);
  }
  EXPECT_TRUE(check_lemma_mixed_bound(catalog::drastic(5).distance, 3, 1, Space::finite(3)).passed());
  EXPECT_EQ(check_lemma_mixed_bound(catalog::arithmetic_mean(4).distance, 2, 1, Space::real_line()).status,
            Status::not_applicable);
  EXPECT_THROW(check_lemma_mixed_bound(catalog::cardinality(4).distance, 2, 3, fin), Error);
}

TEST(RepetitionInvariance, Examples) {
  EXPECT_TRUE(check_repetition_invariance(catalog::cardinality(4).distance, Space::finite(3)).passed());
  const auto am = check_repetition_invariance(catalog::arithmetic_mean(3).distance, Space::real_line(), budget(1000));
  EXPECT_TRUE(am.failed());

  // the documented pair: (x, y, y) against (x, x, y)
  const auto d = catalog::arithmetic_mean(3).distance;
  const double x = -0.5, y = 1.0;
  EXPECT_NEAR(evaluate(d, Tuple{re(x), re(y), re(y)}), 2.0 / 3.0 * (y - x), 1e-15);
  EXPECT_NEAR(evaluate(d, Tuple{re(x), re(x), re(y)}), 1.0 / 3.0 * (y - x), 1e-15);

  const auto f = check_repetition_invariance(catalog::fermat(4, Ground::abs, Space::real_line()).distance,
                                             Space::real_line(), budget(500));
  EXPECT_TRUE(f.failed());
}

TEST(Nonincreasing, Examples) {
  EXPECT_TRUE(check_nonincreasing_identification(catalog::cardinality(4).distance, Space::finite(3)).passed());
  EXPECT_TRUE(check_nonincreasing_identification(catalog::drastic(3).distance, Space::finite(3)).passed());
  const auto v = check_nonincreasing_identification(catalog::largest_inner_interval(3).distance, Space::real_line(),
                                                    budget(1000));
  EXPECT_TRUE(v.failed());
  const auto d = catalog::largest_inner_interval(3).distance;
  EXPECT_EQ(evaluate(d, Tuple{re(1), re(2), re(3)}), 1.0);
  EXPECT_EQ(evaluate(d, Tuple{re(1), re(3), re(3)}), 2.0);
}

TEST(Multidistance, EnclosingRadiusFamily) {
  const auto r = check_multidistance(catalog::enclosing_radius_family(6), Space::plane(), budget(2000));
  EXPECT_TRUE(r.overall.passed());
  ASSERT_EQ(r.arities.size(), 5u);
  for (const auto& a : r.arities) {
    EXPECT_TRUE(a.sufficient.passed());
    EXPECT_TRUE(a.sufficient_equality) << a.n;
    EXPECT_TRUE(a.lemma.passed()) << a.n;
  }
}

TEST(Multidistance, ArithmeticMeanNeedsTheDoubledBinaryMember) {
  const Space line = Space::real_line();
  EXPECT_TRUE(check_multidistance(catalog::arithmetic_mean_family(5, true), line, budget(3000)).overall.passed());
  // (0, 1, ..., 1; z = 1) gives (n-1)/n against 1/2
  const auto plain = check_multidistance(catalog::arithmetic_mean_family(5, false), line, budget(3000));
  EXPECT_TRUE(plain.overall.failed());
}

TEST(Multidistance, LineCountFamilyFailsOnCircles) {
  const auto r = check_multidistance(catalog::line_count_family(5), Space::plane(), budget(2000));
  EXPECT_TRUE(r.overall.failed());

  const auto lines = catalog::line_count_family(5);
  for (std::size_t n = 4; n <= 5; ++n) {
    std::vector<Point> circle;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = 2 * 3.141592653589793 * static_cast<double>(i) / static_cast<double>(n);
      circle.push_back(Point::planar(std::cos(a), std::sin(a)));
    }
    const Point z = Point::planar(0, 0);
    double sum = 0;
    for (const Point& x : circle) {
      const Point pair[2] = {x, z};
      sum += lines.at(2)(std::span<const Point>(pair, 2));
    }
    EXPECT_EQ(lines.at(n)(circle), static_cast<double>(oracle::binomial(n, 2)));
    EXPECT_EQ(sum, static_cast<double>(n));
    EXPECT_GT(lines.at(n)(circle), sum);
  }
}

TEST(MultiToNDistance, Examples) {
  const Space plane = Space::plane(), line = Space::real_line(), fin = Space::finite(3);
  const auto radius = check_multi_to_ndistance(catalog::enclosing_radius(4).distance,
                                               catalog::enclosing_radius(2).distance, plane, budget(2000));
  EXPECT_TRUE(radius.passed());
  const auto inner = check_multi_to_ndistance(catalog::largest_inner_interval(3).distance,
                                              catalog::largest_inner_interval(2).distance, line, budget(1000));
  EXPECT_EQ(inner.status, Status::not_applicable);
  EXPECT_TRUE(check_multi_to_ndistance(catalog::drastic(4).distance, catalog::drastic(2).distance, fin).passed());
}

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nilspace/budget.hpp"
#include "nilspace/constructors.hpp"
#include "nilspace/translation.hpp"
#include "test_oracles.hpp"

using namespace nilspace;

namespace {

Cubespace dk(Int m, int k) { return degree_space(FinAbelianGroup::cyclic(m), k); }

Cubespace heis2() {
  FiniteGroup h = heisenberg_group(2);
  return group_space(h, Filtration::lower_central_series(h));
}

std::vector<PointMap> brute_translations(const Cubespace& s, int k, int i) {
  const CubeSet ck = enumerate_cubes(s, k);
  std::vector<PointMap> out;
  PointMap p = identity_map(s.size());
  do {
    if (is_translation(s, ck, p, i)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST(Maps, CompositionAndInverse) {
  PointMap a{1, 2, 0}, b{0, 2, 1};
  EXPECT_EQ(compose_maps(a, b), (PointMap{1, 0, 2}));
  EXPECT_EQ(compose_maps(a, inverse_map(a)), identity_map(3));
  PointMap bad{0, 0, 1};
  EXPECT_THROW(inverse_map(bad), std::invalid_argument);
}

TEST(Translations, DegreeTwoOverZ3MatchesExhaustiveSearch) {
  Cubespace s = dk(3, 2);
  // all 27 maps, bijective or not
  std::vector<PointMap> brute;
  for (Point a = 0; a < 3; ++a)
    for (Point b = 0; b < 3; ++b)
      for (Point c = 0; c < 3; ++c) {
        PointMap m{a, b, c};
        if (is_translation(s, 2, m, 1)) brute.push_back(m);
      }
  TranslationGroup g = enumerate_translations(s, 1);
  EXPECT_TRUE(g.complete);
  EXPECT_EQ(g.elements, brute);
  EXPECT_TRUE(g.is_abelian());
}

TEST(Translations, HeisenbergMatchesAllBijections) {
  Cubespace s = heis2();
  FiniteGroup h = heisenberg_group(2);
  auto brute1 = brute_translations(s, 2, 1);
  TranslationGroup t1 = enumerate_translations(s, 1);
  EXPECT_EQ(t1.elements, brute1);
  EXPECT_EQ(t1.order(), 32u);
  for (FiniteGroup::Element g = 0; g < 8; ++g) {
    PointMap left(8);
    for (Point x = 0; x < 8; ++x) left[x] = h.mul(g, x);
    EXPECT_TRUE(t1.index_of(left).has_value());
  }
  std::vector<PointMap> brute2;
  for (const auto& a : brute1)
    if (is_translation(s, 2, a, 2)) brute2.push_back(a);
  TranslationGroup t2 = enumerate_translations(s, 2);
  EXPECT_EQ(t2.elements, brute2);
  ASSERT_EQ(t2.order(), 2u);
  PointMap by_center(8);
  for (Point x = 0; x < 8; ++x) by_center[x] = h.mul(4, x);
  EXPECT_TRUE(t2.index_of(by_center).has_value());
}

TEST(Translations, AboveTheStepOnlyIdentity) {
  for (Int m : {2, 3, 4}) {
    Cubespace s = dk(m, 1);
    auto brute = brute_translations(s, 1, 2);
    ASSERT_EQ(brute.size(), 1u);
    EXPECT_EQ(brute[0], identity_map(m));
  }
}

TEST(Translations, BudgetGivesCertifiedSubgroup) {
  Cubespace s = heis2();
  bool saw_partial = false;
  for (std::uint64_t limit = 64; limit < (std::uint64_t{1} << 30); limit *= 2) {
    Budget b(limit);
    TranslationGroup g;
    try {
      BudgetScope scope(b);
      g = enumerate_translations(s, 1);
    } catch (const BudgetExceeded&) {
      continue;  // ran out before the first certified element
    }
    if (g.complete) {
      EXPECT_EQ(g.order(), 32u);
      break;
    }
    saw_partial = true;
    EXPECT_EQ(32u % g.order(), 0u);
    for (const auto& a : g.elements) EXPECT_TRUE(is_translation(s, 2, a, 1));
  }
  EXPECT_TRUE(saw_partial);
}

TEST(Homs, DegreeOneFunctionsOnZ3) {
  Cubespace s = dk(3, 1);
  auto homs = homs_to_degree_space(s, 1, FinAbelianGroup::cyclic(3));
  const CubeSet c2 = enumerate_cubes(s, 2);
  std::set<std::vector<FinAbelianGroup::Element>> brute;
  for (Point a = 0; a < 3; ++a)
    for (Point b = 0; b < 3; ++b)
      for (Point c = 0; c < 3; ++c) {
        std::vector<Point> phi{a, b, c};
        bool ok = true;
        for (std::size_t j = 0; j < c2.size(); ++j) {
          std::vector<Point> img;
          for (Point x : c2[j]) img.push_back(phi[x]);
          ok = ok && oracle::degree_cube(img, 1, 3);
        }
        if (ok) brute.insert({a, b, c});
      }
  EXPECT_EQ(std::set<std::vector<FinAbelianGroup::Element>>(homs.begin(), homs.end()), brute);
  EXPECT_EQ(brute.size(), 9u);
}

TEST(CentralSeries, Heisenberg) {
  CentralSeriesReport r = verify_central_series(heis2());
  EXPECT_TRUE(r.ok) << r.witness;
  ASSERT_EQ(r.groups.size(), 3u);
  EXPECT_EQ(r.groups[2].order(), 1u);
  EXPECT_GT(r.nontrivial_commutators, 0u);
  EXPECT_FALSE(r.groups[0].is_abelian());
}

TEST(Lifting, EveryFactorTranslationLifts) {
  Cubespace s = heis2();
  Factor f1 = factor(s, 1);
  TranslationGroup base = enumerate_translations(f1.space, 1);
  EXPECT_EQ(base.order(), 4u);
  for (const auto& alpha : base.elements) {
    LiftResult r = lift_translation(s, alpha, 1);
    ASSERT_TRUE(r.lifted);
    EXPECT_TRUE(is_translation(s, 2, r.beta, 1));
    for (Point x = 0; x < s.size(); ++x) EXPECT_EQ(f1.projection[r.beta[x]], alpha[f1.projection[x]]);
  }
  TranslationBundle b = translation_bundle(s, base.elements.back(), 1);
  EXPECT_TRUE(b.certificate.ok) << b.certificate.witness;
  EXPECT_EQ(b.star.total.size(), f1.space.size() * 2);
}

TEST(Equivalence, MovesReplayToTarget) {
  Cubespace s = dk(3, 1);
  Cube c1{0, 1, 1, 2}, c2{2, 0, 1, 2};
  ASSERT_TRUE(s.is_cube(c1) && s.is_cube(c2));
  EquivalenceResult r = translation_equivalent(s, c1, c2);
  ASSERT_TRUE(r.reachable);
  Cube c = c1;
  for (const auto& m : r.moves) {
    for (Vertex v = 0; v < c.size(); ++v)
      if (m.face.contains(v)) c[v] = m.alpha[c[v]];
    EXPECT_TRUE(s.is_cube(c));
  }
  EXPECT_EQ(c, c2);
}

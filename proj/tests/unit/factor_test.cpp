#include <gtest/gtest.h>

#include <map>
#include <set>

#include "nilspace/constructors.hpp"
#include "nilspace/factor.hpp"
#include "nilspace/groups.hpp"
#include "test_oracles.hpp"

using namespace nilspace;

namespace {

Cubespace dk(Int m, int k) { return degree_space(FinAbelianGroup::cyclic(m), k); }

Cubespace heis(std::uint32_t p) {
  FiniteGroup h = heisenberg_group(p);
  return group_space(h, Filtration::lower_central_series(h));
}

}  // namespace

TEST(SimK, HeisenbergClassesAreCentralCosets) {
  FiniteGroup h = heisenberg_group(2);
  Cubespace s = heis(2);
  SimKPartition p = sim_k(s, 1);
  ASSERT_EQ(p.class_count(), 4u);
  for (Point x = 0; x < 8; ++x)
    for (Point y = 0; y < 8; ++y) {
      bool same_coset = y == x || y == h.mul(x, 4);
      EXPECT_EQ(p.class_of[x] == p.class_of[y], same_coset);
      EXPECT_EQ(sim_related(s, 1, x, y), same_coset);
    }
  EXPECT_TRUE(sim_k(s, 2).discrete());
  EXPECT_EQ(sim_k(s, 0).class_count(), 1u);
}

TEST(Step, KnownSpaces) {
  EXPECT_EQ(nilspace_step(point_space()), 0);
  EXPECT_EQ(nilspace_step(dk(3, 1)), 1);
  EXPECT_EQ(nilspace_step(dk(2, 3)), 3);
  EXPECT_EQ(nilspace_step(heis(2)), 2);
  EXPECT_EQ(nilspace_step(product(dk(2, 1), dk(3, 2))), 2);
}

TEST(Factors, HeisenbergAbelianization) {
  Cubespace s = heis(2);
  Factor f = factor(s, 1);
  EXPECT_EQ(f.space.size(), 4u);
  EXPECT_TRUE(is_morphism(s, f.space, f.projection, 3));
  EXPECT_TRUE(find_isomorphism(f.space, degree_space(FinAbelianGroup({2, 2}), 1), 3).has_value());
  Factor top = factor(s, 2);
  EXPECT_EQ(top.space.size(), 8u);
}

TEST(Corners, TranslationCornerIsAffine) {
  for (auto [m, k] : std::vector<std::pair<Int, int>>{{5, 1}, {3, 2}, {4, 1}}) {
    Cubespace s = dk(m, k);
    for (Point x = 0; x < m; ++x)
      for (Point y = 0; y < m; ++y)
        for (Point z = 0; z < m; ++z) EXPECT_EQ(close_translation_corner(s, k, x, y, z), (z + y + m - x) % m);
  }
  LocalTranslation t = local_translation(dk(3, 2), 2, 1, 2);
  ASSERT_EQ(t.domain.size(), 3u);
  for (Point z : t.domain) EXPECT_EQ(t(z), (z + 1) % 3);
}

TEST(StructureGroups, DegreeSpacesAndProducts) {
  EXPECT_EQ(structure_group(dk(4, 1), 1).group, FinAbelianGroup({4}));
  EXPECT_EQ(structure_group(dk(3, 2), 1).group.order(), 1u);
  EXPECT_EQ(structure_group(dk(3, 2), 2).group, FinAbelianGroup({3}));
  auto d = bundle_decomposition(product(dk(2, 1), dk(3, 2)), 2);
  EXPECT_TRUE(d.certificate.ok) << d.certificate.witness;
  auto g = d.structure_groups();
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], FinAbelianGroup({2}));
  EXPECT_EQ(g[1], FinAbelianGroup({3}));
}

TEST(StructureGroups, ActionIsFreeAndTransitiveOnFibers) {
  StructureGroup sg = structure_group(heis(2), 2);
  EXPECT_EQ(sg.group, FinAbelianGroup({2}));
  for (Point x = 0; x < sg.down.size(); ++x) {
    std::set<Point> orbit;
    for (FinAbelianGroup::Element a = 0; a < sg.group.order(); ++a) {
      Point y = sg.action[a][x];
      EXPECT_EQ(sg.down[y], sg.down[x]);
      orbit.insert(y);
    }
    EXPECT_EQ(orbit.size(), sg.group.order());
  }
}

TEST(Rebuild, HeisenbergCubeCounts) {
  Cubespace s = heis(2);
  auto d = bundle_decomposition(s, 2);
  ASSERT_TRUE(d.certificate.ok) << d.certificate.witness;
  RebuildCheck r = rebuild_from_decomposition(s, d, 3);
  EXPECT_TRUE(r.certificate.ok) << r.certificate.witness;
  ASSERT_EQ(r.cube_counts.size(), 4u);
  for (int n = 0; n <= 3; ++n)
    EXPECT_EQ(r.cube_counts[n], oracle::ipow(8, n + 1) * oracle::ipow(2, oracle::binom(n, 2)));
}

TEST(Fibers, SurjectivityAndCardinality) {
  Cubespace z4 = dk(4, 1), z2 = dk(2, 1);
  std::vector<Point> mod2{0, 1, 0, 1};
  EXPECT_TRUE(is_fiber_surjective(z4, z2, mod2, 1));
  std::vector<Point> constant{0, 0, 0, 0};
  std::string why;
  EXPECT_FALSE(is_fiber_surjective(z4, z2, constant, 1, &why));
  EXPECT_FALSE(why.empty());

  for (int n = 1; n <= 3; ++n) {
    std::map<Cube, std::uint64_t> tally;
    for_each_cube(z4, n, [&](std::span<const Point> c) { ++tally[map_cube(c, mod2)]; });
    FiberCardinalityReport r = fiber_cardinality_report(z4, z2, mod2, n);
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto& [c, k] : tally) ++hist[k];
    hist[0] += r.target_cubes - tally.size();
    if (hist[0] == 0) hist.erase(0);
    EXPECT_EQ(r.histogram, hist);
    EXPECT_TRUE(r.uniform());
  }
}

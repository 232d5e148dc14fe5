#include <gtest/gtest.h>

#include <map>

#include "nilspace/constructors.hpp"
#include "nilspace/cubespace.hpp"
#include "test_oracles.hpp"

using namespace nilspace;

namespace {

Cubespace dk(Int m, int k) { return degree_space(FinAbelianGroup::cyclic(m), k); }

}  // namespace

TEST(CubeSet, CanonicalizeSortsAndDeduplicates) {
  CubeSet s(1);
  s.push_back(Cube{2, 1});
  s.push_back(Cube{0, 3});
  s.push_back(Cube{2, 1});
  s.canonicalize();
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(Cube(s[0].begin(), s[0].end()), (Cube{0, 3}));
  EXPECT_EQ(s.index_of(Cube{2, 1}), 1u);
  EXPECT_FALSE(s.contains(Cube{1, 2}));
}

TEST(Membership, DegreeSpaceMatchesAlternatingSums) {
  for (auto [m, k, n] : std::vector<std::tuple<Int, int, int>>{{4, 1, 2}, {3, 1, 3}, {3, 2, 3}, {2, 2, 3}, {2, 1, 3}}) {
    Cubespace s = dk(m, k);
    oracle::for_each_map(m, n, [&](const std::vector<Point>& c) {
      EXPECT_EQ(s.is_cube(c), oracle::degree_cube(c, k, m)) << s.format_cube(c);
    });
  }
}

TEST(Counting, DegreeSpaceCubeCounts) {
  for (Int m : {2, 3, 5})
    for (int k = 1; k <= 2; ++k)
      for (int n = 0; n <= 4; ++n) {
        std::uint64_t e = 0;
        for (int j = 0; j <= k; ++j) e += oracle::binom(n, j);
        EXPECT_EQ(count_cubes(dk(m, k), n), oracle::ipow(m, e)) << m << " " << k << " " << n;
      }
}

TEST(Corners, CompletionIsAffine) {
  Cubespace s = dk(5, 1);
  int seen = 0;
  for_each_corner(s, 2, [&](std::span<const Point> c, std::span<const Point> done) {
    ++seen;
    ASSERT_EQ(done.size(), 1u);
    EXPECT_EQ(done[0], (c[1] + c[2] + 5 - c[0]) % 5);
  });
  EXPECT_EQ(seen, 125);
  std::vector<Point> corner{1, 4, 2};
  EXPECT_EQ(complete_corner(s, corner), (std::vector<Point>{0}));
}

TEST(Corners, DegreeTwoClosesAtDimensionThree) {
  Cubespace s = dk(3, 2);
  std::uint64_t corners = 0;
  for_each_corner(s, 3, [&](std::span<const Point> c, std::span<const Point> done) {
    ++corners;
    ASSERT_EQ(done.size(), 1u);
    std::vector<Point> full(c.begin(), c.end());
    full[7] = done[0];
    EXPECT_TRUE(oracle::degree_cube(full, 2, 3));
  });
  EXPECT_EQ(corners, oracle::ipow(3, 7));
}

TEST(Axioms, PassOnDegreeSpaces) {
  auto r = verify_axioms(dk(3, 1), 1, 3);
  EXPECT_EQ(r.overall(), Verdict::Pass);
  EXPECT_EQ(verify_axioms(dk(2, 2), 2, 3).overall(), Verdict::Pass);
}

TEST(Axioms, RemovedCubeIsDetected) {
  Cubespace s = dk(3, 1);
  auto tables = cube_tables(s, 3);
  CubeSet cut(2);
  for (std::size_t j = 1; j < tables[2].size(); ++j) cut.push_back(tables[2][j]);
  Cube gone(tables[2][0].begin(), tables[2][0].end());
  tables[2] = cut;
  Cubespace mutant = table_space(s.labels(), tables, 1);
  auto r = verify_axioms(mutant, 1, 3);
  EXPECT_EQ(r.overall(), Verdict::Fail);
  EXPECT_FALSE(mutant.is_cube(gone));
}

TEST(Morphisms, ReductionAndPolynomials) {
  std::vector<Point> mod2{0, 1, 0, 1};
  EXPECT_TRUE(is_morphism(dk(4, 1), dk(2, 1), mod2, 3));
  std::vector<Point> square{0, 1, 4, 4, 1};
  std::string why;
  EXPECT_FALSE(is_morphism(dk(5, 1), dk(5, 1), square, 2, &why));
  EXPECT_FALSE(why.empty());
  // x -> x^2 has degree 2
  EXPECT_TRUE(is_morphism(dk(5, 1), dk(5, 2), square, 3));
}

TEST(Isomorphism, ChineseRemainderAndNonIsomorphic) {
  auto iso = find_isomorphism(product(dk(2, 1), dk(3, 1)), dk(6, 1), 3);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_morphism(product(dk(2, 1), dk(3, 1)), dk(6, 1), *iso, 3));
  Cubespace klein = degree_space(FinAbelianGroup({2, 2}), 1);
  EXPECT_EQ(count_cubes(klein, 2), count_cubes(dk(4, 1), 2));
  EXPECT_FALSE(find_isomorphism(klein, dk(4, 1), 2).has_value());
}

TEST(Ergodic, ArrowSpaceSplitsByDifference) {
  Cubespace s = dk(3, 1);
  Cubespace a = arrow_space(s, 1);
  auto pairs = arrow_pairs(s, 1);
  ASSERT_EQ(a.size(), 9u);
  auto comps = ergodic_components(a);
  ASSERT_EQ(comps.size(), 3u);
  for (const auto& comp : comps) {
    std::set<Point> diffs;
    for (Point p : comp) diffs.insert((pairs[p].second + 3 - pairs[p].first) % 3);
    EXPECT_EQ(diffs.size(), 1u);
    EXPECT_EQ(comp.size(), 3u);
  }
  EXPECT_EQ(ergodic_components(s).size(), 1u);
}

TEST(ThreeCubes, MapsAndOuterVertices) {
  for (int n = 0; n <= 3; ++n) {
    ThreeCube t = three_cube_maps(n);
    EXPECT_EQ(t.point_count(), oracle::ipow(3, n));
    std::set<Point> outer(t.omega.begin(), t.omega.end());
    EXPECT_EQ(outer.size(), vertex_count(n));
    for (Vertex v = 0; v < vertex_count(n); ++v) {
      for (int c : t.coordinates(t.omega[v])) EXPECT_EQ(std::abs(c), 1);
      for (int c : t.coordinates(t.psi[v][full_vertex(n)])) EXPECT_EQ(c, 0);
      std::set<Point> img(t.psi[v].begin(), t.psi[v].end());
      EXPECT_EQ(img.size(), vertex_count(n));
    }
  }
}

TEST(HomSets, CountsAgainstDirectEnumeration) {
  Cubespace s = dk(3, 1);
  EXPECT_EQ(hom_set(three_cube_pattern(1), s).maps.size(), 27u);
  EXPECT_EQ(hom_set(discrete_cube_pattern(2), s).maps.size(), count_cubes(s, 2));
  EXPECT_EQ(hom_set(point_pattern(), s).maps.size(), 3u);
  // morphisms T_2 -> D_1(Z_2), by brute force over all 2^9 maps
  FinitePattern p = three_cube_pattern(2);
  Cubespace z2 = dk(2, 1);
  std::uint64_t brute = 0;
  for (std::uint32_t bits = 0; bits < (1u << 9); ++bits) {
    bool ok = true;
    for (const auto& g : p.generating_cubes) {
      Cube img;
      for (Point x : g) img.push_back((bits >> x) & 1U);
      ok = ok && oracle::degree_cube(img, 1, 2);
    }
    brute += ok;
  }
  EXPECT_EQ(hom_set(p, z2).maps.size(), brute);
}

TEST(Concatenation, AdjacentSquares) {
  Cube a{0, 1, 1, 2}, b{1, 2, 2, 3};
  Cube c = concatenate(a, b, 0);
  EXPECT_EQ(c, (Cube{0, 2, 1, 3}));
  EXPECT_TRUE(dk(5, 1).is_cube(c));
}

TEST(Limits, DimensionAboveCapThrows) {
  Cubespace s = dk(2, 1);
  EXPECT_THROW(count_cubes(s, dimension_cap() + 1), std::out_of_range);
}

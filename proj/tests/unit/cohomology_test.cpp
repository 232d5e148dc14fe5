#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "nilspace/cohomology.hpp"
#include "nilspace/constructors.hpp"
#include "nilspace/extension.hpp"
#include "test_oracles.hpp"

using namespace nilspace;

namespace {

Cubespace dk(Int m, int k) { return degree_space(FinAbelianGroup::cyclic(m), k); }

// Sizes of Y and B for cyclic coefficients, by enumerating every function
// on C^(d+1) and every function on points.
struct BruteCohomology {
  std::uint64_t cocycles = 0;
  std::uint64_t coboundaries = 0;
};

BruteCohomology brute_cohomology(const Cubespace& s, int d, std::uint32_t m) {
  const int n = d + 1;
  const CubeSet cubes = enumerate_cubes(s, n);
  const std::size_t count = cubes.size();
  struct Sign { std::size_t from, to; int sign; };
  struct Sum { std::size_t a, b, whole; };
  std::vector<Sign> signs;
  std::vector<Sum> sums;
  for (std::size_t i = 0; i < count; ++i) {
    for (const auto& sigma : automorphisms(n)) {
      Cube c(cubes.width());
      for (Vertex v = 0; v < c.size(); ++v) c[v] = cubes[i][sigma(v)];
      signs.push_back({i, *cubes.index_of(c), sigma.sign()});
    }
    for (int axis = 0; axis < n; ++axis)
      for (std::size_t j = 0; j < count; ++j) {
        bool adjacent = true;
        const Vertex bit = Vertex{1} << axis;
        for (Vertex v = 0; v < cubes.width(); ++v)
          if (!(v & bit)) adjacent = adjacent && cubes[i][v | bit] == cubes[j][v];
        if (!adjacent) continue;
        Cube whole(cubes.width());
        for (Vertex v = 0; v < whole.size(); ++v) whole[v] = (v & bit) ? cubes[j][v] : cubes[i][v];
        sums.push_back({i, j, *cubes.index_of(whole)});
      }
  }
  BruteCohomology out;
  std::vector<std::uint32_t> f(count, 0);
  while (true) {
    bool ok = true;
    for (const auto& s : signs)
      ok = ok && (f[s.to] + m - (s.sign > 0 ? f[s.from] : (m - f[s.from]) % m)) % m == 0;
    for (const auto& s : sums) ok = ok && (f[s.a] + f[s.b]) % m == f[s.whole];
    out.cocycles += ok;
    std::size_t i = 0;
    while (i < count && ++f[i] == m) f[i++] = 0;
    if (i == count) break;
  }
  std::set<std::vector<std::uint32_t>> bounds;
  std::vector<std::uint32_t> g(s.size(), 0);
  while (true) {
    std::vector<std::uint32_t> b(count);
    for (std::size_t i = 0; i < count; ++i) {
      long long t = 0;
      for (Vertex v = 0; v < cubes.width(); ++v) t += (weight_of(v) % 2 ? -1 : 1) * static_cast<long long>(g[cubes[i][v]]);
      b[i] = static_cast<std::uint32_t>(((t % m) + m) % m);
    }
    bounds.insert(b);
    std::size_t i = 0;
    while (i < g.size() && ++g[i] == m) g[i++] = 0;
    if (i == g.size()) break;
  }
  out.coboundaries = bounds.size();
  return out;
}

}  // namespace

TEST(Cohomology, GroupOrdersMatchExhaustiveCount) {
  struct Case { Int base_m; int base_k; int d; std::uint32_t m; };
  for (const Case& c : std::vector<Case>{{2, 1, 0, 2}, {3, 1, 0, 3}, {2, 1, 1, 2}, {2, 1, 1, 4}, {2, 1, 2, 2}, {2, 2, 1, 2}}) {
    Cubespace s = dk(c.base_m, c.base_k);
    BruteCohomology b = brute_cohomology(s, c.d, c.m);
    CohomologyGroup h = cohomology(s, c.d, FinAbelianGroup::cyclic(c.m));
    EXPECT_EQ(h.cocycles.order(), b.cocycles) << c.base_m << " " << c.base_k << " " << c.d << " " << c.m;
    EXPECT_EQ(h.coboundary_order, b.coboundaries);
    EXPECT_EQ(h.group.order() * b.coboundaries, b.cocycles);
  }
}

TEST(Cohomology, PointHasNoClasses) {
  for (int d = 0; d <= 2; ++d)
    for (Int m : {2, 3, 4}) EXPECT_EQ(cohomology(point_space(), d, FinAbelianGroup::cyclic(m)).group.order(), 1u);
}

TEST(Coboundaries, RandomFunctionsRoundTrip) {
  std::mt19937 rng(5);
  Cubespace s = dk(4, 1);
  FinAbelianGroup a({2, 4});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<FinAbelianGroup::Element> g(s.size());
    for (auto& x : g) x = rng() % a.order();
    Cocycle rho = coboundary_of(s, 1, a, g);
    EXPECT_TRUE(check_cocycle_axioms(rho).ok);
    auto w = is_coboundary(rho);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(coboundary_of(s, 1, a, *w).values, rho.values);
    CohomologyGroup h = cohomology(s, 1, a);
    EXPECT_TRUE(h.is_trivial_class(rho));
  }
}

TEST(Coboundaries, NontrivialClassIsNotACoboundary) {
  Cubespace s = dk(2, 1);
  CohomologyGroup h = cohomology(s, 1, FinAbelianGroup::cyclic(2));
  ASSERT_EQ(h.group.order(), 2u);
  ASSERT_FALSE(h.representatives.empty());
  const Cocycle& rho = h.representatives.back();
  EXPECT_FALSE(is_coboundary(rho).has_value());
  ExtensionSpace e = extension_from_cocycle(rho);
  EXPECT_FALSE(is_split(e).split);
  EXPECT_TRUE(find_isomorphism(e.total, dk(4, 1), 3).has_value());
  EXPECT_TRUE(certify_extension(e).ok);
}

TEST(Boundary, MatchesFaceDifference) {
  Cubespace s = dk(2, 1);
  CocycleSpace y = cocycle_space(s, 1, FinAbelianGroup::cyclic(4));
  ASSERT_FALSE(y.generators.empty());
  for (const auto& rho : y.generators) {
    Cocycle d = boundary(rho);
    EXPECT_EQ(d.degree, 2);
    for (std::size_t j = 0; j < d.cubes->size(); ++j) {
      auto c = (*d.cubes)[j];
      Cube lower(c.begin(), c.begin() + 4), upper(c.begin() + 4, c.end());
      EXPECT_EQ(d.values[j], rho.group.sub(rho(lower), rho(upper)));
    }
    EXPECT_TRUE(check_cocycle_axioms(d).ok);
  }
}

TEST(Sections, SplitExtensionHasCubePreservingSection) {
  Cubespace s = dk(3, 1);
  ExtensionSpace e = extension_from_cocycle(zero_cocycle(s, 1, FinAbelianGroup::cyclic(2)));
  SplitResult r = is_split(e);
  ASSERT_TRUE(r.split);
  EXPECT_TRUE(is_morphism(s, e.total, r.section, 3));
  for (Point x = 0; x < s.size(); ++x) EXPECT_EQ(e.project(r.section[x]), x);
}

TEST(ThreeCubeSums, ConstantMapsVanish) {
  Cubespace s = dk(3, 1);
  CohomologyGroup h = cohomology(s, 1, FinAbelianGroup::cyclic(3));
  ThreeCube t = three_cube_maps(2);
  for (Point x = 0; x < 3; ++x) {
    std::vector<Point> constant(t.point_count(), x);
    for (const auto& rho : h.cocycles.generators) EXPECT_EQ(beta_sum(constant, rho), 0u);
  }
}

TEST(Files, CocycleRoundTrip) {
  Cubespace s = dk(2, 1);
  CohomologyGroup h = cohomology(s, 1, FinAbelianGroup::cyclic(4));
  for (const auto& rho : h.cocycles.generators) {
    std::string text = format_cocycle(rho, "S");
    std::istringstream in(text);
    std::string name;
    Cocycle back = parse_cocycle(in, s, &name);
    EXPECT_EQ(name, "S");
    EXPECT_EQ(back.values, rho.values);
    EXPECT_EQ(back.group, rho.group);
  }
  std::istringstream missing("cocycle 1 S Z2\n0 1\n");
  EXPECT_ANY_THROW(parse_cocycle(missing, s));
  EXPECT_EQ(format_group_spec(parse_group_spec("Z2xZ4")), "Z2xZ4");
}

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "nilspace/abelian.hpp"

using namespace nilspace;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, Int lo, Int hi) {
  std::uniform_int_distribution<Int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// number of elements of each order, computed from coordinates alone
std::map<Int, std::uint64_t> order_statistics(const std::vector<Int>& orders) {
  std::map<Int, std::uint64_t> out;
  std::vector<Int> x(orders.size(), 0);
  while (true) {
    Int ord = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Int g = std::gcd(x[i], orders[i]);
      Int oi = orders[i] / g;
      ord = std::lcm(ord, oi);
    }
    ++out[ord];
    std::size_t i = 0;
    while (i < x.size() && ++x[i] == orders[i]) x[i++] = 0;
    if (i == x.size()) break;
  }
  return out;
}

}  // namespace

TEST(Smith, ProductIdentityAndDivisibility) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    IntMatrix m = random_matrix(rng, 1 + trial % 4, 1 + (trial / 4) % 4, -9, 9);
    SmithForm f = smith_normal_form(m);
    EXPECT_EQ(f.u * m * f.v, f.s);
    auto d = f.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      EXPECT_GE(d[i], 0);
      if (d[i] == 0) EXPECT_EQ(d[i + 1], 0);
      else EXPECT_EQ(d[i + 1] % d[i], 0);
    }
  }
}

TEST(Smith, TwoByTwoMatchesGcdAndDeterminant) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix m = random_matrix(rng, 2, 2, -12, 12);
    auto d = smith_normal_form(m).diagonal();
    Int g = std::gcd(std::gcd(m(0, 0), m(0, 1)), std::gcd(m(1, 0), m(1, 1)));
    Int det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    EXPECT_EQ(d[0], g);
    EXPECT_EQ(d[0] * d[1], std::abs(det));
  }
}

TEST(Smith, ModularAllOnesTerminates) {
  ModularSmithForm f = smith_normal_form_mod(IntMatrix{{1, 1}, {1, 1}}, 2);
  EXPECT_EQ(f.rank, 1u);
  ModularSmithForm g = smith_normal_form_mod(IntMatrix{{3, 3, 3}, {3, 3, 3}}, 9, {true, true});
  EXPECT_EQ(g.rank, 1u);
  EXPECT_EQ(g.diagonal()[0], 3);
}

TEST(Arithmetic, OverflowIsDetected) {
  EXPECT_THROW(checked_mul(Int{1} << 40, Int{1} << 40), std::overflow_error);
  EXPECT_THROW(checked_add(std::numeric_limits<Int>::max(), 1), std::overflow_error);
  EXPECT_EQ(mod_floor(-7, 3), 2);
  auto e = extended_gcd(240, 46);
  EXPECT_EQ(e.g, 2);
  EXPECT_EQ(e.s * 240 + e.t * 46, 2);
}

TEST(FinAbelian, InvariantFactorsPreserveOrderStatistics) {
  for (const std::vector<Int>& orders : std::vector<std::vector<Int>>{{2, 3}, {4, 6}, {2, 2, 4}, {6, 10, 15}, {9, 3, 2}}) {
    FinAbelianGroup a(orders);
    FinAbelianGroup inv(a.invariant_factors());
    EXPECT_TRUE(inv.is_invariant_form());
    EXPECT_EQ(order_statistics(orders), order_statistics(inv.cyclic_orders()));
  }
  EXPECT_EQ(FinAbelianGroup({4, 6}).invariant_factors(), (std::vector<Int>{2, 12}));
  EXPECT_EQ(FinAbelianGroup({2, 3}).invariant_factors(), (std::vector<Int>{6}));
}

TEST(FinAbelian, ElementArithmetic) {
  FinAbelianGroup a({2, 4});
  EXPECT_EQ(a.order(), 8u);
  for (FinAbelianGroup::Element x = 0; x < a.order(); ++x) {
    EXPECT_EQ(a.element(a.coordinates(x)), x);
    EXPECT_EQ(a.add(x, a.neg(x)), a.zero());
    for (FinAbelianGroup::Element y = 0; y < a.order(); ++y) {
      auto cx = a.coordinates(x), cy = a.coordinates(y), cs = a.coordinates(a.add(x, y));
      for (std::size_t i = 0; i < cx.size(); ++i) EXPECT_EQ(cs[i], (cx[i] + cy[i]) % a.cyclic_orders()[i]);
    }
  }
  EXPECT_EQ(a.to_string(), "Z2 x Z4");
  EXPECT_EQ(FinAbelianGroup(std::vector<Int>{}).to_string(), "0");
  EXPECT_EQ(a.element_order(a.element({1, 1})), 4);
}

TEST(Kernel, MatchesBruteForce) {
  std::mt19937 rng(3);
  for (Int m : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 6; ++trial) {
      IntMatrix r = random_matrix(rng, 2, 3, 0, m - 1);
      ModularKernel k = kernel_mod(r, m);
      std::uint64_t brute = 0;
      for (Int a = 0; a < m; ++a)
        for (Int b = 0; b < m; ++b)
          for (Int c = 0; c < m; ++c) {
            bool zero = true;
            for (std::size_t i = 0; i < 2; ++i) zero = zero && mod_floor(r(i, 0) * a + r(i, 1) * b + r(i, 2) * c, m) == 0;
            brute += zero;
          }
      std::uint64_t size = 1;
      for (Int o : k.orders) size *= static_cast<std::uint64_t>(o);
      EXPECT_EQ(size, brute) << "m = " << m;
      for (const auto& g : k.generators)
        for (std::size_t i = 0; i < 2; ++i)
          EXPECT_EQ(mod_floor(r(i, 0) * g[0] + r(i, 1) * g[1] + r(i, 2) * g[2], m), 0);
    }
  }
}

TEST(Kernel, RowReducerKeepsSpan) {
  ModularRowReducer red(3, 4);
  red.add_row({2, 0, 2});
  red.add_row({1, 1, 0});
  red.add_row({3, 3, 0});
  ModularKernel a = kernel_mod(red);
  ModularKernel b = kernel_mod(IntMatrix{{2, 0, 2}, {1, 1, 0}, {3, 3, 0}}, 4);
  EXPECT_EQ(a.orders, b.orders);
}

TEST(LinearSystem, SolvableExactlyWhenBruteForceFindsASolution) {
  for (const IntMatrix& c : {IntMatrix{{1, 2}, {3, 4}}, IntMatrix{{1, 2}, {3, 1}}, IntMatrix{{2, 4}, {0, 2}}}) {
    for (Int m : {4, 5}) {
      IntLinearSystem sys{c, {m, m}, FinAbelianGroup({m, m})};
      for (Int r0 = 0; r0 < m; ++r0)
        for (Int r1 = 0; r1 < m; ++r1) {
          bool brute = false;
          for (Int x0 = 0; x0 < m; ++x0)
            for (Int x1 = 0; x1 < m; ++x1)
              brute = brute || (mod_floor(c(0, 0) * x0 + c(0, 1) * x1 - r0, m) == 0 &&
                                mod_floor(c(1, 0) * x0 + c(1, 1) * x1 - r1, m) == 0);
          std::vector<Int> rhs{r0, r1};
          auto sol = solve_modular(sys, rhs);
          ASSERT_EQ(sol.has_value(), brute);
          if (!sol) continue;
          const auto& x = sol->particular;
          EXPECT_EQ(mod_floor(c(0, 0) * x[0] + c(0, 1) * x[1] - r0, m), 0);
          EXPECT_EQ(mod_floor(c(1, 0) * x[0] + c(1, 1) * x[1] - r1, m), 0);
          for (const auto& k : sol->kernel) {
            EXPECT_EQ(mod_floor(c(0, 0) * k[0] + c(0, 1) * k[1], m), 0);
            EXPECT_EQ(mod_floor(c(1, 0) * k[0] + c(1, 1) * k[1], m), 0);
          }
        }
    }
  }
}

TEST(Identification, KleinFourTable) {
  std::vector<std::vector<std::size_t>> add{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  auto id = identify_abelian_table(add, 0);
  EXPECT_EQ(id.group.cyclic_orders(), (std::vector<Int>{2, 2}));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      EXPECT_EQ(id.element_of[add[a][b]], id.group.add(id.element_of[a], id.element_of[b]));
}

TEST(Quotient, SubgroupAndQuotientOrders) {
  FinAbelianGroup a({4, 4});
  std::vector<FinAbelianGroup::Element> gens{a.element({2, 0}), a.element({0, 2})};
  auto q = subgroup_and_quotient(a, gens);
  EXPECT_EQ(q.subgroup.order(), 4u);
  EXPECT_EQ(q.quotient.order(), 4u);
  EXPECT_EQ(q.subgroup_elements.size(), 4u);
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"

namespace nilspace {

/// Finite group given by its multiplication table; identity is index 0.
class FiniteGroup {
 public:
  using Element = std::uint32_t;

  FiniteGroup() = default;
  /// Validates closure, identity, inverses and associativity exhaustively.
  explicit FiniteGroup(std::vector<std::vector<Element>> table, std::vector<std::string> labels = {},
                       std::string name = {});

  std::size_t order() const { return table_.size(); }
  Element identity() const { return 0; }
  Element mul(Element a, Element b) const { return table_[a][b]; }
  Element inv(Element a) const { return inverse_[a]; }
  /// a^{-1} b^{-1} a b
  Element commutator(Element a, Element b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  Element power(Element a, std::int64_t e) const;

  const std::string& label(Element a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<Element>>& table() const { return table_; }
  const std::string& name() const { return name_; }
  bool is_abelian() const;

  /// Sorted element list of the subgroup generated by `gens`.
  std::vector<Element> generated_subgroup(std::span<const Element> gens) const;
  bool is_subgroup(std::span<const Element> sorted_elements) const;
  bool is_normal(std::span<const Element> sorted_elements) const;
  std::vector<Element> conjugacy_class(Element a) const;
  /// Sorted subgroup generated by all [x, y] with x in a, y in b.
  std::vector<Element> commutator_subgroup(std::span<const Element> a, std::span<const Element> b) const;

 private:
  std::vector<std::vector<Element>> table_;
  std::vector<Element> inverse_;
  std::vector<std::string> labels_;
  std::string name_;
};

FiniteGroup cyclic_group(std::uint32_t n);
FiniteGroup abelian_group(const FinAbelianGroup& a);
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);
/// Upper unitriangular 3x3 matrices over Z_p; element (a, b, c) is
/// [[1, a, c], [0, 1, b], [0, 0, 1]] with index a + p b + p^2 c.
FiniteGroup heisenberg_group(std::uint32_t p);
/// Symmetries of the regular n-gon (order 2n); index i + n s for r^i s^s.
FiniteGroup dihedral_group(std::uint32_t n);
FiniteGroup quaternion_group();

/// Table file: order on line 1, then the m x m table of 0-based indices,
/// then optional "label <index> <name>" lines. Errors name the offending row.
FiniteGroup parse_group_table(std::istream& in, const std::string& source = "<table>");
FiniteGroup load_group_table(const std::string& path);
std::string format_group_table(const FiniteGroup& g);

/// G = G_1 >= G_2 >= ... >= G_{k+1} = {1} with [G_i, G_j] <= G_{i+j}.
class Filtration {
 public:
  using Element = FiniteGroup::Element;

  Filtration() = default;
  /// `levels[i]` lists generators of G_{i+2}; G_1 is the whole group and the
  /// level after the last one is trivial.
  static Filtration from_generators(const FiniteGroup& g, const std::vector<std::vector<Element>>& levels);
  static Filtration lower_central_series(const FiniteGroup& g);

  /// Degree k: G_{k+1} is the first trivial level.
  int degree() const { return static_cast<int>(levels_.size()) - 1; }
  /// G_i as a sorted element list (G_0 = G_1 = G, trivial beyond k).
  const std::vector<Element>& level(int i) const;
  bool in_level(int i, Element g) const;
  std::size_t group_order() const { return member_.empty() ? 0 : member_[0].size(); }

 private:
  explicit Filtration(const FiniteGroup& g, std::vector<std::vector<Element>> levels);
  std::vector<std::vector<Element>> levels_;  // levels_[i] = G_{i+1}, last is {1}
  std::vector<std::vector<char>> member_;
  std::vector<Element> trivial_{0};
};

}  // namespace nilspace

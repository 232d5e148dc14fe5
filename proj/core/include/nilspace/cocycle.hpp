#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/cubespace.hpp"

namespace nilspace {

/// A function rho: C^(degree+1)(N) -> A stored against the canonical
/// (lexicographic) enumeration of C^(degree+1)(N). Degree -1 functions are
/// functions on points.
struct Cocycle {
  using Element = FinAbelianGroup::Element;

  Cubespace base;
  int degree = 0;
  FinAbelianGroup group;
  std::shared_ptr<const CubeSet> cubes;
  std::vector<Element> values;

  int cube_dim() const { return degree + 1; }
  std::size_t size() const { return values.size(); }
  /// Value on a cube of dimension degree+1; throws if it is not a cube.
  Element operator()(std::span<const Point> cube) const;

  Cocycle operator+(const Cocycle& other) const;
  Cocycle operator-(const Cocycle& other) const;
  Cocycle scaled(Int k) const;
  bool is_zero() const;
};

/// Canonical enumeration of C^n(N), shared between cocycles.
std::shared_ptr<const CubeSet> shared_cubes(const Cubespace& n, int dim);

Cocycle zero_cocycle(const Cubespace& n, int degree, const FinAbelianGroup& a,
                     std::shared_ptr<const CubeSet> cubes = nullptr);
/// Function values on points as a degree -1 cochain.
Cocycle point_function(const Cubespace& n, const FinAbelianGroup& a, std::vector<FinAbelianGroup::Element> values);

/// "cocycle <degree> <space> <group>" followed by "<index> <value>" lines;
/// the group is written as "Z2xZ4" and values as element labels.
std::string format_cocycle(const Cocycle& rho, const std::string& space_name);
/// Reads a cocycle against `base`; the cube table is enumerated afresh and
/// every index must appear exactly once.
Cocycle parse_cocycle(std::istream& in, const Cubespace& base, std::string* space_name = nullptr,
                      const std::string& source = "<cocycle>");
FinAbelianGroup parse_group_spec(const std::string& spec);
std::string format_group_spec(const FinAbelianGroup& a);

}  // namespace nilspace

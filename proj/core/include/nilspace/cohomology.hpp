#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nilspace/cocycle.hpp"
#include "nilspace/extension.hpp"

namespace nilspace {

struct CocycleCheck {
  bool ok = true;
  std::string witness;
};

/// Sign rule under every automorphism and additivity under concatenation
/// along every axis, checked exhaustively.
CocycleCheck check_cocycle_axioms(const Cocycle& rho);

/// Y_d(N, A) as the kernel of the automorphism and last-axis concatenation
/// relations. Cubes in one automorphism orbit share a variable up to sign.
struct CocycleSpace {
  Cubespace base;
  int degree = 0;
  FinAbelianGroup group;
  std::shared_ptr<const CubeSet> cubes;

  std::vector<std::uint32_t> orbit_of;  // cube -> variable
  std::vector<std::int8_t> sign_of;     // value(cube) = sign * variable
  std::vector<std::size_t> orbit_rep;   // variable -> representative cube
  std::vector<ModularKernel> kernels;   // per cyclic factor of A, over variables
  std::size_t relation_count = 0;

  std::vector<Cocycle> generators;      // factor by factor
  std::vector<Int> orders;

  std::uint64_t order() const;
  /// Coordinates with respect to `generators`; throws if rho is not in Y.
  std::vector<Int> coordinates(const Cocycle& rho) const;
  Cocycle element(std::span<const Int> coords) const;
};

CocycleSpace cocycle_space(const Cubespace& n, int degree, const FinAbelianGroup& a);

/// d rho(c) = rho(c_0) - rho(c_1) on the two faces normal to the last axis.
/// Input and output are certified with check_cocycle_axioms.
Cocycle boundary(const Cocycle& rho);

/// The degree-d coboundary of g: c -> sum_v (-1)^h(v) g(c(v)).
Cocycle coboundary_of(const Cubespace& n, int degree, const FinAbelianGroup& a,
                      std::span<const FinAbelianGroup::Element> g,
                      std::shared_ptr<const CubeSet> cubes = nullptr);

/// A function g on points with coboundary_of(g) == rho, if one exists.
/// The witness is re-evaluated before it is returned.
std::optional<std::vector<FinAbelianGroup::Element>> is_coboundary(const Cocycle& rho);

struct CohomologyGroup {
  int degree = 0;
  FinAbelianGroup group;  // invariant factors of H_d(N, A)
  std::vector<Cocycle> representatives;
  CocycleSpace cocycles;
  std::uint64_t coboundary_order = 1;

  /// Class of a cocycle as coordinates in `group`.
  std::vector<Int> class_of(const Cocycle& rho) const;
  bool is_trivial_class(const Cocycle& rho) const;

  IntMatrix projection;  // group.rank() x generator count of `cocycles`
};

CohomologyGroup cohomology(const Cubespace& n, int degree, const FinAbelianGroup& a);

/// beta(t, tau) = sum_v tau(t o Psi_v) (-1)^h(v) for a morphism t: T_k -> N
/// given by its values on the points of T_k. Throws if t is not a morphism.
FinAbelianGroup::Element beta_sum(std::span<const Point> t, const Cocycle& tau);

/// rho(c) = sum_v f(m(v)) (-1)^h(v) over a lift m of c, f(m) = m - x(pi m).
Cocycle cocycle_from_cross_section(const ExtensionSpace& m, std::span<const Point> section);

struct SplitResult {
  bool split = false;
  Cocycle cocycle;                   // of the least-point section
  std::vector<Point> section;        // cube preserving when split
};

SplitResult is_split(const ExtensionSpace& m);

/// Certifies that m is the degree-k extension given by the cocycle of its
/// least-point section: the rebuilt extension has exactly the cubes of
/// m.total up to max_dim (default k+1).
CocycleCheck certify_extension(const ExtensionSpace& m, int max_dim = -1);

}  // namespace nilspace

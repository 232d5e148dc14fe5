#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilspace/cocycle.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/extension.hpp"

namespace nilspace {

/// Classes of ~_k, numbered by their least point.
struct SimKPartition {
  int k = 0;
  std::vector<Point> class_of;
  std::vector<std::vector<Point>> classes;  // each sorted

  std::size_t class_count() const { return classes.size(); }
  bool discrete() const { return classes.size() == class_of.size(); }
  /// "{0,1} {2,3}" with point labels of `space`.
  std::string to_string(const Cubespace& space) const;
};

/// x ~_k y iff the (k+1)-cube equal to x except y at 0^(k+1) is a cube.
bool sim_related(const Cubespace& n, int k, Point x, Point y);
/// Throws std::runtime_error if the relation is not an equivalence.
SimKPartition sim_k(const Cubespace& n, int k);

/// Least k with ~_k discrete; throws if none below the dimension cap.
int nilspace_step(const Cubespace& n);

struct Factor {
  int k = 0;
  Cubespace space;                 // F_k(N)
  std::vector<Point> projection;   // N -> F_k(N)
  SimKPartition partition;
};

/// N / ~_k. Cubes up to dimension k+1 are projections of cubes of N; larger
/// ones are decided by their (k+1)-faces. When ~_k is discrete the factor is
/// N itself with the identity projection.
Factor factor(const Cubespace& n, int k);

/// Closure at 1^(k+1) of the corner c(v,0) = x (v != 1^k), c(1^k,0) = z,
/// c(v,1) = y (v != 1^k) in a k-step space; equals z - x + y.
Point close_translation_corner(const Cubespace& n, int k, Point x, Point y, Point z);

struct LocalTranslation {
  std::vector<Point> domain;  // the ~_{k-1} class of x, sorted
  std::vector<Point> image;   // image[j] = phi_{x,y}(domain[j])
  Point operator()(Point z) const;
};

/// phi_{x,y} on the ~_{k-1} class of x for a k-step N (k >= 1).
LocalTranslation local_translation(const Cubespace& n, int k, Point x, Point y);

/// The i-th structure group: A_i acting on the fibers of F_i -> F_{i-1}.
struct StructureGroup {
  int level = 0;
  FinAbelianGroup group;                       // invariant form
  Factor upper;                                // F_i
  Factor lower;                                // F_{i-1}
  std::vector<Point> down;                     // F_i point -> F_{i-1} point
  std::vector<Point> reference_fiber;          // element -> point, fiber over lower point 0
  std::vector<std::vector<Point>> action;      // action[a][x] = x + a on F_i
  std::vector<Point> fiber_base;               // least point of the fiber of x
  std::vector<FinAbelianGroup::Element> coordinate;  // x = fiber_base(x) + coordinate(x)

  /// Addition table of the reference fiber relative to its least point.
  std::vector<std::vector<Point>> reference_table() const;
};

/// Throws std::runtime_error with a witness when the fibers do not carry a
/// consistent free transitive abelian action.
StructureGroup structure_group(const Cubespace& n, int i);
/// Same, reusing F_i(N) and F_{i-1}(N).
StructureGroup structure_group(const Cubespace& n, int i, Factor upper, Factor lower);

struct Certificate {
  bool ok = true;
  std::string violated;
  std::string witness;
};

struct BundleLevel {
  int index = 0;                // i
  Factor factor;                // T_i = F_i(N)
  Cubespace canonical;          // T_i with point id base * |A_i| + coordinate
  std::vector<Point> to_canonical;    // F_i point -> canonical id
  std::vector<Point> from_canonical;
  FinAbelianGroup group;        // A_i (trivial at level 0)
  std::vector<std::vector<Point>> action;  // on F_i points
  std::vector<Point> down;      // F_i point -> F_{i-1} point
  Cocycle cocycle;              // degree i over canonical T_{i-1}, least-point section
};

struct BundleDecomposition {
  int k = 0;
  std::vector<BundleLevel> levels;  // T_0 .. T_k
  Certificate certificate;

  std::vector<FinAbelianGroup> structure_groups() const;
  /// N point -> canonical id of T_k.
  const std::vector<Point>& canonical_ids() const { return levels.back().to_canonical; }
};

/// Certifies the free transitive actions, consistency across fibers and the
/// lift structure (lifts of a base cube differ by C^n(D_i(A_i)) cubes) up to
/// `certify_dim` (default k+1).
BundleDecomposition bundle_decomposition(const Cubespace& n, int k, int certify_dim = -1);

struct RebuildCheck {
  Certificate certificate;
  std::vector<std::uint64_t> cube_counts;  // per dimension 0..max_dim
};

/// Rebuilds T_k as an iterated extension from the level cocycles and checks
/// that it has exactly the cubes of N up to max_dim (default k+1).
RebuildCheck rebuild_from_decomposition(const Cubespace& n, const BundleDecomposition& d, int max_dim = -1);

/// True iff f maps every ~_j class of `source` onto a full ~_j class of
/// `target` for all j <= max_j.
bool is_fiber_surjective(const Cubespace& source, const Cubespace& target, std::span<const Point> f, int max_j,
                         std::string* witness = nullptr);

struct FiberCardinalityReport {
  int n = 0;
  std::uint64_t source_cubes = 0;
  std::uint64_t target_cubes = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // fiber size -> target cubes with it

  bool uniform() const { return histogram.size() == 1 && histogram.begin()->first > 0; }
};

/// Fiber sizes of C^n(source) -> C^n(target); throws if f is not a morphism
/// on dimension n.
FiberCardinalityReport fiber_cardinality_report(const Cubespace& source, const Cubespace& target,
                                                std::span<const Point> f, int n);

}  // namespace nilspace

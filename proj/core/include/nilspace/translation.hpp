#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cohomology.hpp"
#include "nilspace/factor.hpp"

namespace nilspace {

using PointMap = std::vector<Point>;

PointMap identity_map(std::size_t n);
/// (a o b)(x) = a(b(x))
PointMap compose_maps(std::span<const Point> a, std::span<const Point> b);
/// Throws std::invalid_argument unless a is a bijection.
PointMap inverse_map(std::span<const Point> a);

/// For every c in C^k(N), (c, alpha(c))_i is in C^(k+i)(N); alpha must be a
/// bijection. k is the step of N.
bool is_translation(const Cubespace& n, int k, std::span<const Point> alpha, int i, std::string* witness = nullptr);
/// Same test against a precomputed C^k(N).
bool is_translation(const Cubespace& n, const CubeSet& ck, std::span<const Point> alpha, int i,
                    std::string* witness = nullptr);

struct TranslationGroup {
  int height = 0;
  int step = 0;
  std::vector<PointMap> elements;               // lexicographic; identity first
  std::vector<std::vector<std::uint32_t>> table; // table[a][b] = a o b
  std::vector<std::uint32_t> inverse;
  bool complete = true;                         // false after budget exhaustion
  std::string note;

  std::size_t order() const { return elements.size(); }
  std::optional<std::size_t> index_of(std::span<const Point> alpha) const;
  bool is_abelian() const;
};

/// Trans_i(N) via the bundle structure: translations of F_{k-1}(N), their
/// lifts, and the kernel Hom(F_{k-1}(N), D_{k-i}(A_k)). Every element is
/// certified with is_translation. Heights above k give the trivial group.
/// On budget exhaustion the subgroup generated by what was certified so far
/// is returned with complete = false.
TranslationGroup enumerate_translations(const Cubespace& n, int i, int k = -1);

/// Functions phi: M -> A whose alternating sum vanishes on every
/// (d+1)-cube of M, i.e. the morphisms M -> D_d(A).
std::vector<std::vector<FinAbelianGroup::Element>> homs_to_degree_space(const Cubespace& m, int d,
                                                                        const FinAbelianGroup& a);

struct CentralSeriesReport {
  int step = 0;
  std::vector<TranslationGroup> groups;  // heights 1 .. k+1
  bool ok = true;
  std::string witness;
  std::uint64_t commutators_checked = 0;
  std::uint64_t nontrivial_commutators = 0;
  std::string example;  // a nontrivial commutator and the height it lands in
};

/// Checks Trans_1 >= Trans_2 >= ..., [Trans_i, Trans_j] <= Trans_{i+j} and
/// that Trans_{k+1} is trivial. Trans_{k+1} is computed by filtering
/// Trans_k through the height k+1 test, not assumed.
CentralSeriesReport verify_central_series(const Cubespace& n, int k = -1);

/// T(alpha, N, i) and its factor T* as a degree k-i extension of
/// F_{k-1}(N) by A_k.
struct TranslationBundle {
  int height = 0;
  int step = 0;
  PointMap alpha;                              // on F_{k-1}(N)
  Factor base;                                 // F_{k-1}(N)
  StructureGroup top;                          // A_k acting on N
  std::vector<std::pair<Point, Point>> pairs;  // points of T
  Cubespace total;                             // T
  Factor star_factor;                          // F_{k-1}(T)
  ExtensionSpace star;                         // T*, ids base * |A_k| + a
  std::vector<std::pair<Point, Point>> representative;  // T* id -> a pair in its class
  CocycleCheck certificate;
};

/// Requires k >= i+1 and alpha in Trans_i(F_{k-1}(N)).
TranslationBundle translation_bundle(const Cubespace& n, std::span<const Point> alpha, int i, int k = -1);

struct LiftResult {
  bool lifted = false;
  PointMap beta;                 // on N when lifted
  Cocycle cocycle;               // of the least-point section of T*
  FinAbelianGroup obstruction_group;
  std::vector<Int> obstruction;  // class of `cocycle` in obstruction_group
};

/// Lifts alpha in Trans_i(F_{k-1}(N)) to Trans_i(N) through a splitting of
/// T*; otherwise reports the cohomology class of T*.
LiftResult lift_translation(const Cubespace& n, std::span<const Point> alpha, int i, int k = -1);

struct TranslationMove {
  int height = 0;         // 0 for a whole-cube move by an element of Trans_1
  PointMap alpha;
  FaceDescriptor face;
};

struct EquivalenceResult {
  bool reachable = false;
  std::vector<TranslationMove> moves;
  std::uint64_t states = 0;
};

/// Breadth-first search over moves alpha^F with alpha in Trans_i and F a
/// face of codimension i (whole-cube moves use Trans_1).
EquivalenceResult translation_equivalent(const Cubespace& n, std::span<const Point> c1, std::span<const Point> c2,
                                         int k = -1);

}  // namespace nilspace

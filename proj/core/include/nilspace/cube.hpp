#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nilspace {

/// A vertex of {0,1}^n; bit j holds coordinate j.
using Vertex = std::uint32_t;

inline constexpr int kDefaultDimensionCap = 6;

/// Largest cube dimension accepted by enumeration entry points.
int dimension_cap();
void set_dimension_cap(int cap);

inline int weight_of(Vertex v) { return __builtin_popcount(v); }
inline Vertex full_vertex(int n) { return (Vertex{1} << n) - 1; }
inline std::uint32_t vertex_count(int n) { return std::uint32_t{1} << n; }

/// "0110" style rendering, coordinate 0 first.
std::string vertex_string(Vertex v, int n);

enum class CoordKind : std::uint8_t { Zero, One, Var, NegVar };

struct CoordSymbol {
  CoordKind kind = CoordKind::Zero;
  std::uint8_t var = 0;
  bool operator==(const CoordSymbol&) const = default;
};

/// Morphism {0,1}^n -> {0,1}^m; each output coordinate is 0, 1, x_j or 1-x_j.
class CubeMorphism {
 public:
  CubeMorphism() = default;
  CubeMorphism(int source_dim, std::vector<CoordSymbol> coords);

  static CubeMorphism identity(int n);

  int source_dim() const { return source_dim_; }
  int target_dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<CoordSymbol>& coords() const { return coords_; }

  Vertex operator()(Vertex v) const;
  /// The map v -> other(this(v)).
  CubeMorphism then(const CubeMorphism& other) const;
  /// Image of every source vertex, indexed by vertex.
  std::vector<Vertex> table() const;

  std::string to_string() const;
  bool operator==(const CubeMorphism&) const = default;

 private:
  int source_dim_ = 0;
  std::vector<CoordSymbol> coords_;
};

std::vector<CubeMorphism> enumerate_cube_morphisms(int n, int m);

/// Vertices in Gray order: entry p (0-based) is g_n^{-1}(p + 1).
std::vector<Vertex> gray_sequence(int n);
/// g_n as a table indexed by vertex, values in 1..2^n.
std::vector<std::uint32_t> gray_order(int n);

struct FaceDescriptor {
  int ambient_dim = 0;
  Vertex fixed_mask = 0;       // coordinates held constant
  Vertex fixed_bits = 0;       // their values (subset of fixed_mask)
  std::vector<int> free_coords;  // increasing

  int dim() const { return static_cast<int>(free_coords.size()); }
  int codim() const { return ambient_dim - dim(); }
  bool contains(Vertex v) const { return (v & fixed_mask) == fixed_bits; }
  /// Ambient vertex of the face vertex with local coordinates `local`.
  Vertex vertex(Vertex local) const;
  /// All ambient vertices, indexed by local vertex.
  std::vector<Vertex> vertices() const;
  CubeMorphism as_morphism() const;
  std::string to_string() const;
};

FaceDescriptor make_face(int n, Vertex fixed_mask, Vertex fixed_bits);
std::vector<FaceDescriptor> faces(int n, int codim);
std::pair<FaceDescriptor, FaceDescriptor> opposite_faces(int n, int axis);

/// sigma(v)_j = v_{perm[j]} xor flip_j; sign = (-1)^{|sigma(0)|}.
struct CubeAutomorphism {
  std::vector<int> perm;
  Vertex flips = 0;

  int dim() const { return static_cast<int>(perm.size()); }
  int sign() const { return weight_of(flips) % 2 == 0 ? 1 : -1; }
  Vertex operator()(Vertex v) const;
  /// The map v -> other(this(v)).
  CubeAutomorphism then(const CubeAutomorphism& other) const;
  CubeMorphism as_morphism() const;
  bool operator==(const CubeAutomorphism&) const = default;
};

std::vector<CubeAutomorphism> automorphisms(int n);

/// The morphism {0,1}^m -> {0,1}^n with the given vertex images, if any.
std::optional<CubeMorphism> morphism_from_table(std::span<const Vertex> images, int n);

/// Vertex lists of all d-dimensional faces of {0,1}^n, each in local vertex
/// order. Cached; the reference stays valid for the program lifetime.
const std::vector<std::vector<Vertex>>& face_vertex_lists(int n, int d);

/// Generators of the automorphism group: adjacent transpositions and the
/// flip of coordinate 0.
std::vector<CubeAutomorphism> automorphism_generators(int n);

}  // namespace nilspace

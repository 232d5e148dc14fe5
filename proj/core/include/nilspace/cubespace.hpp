#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cube.hpp"

namespace nilspace {

using Point = std::uint32_t;

/// A cube is stored as the list of its vertex values indexed by vertex.
using Cube = std::vector<Point>;

/// Dimension of a cube with `vertices` entries; throws unless a power of two.
int cube_dimension(std::size_t vertices);

/// Membership oracle for the cubes of a finite cubespace.
class CubeRule {
 public:
  virtual ~CubeRule() = default;

  virtual std::size_t point_count() const = 0;
  virtual std::string kind() const = 0;

  /// Exact membership of a map {0,1}^n -> N (vertex-indexed values).
  virtual bool contains(std::span<const Point> cube) const = 0;

  /// Membership under the promise that every proper face is already a cube.
  virtual bool contains_given_faces(std::span<const Point> cube) const { return contains(cube); }

  /// Possible values at vertex v of an n-cube whose vertices below v are
  /// fixed in `partial`. Returns false when no restriction is known; otherwise
  /// `out` receives a sorted superset of the admissible values.
  virtual bool candidates(std::span<const Point> partial, int n, Vertex v,
                          std::vector<Point>& out) const {
    (void)partial, (void)n, (void)v, (void)out;
    return false;
  }

  /// Largest dimension on which `contains` is defined.
  virtual int max_dimension() const { return dimension_cap(); }
};

class CubeSet;

/// A finite cubespace: dense point ids, human readable labels and a rule.
class Cubespace {
 public:
  Cubespace() = default;
  Cubespace(std::shared_ptr<const CubeRule> rule, std::vector<std::string> labels,
            std::optional<int> claimed_step = std::nullopt, std::string name = {});

  std::size_t size() const { return labels_.size(); }
  const std::string& label(Point p) const { return labels_.at(p); }
  const std::vector<std::string>& labels() const { return labels_; }
  const CubeRule& rule() const { return *rule_; }
  std::shared_ptr<const CubeRule> rule_ptr() const { return rule_; }
  std::optional<int> claimed_step() const { return claimed_step_; }
  const std::string& name() const { return name_; }

  Cubespace with_name(std::string name) const;
  Cubespace with_step(std::optional<int> step) const;

  /// Exact membership; throws std::out_of_range when the dimension exceeds
  /// the rule's capability or a value is not a point.
  bool is_cube(std::span<const Point> cube) const;

  std::string format_cube(std::span<const Point> cube) const;

 private:
  std::shared_ptr<const CubeRule> rule_;
  std::vector<std::string> labels_;
  std::optional<int> claimed_step_;
  std::string name_;
};

/// Cubes of one dimension in canonical (lexicographic) order, stored flat.
class CubeSet {
 public:
  CubeSet() = default;
  explicit CubeSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t width() const { return std::size_t{1} << dim_; }
  std::size_t size() const { return width() == 0 ? 0 : data_.size() / width(); }
  std::span<const Point> operator[](std::size_t i) const { return {data_.data() + i * width(), width()}; }

  void push_back(std::span<const Point> cube);
  /// Sorts lexicographically and removes duplicates.
  void canonicalize();

  std::optional<std::size_t> index_of(std::span<const Point> cube) const;
  bool contains(std::span<const Point> cube) const { return index_of(cube).has_value(); }

  const std::vector<Point>& data() const { return data_; }
  bool operator==(const CubeSet&) const = default;

 private:
  int dim_ = 0;
  std::vector<Point> data_;
};

/// Vertex values fixed in advance; std::nullopt leaves a vertex free.
using PartialCube = std::vector<std::optional<Point>>;

/// Visits every corner (map on all vertices but 1^n whose faces avoiding 1^n
/// are cubes) in lexicographic order, with the sorted list of values at 1^n
/// that complete it to a cube. `corner` has 2^n entries; the last is scratch.
using CornerVisitor = std::function<void(std::span<const Point> corner, std::span<const Point> completions)>;

void for_each_corner(const Cubespace& space, int n, const CornerVisitor& visit,
                     const PartialCube& fixed = {});
void for_each_cube(const Cubespace& space, int n,
                   const std::function<void(std::span<const Point>)>& visit,
                   const PartialCube& fixed = {});
CubeSet enumerate_cubes(const Cubespace& space, int n, const PartialCube& fixed = {});
std::uint64_t count_cubes(const Cubespace& space, int n, const PartialCube& fixed = {});

/// Restriction c o phi for a cube morphism phi into the cube's dimension.
Cube compose(std::span<const Point> cube, const CubeMorphism& phi);
Cube restrict_to_face(std::span<const Point> cube, const FaceDescriptor& face);
/// Applies a point map to every vertex.
Cube map_cube(std::span<const Point> cube, std::span<const Point> point_map);

enum class Verdict { Pass, Fail, Indeterminate };
std::string to_string(Verdict v);

struct AxiomResult {
  Verdict verdict = Verdict::Pass;
  std::string witness;
};

struct AxiomReport {
  int step = 0;
  int max_dim = 0;
  int gluing_dim = 0;
  AxiomResult composition;
  AxiomResult ergodicity;
  AxiomResult gluing;
  AxiomResult unique_closing;
  std::uint64_t cubes_checked = 0;

  Verdict overall() const;
};

/// Exhaustive check of the cubespace axioms: composition up to max_dim,
/// ergodicity, corner completion up to gluing_dim (default max(k+2, 3)) and
/// unique completion at dimension k+1.
AxiomReport verify_axioms(const Cubespace& space, int k, int max_dim, int gluing_dim = -1);

/// All values at 1^n completing `corner` (2^n - 1 values, vertices
/// 0 .. 2^n - 2). Throws std::invalid_argument when a face of the corner
/// avoiding 1^n is not a cube.
std::vector<Point> complete_corner(const Cubespace& space, std::span<const Point> corner);

/// Concatenation along `axis` (default: last) of adjacent cubes.
Cube concatenate(std::span<const Point> c1, std::span<const Point> c2, int axis = -1);

/// True iff every cube of `source` up to max_dim maps to a cube of `target`.
bool is_morphism(const Cubespace& source, const Cubespace& target, std::span<const Point> map,
                 int max_dim, std::string* witness = nullptr);

/// Point bijection carrying C^n(a) onto C^n(b) for all 1 <= n <= max_dim.
std::optional<std::vector<Point>> find_isomorphism(const Cubespace& a, const Cubespace& b, int max_dim);

/// Classes of the relation "(x, y) is a 1-cube", closed transitively.
std::vector<std::vector<Point>> ergodic_components(const Cubespace& space);

// ---------------------------------------------------------------------------
// Three-cubes and restricted morphism sets

/// T_n = {-1,0,1}^n; point id = sum_j (t_j + 1) 3^j.
struct ThreeCube {
  int n = 0;
  std::vector<std::vector<Point>> psi;  // psi[v][w] = Psi_v(w)
  std::vector<Point> omega;             // omega[v] = Psi_v(0^n)
  std::vector<std::string> labels;

  Point point_count() const;
  std::vector<int> coordinates(Point p) const;
};

ThreeCube three_cube_maps(int n);

/// Finite cubespace given by generating cubes; its morphisms into N are the
/// maps sending every generating cube to a cube of N.
struct FinitePattern {
  std::size_t point_count = 0;
  std::vector<Cube> generating_cubes;
  std::vector<std::string> labels;
};

FinitePattern point_pattern();
FinitePattern discrete_cube_pattern(int n);
FinitePattern three_cube_pattern(int n);

/// T_n as a cubespace (maps factoring through some Psi_v and a cube morphism).
Cubespace three_cube_space(int n);

struct HomSet {
  std::vector<std::vector<Point>> maps;  // lexicographic order
  /// Uniform counting measure: every morphism has mass 1 / maps.size().
  double mass_per_map() const { return maps.empty() ? 0.0 : 1.0 / static_cast<double>(maps.size()); }
};

HomSet hom_set(const FinitePattern& pattern, const Cubespace& target, const PartialCube& constraints = {});

// ---------------------------------------------------------------------------
// Generic rules shared by several constructors

/// Rule given by explicit cube tables up to `dim_bound`. Above the bound,
/// membership uses (k+1)-face restrictions when `step` is known.
class TableRule final : public CubeRule {
 public:
  TableRule(std::size_t points, std::vector<CubeSet> tables, std::optional<int> step);

  std::size_t point_count() const override { return points_; }
  std::string kind() const override { return "table"; }
  bool contains(std::span<const Point> cube) const override;
  int max_dimension() const override;
  const std::vector<CubeSet>& tables() const { return tables_; }

 private:
  std::size_t points_;
  std::vector<CubeSet> tables_;  // tables_[n] holds C^n
  std::optional<int> step_;
};

/// Cubespace whose cubes are the given tables (dims 0..tables.size()-1).
Cubespace table_space(std::vector<std::string> labels, std::vector<CubeSet> tables,
                      std::optional<int> step = std::nullopt);

/// Tables C^0..C^dim_bound of an existing space.
std::vector<CubeSet> cube_tables(const Cubespace& space, int dim_bound);

/// Induced structure on a subset: f is a cube iff its image is a cube.
Cubespace subspace(const Cubespace& ambient, std::vector<Point> points, std::string name = {});

/// A cube of `rule` of dimension n with value at v drawn from the sorted
/// list allowed[v], if one exists.
std::optional<Cube> find_cube_in(const CubeRule& rule, int n, const std::vector<std::vector<Point>>& allowed);

/// Membership decided by restrictions to all (k+1)-faces (dimension > k+1).
bool all_faces_of_dim(std::span<const Point> cube, int face_dim,
                      const std::function<bool(std::span<const Point>)>& test);

}  // namespace nilspace

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nilspace {

using Int = std::int64_t;

/// Dense row-major integer matrix. Arithmetic through the free functions
/// below is overflow-checked and throws std::overflow_error.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, Int fill = 0);
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Int> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Int> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<Int> column(std::size_t c) const;

  void append_row(std::span<const Int> values);
  IntMatrix transpose() const;

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);
Int mod_floor(Int a, Int m);

struct ExtendedGcd {
  Int g;  // gcd(a, b) >= 0
  Int s;  // s*a + t*b == g
  Int t;
};
ExtendedGcd extended_gcd(Int a, Int b);

/// U * M * V == S with S diagonal, d_1 | d_2 | ..., d_i >= 0 and U, V unimodular.
struct SmithForm {
  IntMatrix u;
  IntMatrix s;
  IntMatrix v;

  std::vector<Int> diagonal() const;
  std::size_t rank() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

/// Diagonalization over Z/mZ. U and V (and their inverses, when requested)
/// are invertible modulo `modulus`; diagonal entries are reduced to
/// gcd(d, modulus), with 0 mod m reported as 0.
struct ModularSmithForm {
  Int modulus = 1;
  IntMatrix u;
  IntMatrix u_inverse;
  IntMatrix s;
  IntMatrix v;
  IntMatrix v_inverse;
  std::size_t rank = 0;  // number of nonzero diagonal entries

  std::vector<Int> diagonal() const;
};

struct ModularSmithOptions {
  bool track_u = false;
  bool track_v = true;
};

ModularSmithForm smith_normal_form_mod(const IntMatrix& m, Int modulus,
                                       ModularSmithOptions options = {});

/// Streaming row-module reduction over Z/mZ. Keeps at most one row per
/// pivot column while preserving the row span exactly.
class ModularRowReducer {
 public:
  ModularRowReducer(std::size_t cols, Int modulus);

  void add_row(std::vector<Int> row);
  /// Sparse row given as (column, coefficient) pairs.
  void add_sparse_row(std::span<const std::pair<std::size_t, Int>> entries);

  std::size_t cols() const { return cols_; }
  Int modulus() const { return modulus_; }
  IntMatrix basis() const;

 private:
  std::size_t cols_;
  Int modulus_;
  std::vector<std::vector<Int>> pivots_;  // indexed by pivot column, empty if none
};

/// Solution module {x in (Z/mZ)^n : R x == 0}.
struct ModularKernel {
  Int modulus = 1;
  std::size_t ambient_dim = 0;
  std::vector<Int> orders;                   // order of each generator (> 1)
  std::vector<std::vector<Int>> generators;  // each of length ambient_dim
  IntMatrix v_inverse;
  std::vector<std::size_t> positions;        // SNF column of each generator
  std::vector<Int> scales;                   // m / gcd(d, m) per generator

  /// Coordinates of a kernel element with respect to `generators`,
  /// each reduced modulo the matching order. Throws if x is not in the kernel.
  std::vector<Int> coordinates(std::span<const Int> x) const;
};

ModularKernel kernel_mod(const IntMatrix& relations, Int modulus);
ModularKernel kernel_mod(const ModularRowReducer& reducer);

/// Finite abelian group Z_{n_1} x ... x Z_{n_r}. Elements are encoded as
/// mixed-radix indices whose order agrees with lexicographic order of the
/// coordinate tuples.
class FinAbelianGroup {
 public:
  using Element = std::uint32_t;

  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 31;

  FinAbelianGroup() = default;
  explicit FinAbelianGroup(std::vector<Int> cyclic_orders);

  static FinAbelianGroup cyclic(Int n) { return FinAbelianGroup({n}); }
  static FinAbelianGroup direct_product(const FinAbelianGroup& a,
                                        const FinAbelianGroup& b);

  const std::vector<Int>& cyclic_orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::uint64_t order() const { return order_; }

  Element zero() const { return 0; }
  std::vector<Int> coordinates(Element e) const;
  Element element(std::span<const Int> coords) const;
  Element element(std::initializer_list<Int> coords) const {
    return element(std::span<const Int>(coords.begin(), coords.size()));
  }

  Element add(Element a, Element b) const;
  Element neg(Element a) const;
  Element sub(Element a, Element b) const { return add(a, neg(b)); }
  Element multiple(Int k, Element a) const;
  Int element_order(Element a) const;

  std::vector<Int> invariant_factors() const;
  bool is_invariant_form() const;

  /// "Z2 x Z4"; the trivial group prints as "0".
  std::string to_string() const;
  /// Element label: "3" for rank one, "(1,0)" otherwise.
  std::string element_label(Element e) const;

  bool operator==(const FinAbelianGroup& other) const { return orders_ == other.orders_; }

 private:
  std::vector<Int> orders_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
};

std::string format_invariant_factors(std::span<const Int> factors);

/// Homomorphism given by an integer matrix acting on coordinate tuples
/// (target.rank() rows, source.rank() columns).
class AbHom {
 public:
  AbHom(FinAbelianGroup source, FinAbelianGroup target, IntMatrix matrix);

  const FinAbelianGroup& source() const { return source_; }
  const FinAbelianGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  FinAbelianGroup::Element operator()(FinAbelianGroup::Element x) const;
  AbHom then(const AbHom& next) const;

  bool is_surjective() const;
  bool is_injective() const;
  std::vector<FinAbelianGroup::Element> kernel_elements() const;

 private:
  FinAbelianGroup source_;
  FinAbelianGroup target_;
  IntMatrix matrix_;
};

/// Reduction to invariant-factor form with explicit isomorphisms.
struct Normalization {
  FinAbelianGroup group;
  AbHom to_normal;
  AbHom from_normal;
};
Normalization normalize(const FinAbelianGroup& a);

/// Congruences sum_j c_ij x_j == b_i (mod m_i) for x in `domain`.
struct IntLinearSystem {
  IntMatrix coefficients;
  std::vector<Int> moduli;
  FinAbelianGroup domain;
};

/// Solution coset: particular + <kernel>, as coordinate tuples in the domain.
struct ModularSolution {
  std::vector<Int> particular;
  std::vector<std::vector<Int>> kernel;
};

std::optional<ModularSolution> solve_modular(const IntLinearSystem& system,
                                             std::span<const Int> rhs);

/// Z^r modulo the span of the relation columns (r x c), which must have
/// finite index. `projection` maps Z^r onto the invariant-form quotient and
/// `section` lifts quotient generators back to Z^r.
struct PresentationQuotient {
  FinAbelianGroup group;
  IntMatrix projection;  // group.rank() x r
  IntMatrix section;     // r x group.rank()
};

PresentationQuotient quotient_of_presentation(const IntMatrix& relations);

struct SubgroupQuotient {
  std::vector<FinAbelianGroup::Element> subgroup_elements;  // sorted
  FinAbelianGroup subgroup;                                 // invariant form
  FinAbelianGroup quotient;                                 // invariant form
  AbHom projection;                                         // onto quotient
};

SubgroupQuotient subgroup_and_quotient(const FinAbelianGroup& a,
                                       std::span<const FinAbelianGroup::Element> gens);

/// Identifies an abelian group given by its addition table on 0..n-1 with
/// identity `zero`. Returns the invariant-form group and, for every table
/// element, the corresponding group element.
struct AbelianIdentification {
  FinAbelianGroup group;
  std::vector<FinAbelianGroup::Element> element_of;  // table index -> element
  std::vector<std::size_t> table_index_of;           // element -> table index
};

AbelianIdentification identify_abelian_table(const std::vector<std::vector<std::size_t>>& add,
                                             std::size_t zero);

}  // namespace nilspace

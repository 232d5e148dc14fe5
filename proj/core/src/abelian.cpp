#include "nilspace/abelian.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace nilspace {

__extension__ using Wide = __int128;

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, Int fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Int> IntMatrix::column(std::size_t c) const {
  std::vector<Int> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void IntMatrix::append_row(std::span<const Int> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("IntMatrix::append_row: width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

Int mod_floor(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Int aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = checked_add(c(i, j), checked_mul(aik, b(k, j)));
    }
  return c;
}

ExtendedGcd extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// ---------------------------------------------------------------------------
// Smith normal form engine

namespace {

// Arithmetic policy: exact integers with overflow checks.
struct IntegerArith {
  Int reduce(Int x) const { return x; }
  Int add(Int a, Int b) const { return checked_add(a, b); }
  Int mul(Int a, Int b) const { return checked_mul(a, b); }
  bool is_zero(Int x) const { return x == 0; }
  Int magnitude(Int x) const { return x < 0 ? -x : x; }
  bool divides(Int d, Int x) const { return x % d == 0; }
};

// Arithmetic policy: residues in [0, m).
struct ModularArith {
  Int m;
  Int reduce(Int x) const { return mod_floor(x, m); }
  Int add(Int a, Int b) const { return reduce(a + b); }
  Int mul(Int a, Int b) const {
    return static_cast<Int>(static_cast<Wide>(a) * b % m + m) % m;
  }
  bool is_zero(Int x) const { return reduce(x) == 0; }
  Int magnitude(Int x) const { return std::gcd(reduce(x), m); }
  bool divides(Int d, Int x) const { return reduce(x) % magnitude(d) == 0; }
};

template <class Arith>
class SmithEngine {
  Arith a_;
  bool track_u_, track_v_;

 public:
  SmithEngine(const IntMatrix& m, Arith arith, bool track_u, bool track_v)
      : a_(arith), track_u_(track_u), track_v_(track_v), s_(m) {
    for (std::size_t r = 0; r < s_.rows(); ++r)
      for (std::size_t c = 0; c < s_.cols(); ++c) s_(r, c) = a_.reduce(s_(r, c));
    if (track_u_) {
      u_ = IntMatrix::identity(s_.rows());
      u_inv_ = IntMatrix::identity(s_.rows());
    }
    if (track_v_) {
      v_ = IntMatrix::identity(s_.cols());
      v_inv_ = IntMatrix::identity(s_.cols());
    }
  }

  void run(bool enforce_divisibility) {
    const std::size_t n = std::min(s_.rows(), s_.cols());
    for (std::size_t t = 0; t < n; ++t) {
      if (!bring_pivot(t)) {
        rank_ = t;
        return;
      }
      for (;;) {
        clear_column(t);
        clear_row(t);
        if (!column_clean(t)) continue;
        if (enforce_divisibility) {
          if (auto bad = find_non_multiple(t)) {
            row_add(t, *bad, 1);
            continue;
          }
        }
        break;
      }
      if (s_(t, t) < 0) row_negate(t);
      rank_ = t + 1;
    }
  }

  IntMatrix s_, u_, u_inv_, v_, v_inv_;
  std::size_t rank_ = 0;

 private:
  bool bring_pivot(std::size_t t) {
    std::size_t best_r = 0, best_c = 0;
    Int best = 0;
    for (std::size_t r = t; r < s_.rows(); ++r)
      for (std::size_t c = t; c < s_.cols(); ++c) {
        Int x = s_(r, c);
        if (a_.is_zero(x)) continue;
        Int mag = a_.magnitude(x);
        if (best == 0 || mag < best) {
          best = mag;
          best_r = r;
          best_c = c;
        }
      }
    if (best == 0) return false;
    row_swap(t, best_r);
    col_swap(t, best_c);
    return true;
  }

  bool column_clean(std::size_t t) const {
    for (std::size_t r = t + 1; r < s_.rows(); ++r)
      if (!a_.is_zero(s_(r, t))) return false;
    return true;
  }

  std::optional<std::size_t> find_non_multiple(std::size_t t) const {
    Int d = s_(t, t);
    for (std::size_t r = t + 1; r < s_.rows(); ++r)
      for (std::size_t c = t + 1; c < s_.cols(); ++c)
        if (!a_.divides(d, s_(r, c))) return r;
    return std::nullopt;
  }

  void clear_column(std::size_t t) {
    for (std::size_t r = t + 1; r < s_.rows(); ++r) {
      Int b = s_(r, t);
      if (a_.is_zero(b)) continue;
      Int a = s_(t, t);
      if (b % a == 0) {
        row_combine(t, r, 1, 0, -(b / a), 1);
        continue;
      }
      auto [g, x, y] = extended_gcd(a, b);
      row_combine(t, r, x, y, -(b / g), a / g);
    }
  }

  void clear_row(std::size_t t) {
    for (std::size_t c = t + 1; c < s_.cols(); ++c) {
      Int b = s_(t, c);
      if (a_.is_zero(b)) continue;
      Int a = s_(t, t);
      if (b % a == 0) {
        col_combine(t, c, 1, 0, -(b / a), 1);
        continue;
      }
      auto [g, x, y] = extended_gcd(a, b);
      col_combine(t, c, x, y, -(b / g), a / g);
    }
  }

  // rows (i, j) <- [[p, q], [r, s]] * rows (i, j), with p*s - q*r == 1.
  void row_combine_in(IntMatrix& m, std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      Int mi = m(i, c), mj = m(j, c);
      m(i, c) = a_.add(a_.mul(p, mi), a_.mul(q, mj));
      m(j, c) = a_.add(a_.mul(r, mi), a_.mul(s, mj));
    }
  }
  // columns (i, j) <- columns (i, j) * [[p, r], [q, s]].
  void col_combine_in(IntMatrix& m, std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    for (std::size_t k = 0; k < m.rows(); ++k) {
      Int mi = m(k, i), mj = m(k, j);
      m(k, i) = a_.add(a_.mul(p, mi), a_.mul(q, mj));
      m(k, j) = a_.add(a_.mul(r, mi), a_.mul(s, mj));
    }
  }

  void row_combine(std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    row_combine_in(s_, i, j, p, q, r, s);
    if (track_u_) {
      row_combine_in(u_, i, j, p, q, r, s);
      // inverse of [[p,q],[r,s]] is [[s,-q],[-r,p]]; U^-1 <- U^-1 * E^-1
      col_combine_in(u_inv_, i, j, s, -r, -q, p);
    }
  }

  void col_combine(std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    col_combine_in(s_, i, j, p, q, r, s);
    if (track_v_) {
      col_combine_in(v_, i, j, p, q, r, s);
      row_combine_in(v_inv_, i, j, s, -r, -q, p);
    }
  }

  void row_add(std::size_t dst, std::size_t src, Int k) { row_combine(dst, src, 1, k, 0, 1); }

  void row_negate(std::size_t i) {
    for (std::size_t c = 0; c < s_.cols(); ++c) s_(i, c) = a_.reduce(-s_(i, c));
    if (track_u_) {
      for (std::size_t c = 0; c < u_.cols(); ++c) u_(i, c) = a_.reduce(-u_(i, c));
      for (std::size_t r = 0; r < u_inv_.rows(); ++r) u_inv_(r, i) = a_.reduce(-u_inv_(r, i));
    }
  }

  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_rows(s_, i, j);
    if (track_u_) {
      swap_rows(u_, i, j);
      swap_cols(u_inv_, i, j);
    }
  }

  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    swap_cols(s_, i, j);
    if (track_v_) {
      swap_cols(v_, i, j);
      swap_rows(v_inv_, i, j);
    }
  }

  static void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
  }
  static void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
  }
};

struct FullIntegerSmith {
  IntMatrix u, u_inv, s, v, v_inv;
  std::size_t rank;
};

FullIntegerSmith integer_smith_full(const IntMatrix& m) {
  SmithEngine<IntegerArith> engine(m, IntegerArith{}, true, true);
  engine.run(true);
  return {engine.u_, engine.u_inv_, engine.s_, engine.v_, engine.v_inv_, engine.rank_};
}

}  // namespace

std::vector<Int> SmithForm::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i) d.push_back(s(i, i));
  return d;
}

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  for (Int d : diagonal())
    if (d != 0) ++r;
  return r;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithEngine<IntegerArith> engine(m, IntegerArith{}, true, true);
  engine.run(true);
  return {engine.u_, engine.s_, engine.v_};
}

std::vector<Int> ModularSmithForm::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i) d.push_back(s(i, i));
  return d;
}

ModularSmithForm smith_normal_form_mod(const IntMatrix& m, Int modulus, ModularSmithOptions options) {
  if (modulus < 1) throw std::invalid_argument("smith_normal_form_mod: modulus must be >= 1");
  SmithEngine<ModularArith> engine(m, ModularArith{modulus}, options.track_u, options.track_v);
  engine.run(false);
  ModularSmithForm out;
  out.modulus = modulus;
  out.s = std::move(engine.s_);
  out.u = std::move(engine.u_);
  out.u_inverse = std::move(engine.u_inv_);
  out.v = std::move(engine.v_);
  out.v_inverse = std::move(engine.v_inv_);
  out.rank = engine.rank_;
  // Scale each diagonal entry by a unit so that it becomes gcd(d, m).
  ModularArith ar{modulus};
  for (std::size_t i = 0; i < std::min(out.s.rows(), out.s.cols()); ++i) {
    Int d = out.s(i, i);
    if (d == 0) continue;
    Int g = std::gcd(d, modulus);
    if (d == g) continue;
    Int mg = modulus / g;
    Int w = mod_floor(extended_gcd(d / g, mg).s, mg);
    while (std::gcd(w, modulus) != 1) w += mg;
    Int w_inv = mod_floor(extended_gcd(w, modulus).s, modulus);
    for (std::size_t c = 0; c < out.s.cols(); ++c) out.s(i, c) = ar.mul(out.s(i, c), w);
    if (options.track_u) {
      for (std::size_t c = 0; c < out.u.cols(); ++c) out.u(i, c) = ar.mul(out.u(i, c), w);
      for (std::size_t r = 0; r < out.u_inverse.rows(); ++r)
        out.u_inverse(r, i) = ar.mul(out.u_inverse(r, i), w_inv);
    }
  }
  for (std::size_t i = 0; i < std::min(out.s.rows(), out.s.cols()); ++i) out.s(i, i) %= modulus;
  return out;
}

// ---------------------------------------------------------------------------
// ModularRowReducer

ModularRowReducer::ModularRowReducer(std::size_t cols, Int modulus)
    : cols_(cols), modulus_(modulus), pivots_(cols) {
  if (modulus < 1) throw std::invalid_argument("ModularRowReducer: modulus must be >= 1");
}

void ModularRowReducer::add_sparse_row(std::span<const std::pair<std::size_t, Int>> entries) {
  std::vector<Int> row(cols_, 0);
  for (auto [c, v] : entries) row.at(c) = mod_floor(row.at(c) + v, modulus_);
  add_row(std::move(row));
}

void ModularRowReducer::add_row(std::vector<Int> row) {
  if (row.size() != cols_) throw std::invalid_argument("ModularRowReducer: width mismatch");
  const Int m = modulus_;
  ModularArith ar{m};
  for (auto& x : row) x = ar.reduce(x);
  std::size_t start = 0;
  for (;;) {
    std::size_t c = start;
    while (c < cols_ && row[c] == 0) ++c;
    if (c == cols_) return;
    start = c;
    auto& piv = pivots_[c];
    if (piv.empty()) {
      piv = std::move(row);
      return;
    }
    Int a = piv[c];
    Int b = row[c];
    if (b % a == 0) {
      Int q = b / a;
      for (std::size_t j = c; j < cols_; ++j) row[j] = ar.add(row[j], ar.mul(m - ar.reduce(q), piv[j]));
      continue;
    }
    auto [g, x, y] = extended_gcd(a, b);
    Int r = -(b / g), s = a / g;
    for (std::size_t j = c; j < cols_; ++j) {
      Int pj = piv[j], rj = row[j];
      piv[j] = ar.add(ar.mul(ar.reduce(x), pj), ar.mul(ar.reduce(y), rj));
      row[j] = ar.add(ar.mul(ar.reduce(r), pj), ar.mul(ar.reduce(s), rj));
    }
  }
}

IntMatrix ModularRowReducer::basis() const {
  IntMatrix out(0, cols_);
  for (const auto& p : pivots_)
    if (!p.empty()) out.append_row(p);
  return out;
}

// ---------------------------------------------------------------------------
// Kernels modulo m

ModularKernel kernel_mod(const IntMatrix& relations, Int modulus) {
  const std::size_t n = relations.cols();
  ModularKernel k;
  k.modulus = modulus;
  k.ambient_dim = n;
  if (modulus == 1) return k;
  IntMatrix rel = relations;
  if (rel.rows() == 0) rel = IntMatrix(1, n, 0);
  auto snf = smith_normal_form_mod(rel, modulus, {.track_u = false, .track_v = true});
  k.v_inverse = snf.v_inverse;
  for (std::size_t i = 0; i < n; ++i) {
    Int d = i < std::min(snf.s.rows(), snf.s.cols()) ? snf.s(i, i) : 0;
    Int g = d == 0 ? modulus : std::gcd(d, modulus);
    // solutions of d*y == 0 (mod m) are multiples of m/gcd(d,m); order gcd(d,m)
    Int order = d == 0 ? modulus : g;
    if (order == 1) continue;
    Int scale = modulus / order;
    std::vector<Int> gen(n);
    for (std::size_t r = 0; r < n; ++r) gen[r] = mod_floor(checked_mul(snf.v(r, i), scale), modulus);
    k.orders.push_back(order);
    k.generators.push_back(std::move(gen));
    k.positions.push_back(i);
    k.scales.push_back(scale);
  }
  return k;
}

ModularKernel kernel_mod(const ModularRowReducer& reducer) {
  return kernel_mod(reducer.basis(), reducer.modulus());
}

std::vector<Int> ModularKernel::coordinates(std::span<const Int> x) const {
  if (x.size() != ambient_dim) throw std::invalid_argument("ModularKernel::coordinates: size mismatch");
  std::vector<Int> out(generators.size(), 0);
  if (generators.empty()) return out;
  ModularArith ar{modulus};
  for (std::size_t g = 0; g < generators.size(); ++g) {
    std::size_t p = positions[g];
    Int y = 0;
    for (std::size_t j = 0; j < ambient_dim; ++j) y = ar.add(y, ar.mul(v_inverse(p, j), ar.reduce(x[j])));
    if (y % scales[g] != 0) throw std::invalid_argument("ModularKernel::coordinates: vector not in kernel");
    out[g] = (y / scales[g]) % orders[g];
  }
  return out;
}

// ---------------------------------------------------------------------------
// FinAbelianGroup

FinAbelianGroup::FinAbelianGroup(std::vector<Int> cyclic_orders) : orders_(std::move(cyclic_orders)) {
  order_ = 1;
  for (Int n : orders_) {
    if (n < 1) throw std::invalid_argument("FinAbelianGroup: cyclic orders must be >= 1");
    if (order_ * static_cast<std::uint64_t>(n) > kMaxOrder)
      throw std::invalid_argument("FinAbelianGroup: group order exceeds 2^31");
    order_ *= static_cast<std::uint64_t>(n);
  }
  strides_.assign(orders_.size(), 1);
  for (std::size_t j = orders_.size(); j-- > 1;)
    strides_[j - 1] = strides_[j] * static_cast<std::uint64_t>(orders_[j]);
}

FinAbelianGroup FinAbelianGroup::direct_product(const FinAbelianGroup& a, const FinAbelianGroup& b) {
  std::vector<Int> o = a.orders_;
  o.insert(o.end(), b.orders_.begin(), b.orders_.end());
  return FinAbelianGroup(std::move(o));
}

std::vector<Int> FinAbelianGroup::coordinates(Element e) const {
  if (e >= order_) throw std::out_of_range("FinAbelianGroup: element out of range");
  std::vector<Int> c(orders_.size());
  std::uint64_t rest = e;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    c[j] = static_cast<Int>(rest / strides_[j]);
    rest %= strides_[j];
  }
  return c;
}

FinAbelianGroup::Element FinAbelianGroup::element(std::span<const Int> coords) const {
  if (coords.size() != orders_.size()) throw std::invalid_argument("FinAbelianGroup: wrong tuple length");
  std::uint64_t e = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j)
    e += static_cast<std::uint64_t>(mod_floor(coords[j], orders_[j])) * strides_[j];
  return static_cast<Element>(e);
}

FinAbelianGroup::Element FinAbelianGroup::add(Element a, Element b) const {
  std::uint64_t e = 0, ra = a, rb = b;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    std::uint64_t ca = ra / strides_[j], cb = rb / strides_[j];
    ra %= strides_[j];
    rb %= strides_[j];
    e += ((ca + cb) % static_cast<std::uint64_t>(orders_[j])) * strides_[j];
  }
  return static_cast<Element>(e);
}

FinAbelianGroup::Element FinAbelianGroup::neg(Element a) const {
  std::uint64_t e = 0, ra = a;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    std::uint64_t ca = ra / strides_[j];
    ra %= strides_[j];
    auto n = static_cast<std::uint64_t>(orders_[j]);
    e += ((n - ca) % n) * strides_[j];
  }
  return static_cast<Element>(e);
}

FinAbelianGroup::Element FinAbelianGroup::multiple(Int k, Element a) const {
  auto c = coordinates(a);
  for (std::size_t j = 0; j < c.size(); ++j)
    c[j] = static_cast<Int>(static_cast<Wide>(c[j]) * mod_floor(k, orders_[j]) % orders_[j]);
  return element(c);
}

Int FinAbelianGroup::element_order(Element a) const {
  Int o = 1;
  auto c = coordinates(a);
  for (std::size_t j = 0; j < c.size(); ++j) {
    Int oj = orders_[j] / std::gcd(orders_[j], c[j]);
    o = std::lcm(o, oj);
  }
  return o;
}

std::vector<Int> FinAbelianGroup::invariant_factors() const {
  IntMatrix d(orders_.size(), orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) d(j, j) = orders_[j];
  std::vector<Int> out;
  for (Int x : smith_normal_form(d).diagonal())
    if (x != 1) out.push_back(x);
  return out;
}

bool FinAbelianGroup::is_invariant_form() const {
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    if (orders_[j] < 2) return false;
    if (j + 1 < orders_.size() && orders_[j + 1] % orders_[j] != 0) return false;
  }
  return true;
}

std::string format_invariant_factors(std::span<const Int> factors) {
  std::ostringstream os;
  bool first = true;
  for (Int f : factors) {
    if (f == 1) continue;
    if (!first) os << " x ";
    os << 'Z' << f;
    first = false;
  }
  if (first) return "0";
  return os.str();
}

std::string FinAbelianGroup::to_string() const {
  auto f = invariant_factors();
  return format_invariant_factors(f);
}

std::string FinAbelianGroup::element_label(Element e) const {
  auto c = coordinates(e);
  if (c.size() == 1) return std::to_string(c[0]);
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// AbHom

AbHom::AbHom(FinAbelianGroup source, FinAbelianGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank())
    throw std::invalid_argument("AbHom: matrix shape does not match groups");
  for (std::size_t c = 0; c < source_.rank(); ++c) {
    Int m = source_.cyclic_orders()[c];
    for (std::size_t r = 0; r < target_.rank(); ++r)
      if (mod_floor(checked_mul(m, matrix_(r, c)), target_.cyclic_orders()[r]) != 0)
        throw std::invalid_argument("AbHom: matrix is not well defined on the source group");
  }
}

FinAbelianGroup::Element AbHom::operator()(FinAbelianGroup::Element x) const {
  auto c = source_.coordinates(x);
  std::vector<Int> out(target_.rank(), 0);
  for (std::size_t r = 0; r < target_.rank(); ++r) {
    Int n = target_.cyclic_orders()[r];
    Int acc = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
      acc = mod_floor(acc + static_cast<Int>(static_cast<Wide>(mod_floor(matrix_(r, j), n)) * c[j] % n), n);
    out[r] = acc;
  }
  return target_.element(out);
}

AbHom AbHom::then(const AbHom& next) const {
  if (!(next.source_ == target_)) throw std::invalid_argument("AbHom::then: groups do not compose");
  return AbHom(source_, next.target_, next.matrix_ * matrix_);
}

bool AbHom::is_surjective() const {
  std::vector<FinAbelianGroup::Element> gens;
  for (std::size_t j = 0; j < source_.rank(); ++j) {
    std::vector<Int> e(source_.rank(), 0);
    e[j] = 1;
    gens.push_back((*this)(source_.element(e)));
  }
  return subgroup_and_quotient(target_, gens).quotient.order() == 1;
}

bool AbHom::is_injective() const { return kernel_elements().size() == 1; }

std::vector<FinAbelianGroup::Element> AbHom::kernel_elements() const {
  std::vector<FinAbelianGroup::Element> out;
  for (std::uint64_t x = 0; x < source_.order(); ++x)
    if ((*this)(static_cast<FinAbelianGroup::Element>(x)) == 0) out.push_back(static_cast<FinAbelianGroup::Element>(x));
  return out;
}

// ---------------------------------------------------------------------------
// Normalization and quotients

PresentationQuotient quotient_of_presentation(const IntMatrix& relations) {
  const std::size_t r = relations.rows();
  auto snf = integer_smith_full(relations);
  std::vector<Int> orders;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < r; ++i) {
    Int d = i < std::min(snf.s.rows(), snf.s.cols()) ? snf.s(i, i) : 0;
    if (d == 1) continue;
    if (d == 0) throw std::invalid_argument("presentation has infinite quotient");
    orders.push_back(d);
    keep.push_back(i);
  }
  PresentationQuotient q{FinAbelianGroup(orders), IntMatrix(keep.size(), r), IntMatrix(r, keep.size())};
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t j = 0; j < r; ++j) {
      q.projection(a, j) = mod_floor(snf.u(keep[a], j), orders[a]);
      q.section(j, a) = snf.u_inv(j, keep[a]);
    }
  }
  return q;
}

Normalization normalize(const FinAbelianGroup& a) {
  const std::size_t r = a.rank();
  IntMatrix rel(r, r);
  for (std::size_t j = 0; j < r; ++j) rel(j, j) = a.cyclic_orders()[j];
  auto q = quotient_of_presentation(rel);
  IntMatrix back = q.section;
  for (std::size_t i = 0; i < back.rows(); ++i)
    for (std::size_t j = 0; j < back.cols(); ++j) back(i, j) = mod_floor(back(i, j), a.cyclic_orders()[i]);
  AbHom to(a, q.group, q.projection);
  AbHom from(q.group, a, back);
  return {q.group, std::move(to), std::move(from)};
}

std::optional<ModularSolution> solve_modular(const IntLinearSystem& sys, std::span<const Int> rhs) {
  const std::size_t e = sys.coefficients.rows();
  const std::size_t r = sys.domain.rank();
  if (sys.coefficients.cols() != r && !(e == 0))
    throw std::invalid_argument("solve_modular: coefficient width must equal domain rank");
  if (sys.moduli.size() != e || rhs.size() != e)
    throw std::invalid_argument("solve_modular: moduli/rhs length must equal number of rows");
  for (std::size_t i = 0; i < e; ++i) {
    if (sys.moduli[i] < 1) throw std::invalid_argument("solve_modular: moduli must be >= 1");
    for (std::size_t j = 0; j < r; ++j)
      if (mod_floor(checked_mul(sys.coefficients(i, j), sys.domain.cyclic_orders()[j]), sys.moduli[i]) != 0)
        throw std::invalid_argument("solve_modular: congruence not well defined on the domain group");
  }
  ModularSolution sol;
  sol.particular.assign(r, 0);
  if (e == 0) {
    for (std::size_t j = 0; j < r; ++j) {
      std::vector<Int> g(r, 0);
      g[j] = 1;
      sol.kernel.push_back(std::move(g));
    }
    return sol;
  }
  // Integer unknowns (x, t) with C x + diag(m) t = b.
  IntMatrix m(e, r + e);
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t j = 0; j < r; ++j) m(i, j) = sys.coefficients(i, j);
    m(i, r + i) = sys.moduli[i];
  }
  auto snf = smith_normal_form(m);
  std::vector<Int> ub(e, 0);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t k = 0; k < e; ++k) ub[i] = checked_add(ub[i], checked_mul(snf.u(i, k), rhs[k]));
  const std::size_t n = r + e;
  std::vector<Int> y(n, 0);
  for (std::size_t i = 0; i < e; ++i) {
    Int d = i < n ? snf.s(i, i) : 0;
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % d != 0) return std::nullopt;
      y[i] = ub[i] / d;
    }
  }
  for (std::size_t j = 0; j < r; ++j) {
    Int acc = 0;
    for (std::size_t k = 0; k < n; ++k) acc = checked_add(acc, checked_mul(snf.v(j, k), y[k]));
    sol.particular[j] = mod_floor(acc, sys.domain.cyclic_orders()[j]);
  }
  const std::size_t rank = snf.rank();
  for (std::size_t k = rank; k < n; ++k) {
    std::vector<Int> g(r);
    bool nonzero = false;
    for (std::size_t j = 0; j < r; ++j) {
      g[j] = mod_floor(snf.v(j, k), sys.domain.cyclic_orders()[j]);
      nonzero = nonzero || g[j] != 0;
    }
    if (nonzero) sol.kernel.push_back(std::move(g));
  }
  return sol;
}

SubgroupQuotient subgroup_and_quotient(const FinAbelianGroup& a,
                                       std::span<const FinAbelianGroup::Element> gens) {
  for (auto g : gens)
    if (g >= a.order()) throw std::out_of_range("subgroup_and_quotient: element out of range");
  const std::size_t r = a.rank();
  const std::size_t ng = gens.size();

  // Quotient A/B = Z^r / (diag(orders) | gens).
  IntMatrix rel(r, r + ng);
  for (std::size_t j = 0; j < r; ++j) rel(j, j) = a.cyclic_orders()[j];
  for (std::size_t g = 0; g < ng; ++g) {
    auto c = a.coordinates(gens[g]);
    for (std::size_t j = 0; j < r; ++j) rel(j, r + g) = c[j];
  }
  auto q = quotient_of_presentation(rel);
  AbHom proj(a, q.group, q.projection);

  // Subgroup elements by closure.
  std::vector<char> seen(a.order(), 0);
  std::vector<FinAbelianGroup::Element> elems{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (auto g : gens) {
      auto s = a.add(elems[i], g);
      if (!seen[s]) {
        seen[s] = 1;
        elems.push_back(s);
      }
    }
  std::sort(elems.begin(), elems.end());

  // Abstract structure of B = Z^ng / K, K = {c : sum c_g gens_g == 0 in A}.
  FinAbelianGroup sub;
  if (ng > 0) {
    IntMatrix lift(r, ng + r);
    for (std::size_t g = 0; g < ng; ++g) {
      auto c = a.coordinates(gens[g]);
      for (std::size_t j = 0; j < r; ++j) lift(j, g) = c[j];
    }
    for (std::size_t j = 0; j < r; ++j) lift(j, ng + j) = -a.cyclic_orders()[j];
    auto snf = smith_normal_form(lift);
    std::size_t rank = snf.rank();
    IntMatrix kernel(ng, 0);
    for (std::size_t k = rank; k < ng + r; ++k) {
      std::vector<Int> col(ng);
      for (std::size_t g = 0; g < ng; ++g) col[g] = snf.v(g, k);
      IntMatrix t = kernel.transpose();
      t.append_row(col);
      kernel = t.transpose();
    }
    if (kernel.cols() == 0) kernel = IntMatrix(ng, 1, 0);
    sub = quotient_of_presentation(kernel).group;
  }
  if (sub.order() != elems.size()) throw std::logic_error("subgroup_and_quotient: inconsistent subgroup order");
  return {std::move(elems), std::move(sub), q.group, std::move(proj)};
}

AbelianIdentification identify_abelian_table(const std::vector<std::vector<std::size_t>>& add,
                                             std::size_t zero) {
  const std::size_t n = add.size();
  for (const auto& row : add)
    if (row.size() != n) throw std::invalid_argument("identify_abelian_table: table not square");
  // Greedy generators with coordinates relative to them.
  std::vector<std::size_t> gens;
  std::vector<std::vector<Int>> coords(n);  // coordinates w.r.t. gens, empty = not yet spanned
  coords[zero] = {};
  std::vector<char> spanned(n, 0);
  spanned[zero] = 1;
  std::vector<std::size_t> span_list{zero};
  std::vector<std::vector<Int>> relations;  // each of length gens.size() at the end
  for (std::size_t cand = 0; cand < n; ++cand) {
    if (spanned[cand]) continue;
    std::size_t gi = gens.size();
    gens.push_back(cand);
    for (std::size_t s : span_list) coords[s].resize(gi + 1, 0);
    for (auto& rel : relations) rel.push_back(0);
    // Smallest t with t*cand in the current span.
    std::size_t mult = cand;
    Int t = 1;
    while (!spanned[mult]) {
      mult = add[mult][cand];
      ++t;
    }
    std::vector<Int> rel(gi + 1, 0);
    for (std::size_t j = 0; j < gi; ++j) rel[j] = -coords[mult][j];
    rel[gi] = t;
    relations.push_back(rel);
    // Extend the span by multiples 1..t-1 of cand.
    std::vector<std::size_t> new_elems;
    for (std::size_t s : span_list) {
      std::size_t cur = s;
      for (Int j = 1; j < t; ++j) {
        cur = add[cur][cand];
        if (spanned[cur]) throw std::invalid_argument("identify_abelian_table: table is not an abelian group");
        spanned[cur] = 1;
        coords[cur] = coords[s];
        coords[cur][gi] = j;
        new_elems.push_back(cur);
      }
    }
    span_list.insert(span_list.end(), new_elems.begin(), new_elems.end());
  }
  const std::size_t r = gens.size();
  IntMatrix rel(r, std::max<std::size_t>(r, 1), 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) rel(j, i) = relations[i][j];
  AbelianIdentification id;
  if (r == 0) {
    id.group = FinAbelianGroup();
    id.element_of.assign(n, 0);
    id.table_index_of.assign(1, zero);
    return id;
  }
  auto q = quotient_of_presentation(rel);
  id.group = q.group;
  if (id.group.order() != n) throw std::invalid_argument("identify_abelian_table: table is not an abelian group");
  id.element_of.resize(n);
  id.table_index_of.assign(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<Int> img(id.group.rank(), 0);
    for (std::size_t a = 0; a < id.group.rank(); ++a) {
      Int acc = 0;
      for (std::size_t j = 0; j < r; ++j) acc = checked_add(acc, checked_mul(q.projection(a, j), coords[x][j]));
      img[a] = acc;
    }
    auto e = id.group.element(img);
    id.element_of[x] = e;
    if (id.table_index_of[e] != n) throw std::invalid_argument("identify_abelian_table: table is not an abelian group");
    id.table_index_of[e] = x;
  }
  return id;
}

}  // namespace nilspace

#include "nilspace/cube.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace nilspace {

namespace {

std::atomic<int> g_dimension_cap{kDefaultDimensionCap};

void check_dim(int n, const char* what) {
  if (n < 0 || n > dimension_cap())
    throw std::out_of_range(std::string(what) + ": dimension " + std::to_string(n) +
                            " outside 0.." + std::to_string(dimension_cap()));
}

int cube_dimension_of(std::size_t vertices) {
  if (vertices == 0 || (vertices & (vertices - 1)) != 0)
    throw std::invalid_argument("cube size must be a power of two");
  return __builtin_ctzll(vertices);
}

}  // namespace

int dimension_cap() { return g_dimension_cap.load(); }

void set_dimension_cap(int cap) {
  if (cap < 0 || cap > 20) throw std::invalid_argument("dimension cap must lie in 0..20");
  g_dimension_cap.store(cap);
}

std::string vertex_string(Vertex v, int n) {
  std::string s;
  for (int j = 0; j < n; ++j) s.push_back(((v >> j) & 1U) ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------

CubeMorphism::CubeMorphism(int source_dim, std::vector<CoordSymbol> coords)
    : source_dim_(source_dim), coords_(std::move(coords)) {
  for (const auto& c : coords_)
    if ((c.kind == CoordKind::Var || c.kind == CoordKind::NegVar) && c.var >= source_dim_)
      throw std::invalid_argument("CubeMorphism: variable index out of range");
}

CubeMorphism CubeMorphism::identity(int n) {
  std::vector<CoordSymbol> c(n);
  for (int j = 0; j < n; ++j) c[j] = {CoordKind::Var, static_cast<std::uint8_t>(j)};
  return CubeMorphism(n, std::move(c));
}

Vertex CubeMorphism::operator()(Vertex v) const {
  Vertex out = 0;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    const auto& c = coords_[j];
    Vertex bit = 0;
    switch (c.kind) {
      case CoordKind::Zero: bit = 0; break;
      case CoordKind::One: bit = 1; break;
      case CoordKind::Var: bit = (v >> c.var) & 1U; break;
      case CoordKind::NegVar: bit = ((v >> c.var) & 1U) ^ 1U; break;
    }
    out |= bit << j;
  }
  return out;
}

CubeMorphism CubeMorphism::then(const CubeMorphism& other) const {
  if (other.source_dim_ != target_dim()) throw std::invalid_argument("CubeMorphism::then: dimension mismatch");
  std::vector<CoordSymbol> out(other.coords_.size());
  for (std::size_t j = 0; j < other.coords_.size(); ++j) {
    const auto& c = other.coords_[j];
    if (c.kind == CoordKind::Zero || c.kind == CoordKind::One) {
      out[j] = c;
      continue;
    }
    CoordSymbol inner = coords_[c.var];
    if (c.kind == CoordKind::NegVar) {
      switch (inner.kind) {
        case CoordKind::Zero: inner.kind = CoordKind::One; break;
        case CoordKind::One: inner.kind = CoordKind::Zero; break;
        case CoordKind::Var: inner.kind = CoordKind::NegVar; break;
        case CoordKind::NegVar: inner.kind = CoordKind::Var; break;
      }
    }
    out[j] = inner;
  }
  return CubeMorphism(source_dim_, std::move(out));
}

std::vector<Vertex> CubeMorphism::table() const {
  std::vector<Vertex> t(vertex_count(source_dim_));
  for (Vertex v = 0; v < t.size(); ++v) t[v] = (*this)(v);
  return t;
}

std::string CubeMorphism::to_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (j) s += ",";
    const auto& c = coords_[j];
    switch (c.kind) {
      case CoordKind::Zero: s += "0"; break;
      case CoordKind::One: s += "1"; break;
      case CoordKind::Var: s += "x" + std::to_string(c.var + 1); break;
      case CoordKind::NegVar: s += "1-x" + std::to_string(c.var + 1); break;
    }
  }
  return s + ")";
}

std::vector<CubeMorphism> enumerate_cube_morphisms(int n, int m) {
  check_dim(n, "enumerate_cube_morphisms");
  check_dim(m, "enumerate_cube_morphisms");
  std::vector<CoordSymbol> alphabet{{CoordKind::Zero, 0}, {CoordKind::One, 0}};
  for (int j = 0; j < n; ++j) {
    alphabet.push_back({CoordKind::Var, static_cast<std::uint8_t>(j)});
    alphabet.push_back({CoordKind::NegVar, static_cast<std::uint8_t>(j)});
  }
  std::vector<CubeMorphism> out;
  std::vector<std::size_t> digits(m, 0);
  for (;;) {
    std::vector<CoordSymbol> c(m);
    for (int j = 0; j < m; ++j) c[j] = alphabet[digits[j]];
    out.emplace_back(n, std::move(c));
    int j = m - 1;
    while (j >= 0 && ++digits[j] == alphabet.size()) digits[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

std::vector<Vertex> gray_sequence(int n) {
  std::vector<Vertex> seq(vertex_count(n));
  for (Vertex p = 0; p < seq.size(); ++p) seq[p] = p ^ (p >> 1);
  return seq;
}

std::vector<std::uint32_t> gray_order(int n) {
  if (n < 1) throw std::invalid_argument("gray_order: n must be >= 1");
  auto seq = gray_sequence(n);
  std::vector<std::uint32_t> g(seq.size());
  for (std::uint32_t p = 0; p < seq.size(); ++p) g[seq[p]] = p + 1;
  return g;
}

// ---------------------------------------------------------------------------

FaceDescriptor make_face(int n, Vertex fixed_mask, Vertex fixed_bits) {
  if ((fixed_bits & ~fixed_mask) != 0 || (fixed_mask & ~full_vertex(n)) != 0)
    throw std::invalid_argument("make_face: inconsistent fixed coordinates");
  FaceDescriptor f;
  f.ambient_dim = n;
  f.fixed_mask = fixed_mask;
  f.fixed_bits = fixed_bits;
  for (int j = 0; j < n; ++j)
    if (!((fixed_mask >> j) & 1U)) f.free_coords.push_back(j);
  return f;
}

Vertex FaceDescriptor::vertex(Vertex local) const {
  Vertex v = fixed_bits;
  for (std::size_t t = 0; t < free_coords.size(); ++t) v |= ((local >> t) & 1U) << free_coords[t];
  return v;
}

std::vector<Vertex> FaceDescriptor::vertices() const {
  std::vector<Vertex> out(vertex_count(dim()));
  for (Vertex l = 0; l < out.size(); ++l) out[l] = vertex(l);
  return out;
}

CubeMorphism FaceDescriptor::as_morphism() const {
  std::vector<CoordSymbol> c(ambient_dim);
  std::size_t t = 0;
  for (int j = 0; j < ambient_dim; ++j) {
    if ((fixed_mask >> j) & 1U)
      c[j] = {((fixed_bits >> j) & 1U) ? CoordKind::One : CoordKind::Zero, 0};
    else
      c[j] = {CoordKind::Var, static_cast<std::uint8_t>(t++)};
  }
  return CubeMorphism(dim(), std::move(c));
}

std::string FaceDescriptor::to_string() const {
  std::string s;
  for (int j = 0; j < ambient_dim; ++j) {
    if (!((fixed_mask >> j) & 1U))
      s.push_back('*');
    else
      s.push_back(((fixed_bits >> j) & 1U) ? '1' : '0');
  }
  return s;
}

std::vector<FaceDescriptor> faces(int n, int codim) {
  check_dim(n, "faces");
  if (codim < 0 || codim > n) throw std::invalid_argument("faces: codimension out of range");
  std::vector<FaceDescriptor> out;
  for (Vertex mask = 0; mask <= full_vertex(n); ++mask) {
    if (weight_of(mask) != codim) continue;
    // all assignments of the fixed coordinates, as submasks of mask
    Vertex bits = 0;
    for (;;) {
      out.push_back(make_face(n, mask, bits));
      if (bits == mask) break;
      bits = (bits - mask) & mask;
    }
  }
  return out;
}

std::pair<FaceDescriptor, FaceDescriptor> opposite_faces(int n, int axis) {
  if (axis < 0 || axis >= n) throw std::invalid_argument("opposite_faces: axis out of range");
  Vertex m = Vertex{1} << axis;
  return {make_face(n, m, 0), make_face(n, m, m)};
}

// ---------------------------------------------------------------------------

Vertex CubeAutomorphism::operator()(Vertex v) const {
  Vertex out = 0;
  for (std::size_t j = 0; j < perm.size(); ++j) out |= ((v >> perm[j]) & 1U) << j;
  return out ^ flips;
}

CubeAutomorphism CubeAutomorphism::then(const CubeAutomorphism& other) const {
  // other(this(v))_j = this(v)_{p'[j]} ^ f'_j = v_{p[p'[j]]} ^ f_{p'[j]} ^ f'_j
  CubeAutomorphism r;
  r.perm.resize(perm.size());
  r.flips = other.flips;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    r.perm[j] = perm[other.perm[j]];
    r.flips ^= ((flips >> other.perm[j]) & 1U) << j;
  }
  return r;
}

CubeMorphism CubeAutomorphism::as_morphism() const {
  std::vector<CoordSymbol> c(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j)
    c[j] = {((flips >> j) & 1U) ? CoordKind::NegVar : CoordKind::Var, static_cast<std::uint8_t>(perm[j])};
  return CubeMorphism(dim(), std::move(c));
}

std::vector<CubeAutomorphism> automorphisms(int n) {
  check_dim(n, "automorphisms");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<CubeAutomorphism> out;
  do {
    for (Vertex f = 0; f <= full_vertex(n); ++f) out.push_back({p, f});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::optional<CubeMorphism> morphism_from_table(std::span<const Vertex> images, int n) {
  const int m = cube_dimension_of(images.size());
  std::vector<CoordSymbol> coords(n);
  for (int j = 0; j < n; ++j) {
    auto bit = [&](Vertex u) { return (images[u] >> j) & 1U; };
    std::optional<CoordSymbol> found;
    bool all0 = true, all1 = true;
    for (Vertex u = 0; u < images.size(); ++u) {
      all0 = all0 && bit(u) == 0;
      all1 = all1 && bit(u) == 1;
    }
    if (all0) found = CoordSymbol{CoordKind::Zero, 0};
    else if (all1) found = CoordSymbol{CoordKind::One, 0};
    for (int i = 0; i < m && !found; ++i) {
      bool same = true, opposite = true;
      for (Vertex u = 0; u < images.size(); ++u) {
        Vertex ui = (u >> i) & 1U;
        same = same && bit(u) == ui;
        opposite = opposite && bit(u) != ui;
      }
      if (same) found = CoordSymbol{CoordKind::Var, static_cast<std::uint8_t>(i)};
      else if (opposite) found = CoordSymbol{CoordKind::NegVar, static_cast<std::uint8_t>(i)};
    }
    if (!found) return std::nullopt;
    coords[j] = *found;
  }
  return CubeMorphism(m, std::move(coords));
}

const std::vector<std::vector<Vertex>>& face_vertex_lists(int n, int d) {
  constexpr int kMax = 21;
  static std::array<std::once_flag, kMax> once;
  static std::array<std::vector<std::vector<std::vector<Vertex>>>, kMax> cache;
  if (n < 0 || n >= kMax || d < 0 || d > n) throw std::out_of_range("face_vertex_lists: bad dimensions");
  std::call_once(once[n], [n] {
    auto& per_dim = cache[n];
    per_dim.resize(n + 1);
    for (int dd = 0; dd <= n; ++dd)
      for (const auto& f : faces(n, n - dd)) per_dim[dd].push_back(f.vertices());
  });
  return cache[n][d];
}

std::vector<CubeAutomorphism> automorphism_generators(int n) {
  std::vector<CubeAutomorphism> out;
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  if (n >= 1) out.push_back({id, 1});
  for (int j = 0; j + 1 < n; ++j) {
    auto p = id;
    std::swap(p[j], p[j + 1]);
    out.push_back({p, 0});
  }
  return out;
}

}  // namespace nilspace

#include "nilspace/cohomology.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nilspace/budget.hpp"

namespace nilspace {

using Element = FinAbelianGroup::Element;

// ---------------------------------------------------------------------------
// Cocycle values

Element Cocycle::operator()(std::span<const Point> cube) const {
  auto idx = cubes->index_of(cube);
  if (!idx) throw std::invalid_argument("cocycle evaluated on non-cube " + base.format_cube(cube));
  return values[*idx];
}

namespace {

void require_compatible(const Cocycle& a, const Cocycle& b) {
  if (a.degree != b.degree || !(a.group == b.group) || a.values.size() != b.values.size())
    throw std::invalid_argument("cocycles live on different cube sets or groups");
  if (a.cubes != b.cubes && *a.cubes != *b.cubes) throw std::invalid_argument("cocycles use different cube tables");
}

}  // namespace

Cocycle Cocycle::operator+(const Cocycle& other) const {
  require_compatible(*this, other);
  Cocycle out = *this;
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = group.add(values[i], other.values[i]);
  return out;
}

Cocycle Cocycle::operator-(const Cocycle& other) const {
  require_compatible(*this, other);
  Cocycle out = *this;
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = group.sub(values[i], other.values[i]);
  return out;
}

Cocycle Cocycle::scaled(Int k) const {
  Cocycle out = *this;
  for (auto& v : out.values) v = group.multiple(k, v);
  return out;
}

bool Cocycle::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](Element e) { return e == 0; });
}

std::shared_ptr<const CubeSet> shared_cubes(const Cubespace& n, int dim) {
  return std::make_shared<const CubeSet>(enumerate_cubes(n, dim));
}

Cocycle zero_cocycle(const Cubespace& n, int degree, const FinAbelianGroup& a, std::shared_ptr<const CubeSet> cubes) {
  if (degree < -1) throw std::invalid_argument("cocycle degree must be >= -1");
  if (!cubes) cubes = shared_cubes(n, degree + 1);
  Cocycle rho{n, degree, a, cubes, std::vector<Element>(cubes->size(), 0)};
  return rho;
}

Cocycle point_function(const Cubespace& n, const FinAbelianGroup& a, std::vector<Element> values) {
  if (values.size() != n.size()) throw std::invalid_argument("point_function: wrong number of values");
  Cocycle rho = zero_cocycle(n, -1, a);
  for (std::size_t i = 0; i < rho.cubes->size(); ++i) rho.values[i] = values[(*rho.cubes)[i][0]];
  return rho;
}

// ---------------------------------------------------------------------------
// Files

std::string format_group_spec(const FinAbelianGroup& a) {
  if (a.rank() == 0) return "0";
  std::string s;
  for (std::size_t j = 0; j < a.rank(); ++j) s += (j ? "x" : "") + std::string("Z") + std::to_string(a.cyclic_orders()[j]);
  return s;
}

FinAbelianGroup parse_group_spec(const std::string& spec) {
  if (spec == "0") return FinAbelianGroup(std::vector<Int>{});
  std::vector<Int> orders;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.size() < 2 || part[0] != 'Z' || part.find_first_not_of("0123456789", 1) != std::string::npos)
      throw std::invalid_argument("bad group spec '" + spec + "'");
    orders.push_back(std::stoll(part.substr(1)));
  }
  if (orders.empty()) throw std::invalid_argument("bad group spec '" + spec + "'");
  return FinAbelianGroup(orders);
}

std::string format_cocycle(const Cocycle& rho, const std::string& space_name) {
  std::string out = "cocycle " + std::to_string(rho.degree) + " " + space_name + " " + format_group_spec(rho.group) + "\n";
  for (std::size_t i = 0; i < rho.values.size(); ++i)
    out += std::to_string(i) + " " + rho.group.element_label(rho.values[i]) + "\n";
  return out;
}

namespace {

Element parse_element(const FinAbelianGroup& a, std::string text, const std::string& where) {
  std::vector<Int> coords;
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw std::invalid_argument(where + ": malformed value '" + text + "'");
    std::stringstream ss(text.substr(1, text.size() - 2));
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(std::stoll(part));
  } else {
    coords.push_back(std::stoll(text));
  }
  if (coords.size() != a.rank()) throw std::invalid_argument(where + ": value '" + text + "' has wrong arity");
  for (std::size_t j = 0; j < coords.size(); ++j)
    if (coords[j] < 0 || coords[j] >= a.cyclic_orders()[j])
      throw std::invalid_argument(where + ": value '" + text + "' out of range");
  return a.element(coords);
}

}  // namespace

Cocycle parse_cocycle(std::istream& in, const Cubespace& base, std::string* space_name, const std::string& source) {
  std::string line;
  int lineno = 0;
  auto where = [&] { return source + ":" + std::to_string(lineno); };
  if (!std::getline(in, line)) throw std::invalid_argument(source + ": empty cocycle file");
  ++lineno;
  std::stringstream header(line);
  std::string word, name, spec;
  int degree = 0;
  if (!(header >> word >> degree >> name >> spec) || word != "cocycle")
    throw std::invalid_argument(where() + ": expected 'cocycle <degree> <space> <group>'");
  if (space_name) *space_name = name;
  Cocycle rho = zero_cocycle(base, degree, parse_group_spec(spec));
  std::vector<bool> seen(rho.size(), false);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::size_t idx = 0;
    std::string value, extra;
    if (!(ss >> idx >> value) || (ss >> extra)) throw std::invalid_argument(where() + ": expected '<index> <value>'");
    if (idx >= rho.size()) throw std::invalid_argument(where() + ": cube index " + std::to_string(idx) + " out of range");
    if (seen[idx]) throw std::invalid_argument(where() + ": cube index " + std::to_string(idx) + " repeated");
    seen[idx] = true;
    rho.values[idx] = parse_element(rho.group, value, where());
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument(source + ": missing values for some cubes");
  return rho;
}

// ---------------------------------------------------------------------------
// Axioms

namespace {

// Adjacent pairs along `axis`: (i, j, k) with cube k the concatenation of i and j.
template <class Visit>
void for_each_concatenation(const CubeSet& cubes, int axis, Visit&& visit) {
  const int n = cubes.dim();
  const Vertex bit = Vertex{1} << axis;
  std::map<Cube, std::vector<std::size_t>> by_bottom;
  Cube face;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    face.clear();
    auto c = cubes[i];
    for (Vertex v = 0; v < vertex_count(n); ++v)
      if (!(v & bit)) face.push_back(c[v]);
    by_bottom[face].push_back(i);
  }
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    face.clear();
    auto c1 = cubes[i];
    for (Vertex v = 0; v < vertex_count(n); ++v)
      if (v & bit) face.push_back(c1[v]);
    auto it = by_bottom.find(face);
    if (it == by_bottom.end()) continue;
    for (std::size_t j : it->second) {
      charge_nodes();
      Cube c3 = concatenate(c1, cubes[j], axis);
      auto k = cubes.index_of(c3);
      visit(i, j, k);
    }
  }
}

}  // namespace

CocycleCheck check_cocycle_axioms(const Cocycle& rho) {
  CocycleCheck out;
  const CubeSet& cubes = *rho.cubes;
  const int n = rho.cube_dim();
  if (rho.values.size() != cubes.size()) return {false, "value table does not match the cube table"};
  if (n == 0) return out;
  const auto& a = rho.group;
  const auto autos = automorphisms(n);
  Cube img(vertex_count(n));
  for (std::size_t i = 0; i < cubes.size() && out.ok; ++i) {
    auto c = cubes[i];
    for (const auto& s : autos) {
      charge_nodes();
      for (Vertex v = 0; v < img.size(); ++v) img[v] = c[s(v)];
      auto j = cubes.index_of(img);
      Element expect = s.sign() > 0 ? rho.values[i] : a.neg(rho.values[i]);
      if (!j) return {false, "cube table not closed under automorphisms at " + rho.base.format_cube(c)};
      if (rho.values[*j] != expect) {
        return {false, "rho(" + rho.base.format_cube(img) + ") = " + a.element_label(rho.values[*j]) +
                           " but the sign rule requires " + a.element_label(expect)};
      }
    }
  }
  for (int axis = 0; axis < n && out.ok; ++axis) {
    for_each_concatenation(cubes, axis, [&](std::size_t i, std::size_t j, std::optional<std::size_t> k) {
      if (!out.ok) return;
      if (!k) {
        out = {false, "concatenation of " + rho.base.format_cube(cubes[i]) + " and " + rho.base.format_cube(cubes[j]) +
                          " is not a cube"};
        return;
      }
      if (rho.values[*k] != a.add(rho.values[i], rho.values[j])) {
        out = {false, "rho(" + rho.base.format_cube(cubes[*k]) + ") differs from rho(" +
                          rho.base.format_cube(cubes[i]) + ") + rho(" + rho.base.format_cube(cubes[j]) +
                          ") along axis " + std::to_string(axis + 1)};
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Y_d(N, A)

std::uint64_t CocycleSpace::order() const {
  std::uint64_t o = 1;
  for (Int x : orders) o *= static_cast<std::uint64_t>(x);
  return o;
}

std::vector<Int> CocycleSpace::coordinates(const Cocycle& rho) const {
  if (rho.values.size() != orbit_of.size() || !(rho.group == group) || rho.degree != degree)
    throw std::invalid_argument("CocycleSpace::coordinates: cocycle of another shape");
  std::vector<Int> out;
  for (std::size_t j = 0; j < group.rank(); ++j) {
    const Int m = group.cyclic_orders()[j];
    std::vector<Int> x(orbit_rep.size());
    for (std::size_t r = 0; r < orbit_rep.size(); ++r) x[r] = group.coordinates(rho.values[orbit_rep[r]])[j];
    for (std::size_t u = 0; u < orbit_of.size(); ++u) {
      Int val = group.coordinates(rho.values[u])[j];
      if (mod_floor(val - sign_of[u] * x[orbit_of[u]], m) != 0)
        throw std::invalid_argument("CocycleSpace::coordinates: sign rule fails");
    }
    auto c = kernels[j].coordinates(x);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

Cocycle CocycleSpace::element(std::span<const Int> coords) const {
  if (coords.size() != generators.size()) throw std::invalid_argument("CocycleSpace::element: wrong arity");
  Cocycle out = zero_cocycle(base, degree, group, cubes);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (mod_floor(coords[i], orders[i]) != 0) out = out + generators[i].scaled(coords[i]);
  return out;
}

CocycleSpace cocycle_space(const Cubespace& n, int degree, const FinAbelianGroup& a) {
  if (degree < -1) throw std::invalid_argument("cocycle_space: degree must be >= -1");
  CocycleSpace y;
  y.base = n;
  y.degree = degree;
  y.group = a;
  y.cubes = shared_cubes(n, degree + 1);
  const CubeSet& cubes = *y.cubes;
  const int dim = degree + 1;
  const std::size_t count = cubes.size();

  // signed union-find over automorphism generators
  std::vector<std::size_t> parent(count);
  std::vector<std::int8_t> sign(count, 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<bool> torsion2(count, false);
  auto find = [&](std::size_t u) {
    std::int8_t s = 1;
    std::size_t r = u;
    while (parent[r] != r) {
      s = static_cast<std::int8_t>(s * sign[r]);
      r = parent[r];
    }
    // path compression
    std::int8_t s2 = s;
    while (parent[u] != u) {
      std::size_t next = parent[u];
      std::int8_t su = sign[u];
      parent[u] = r;
      sign[u] = s2;
      s2 = static_cast<std::int8_t>(s2 * su);
      u = next;
    }
    return std::pair{r, s};
  };
  Cube img(vertex_count(dim));
  for (const auto& g : automorphism_generators(dim)) {
    for (std::size_t u = 0; u < count; ++u) {
      charge_nodes();
      auto c = cubes[u];
      for (Vertex v = 0; v < img.size(); ++v) img[v] = c[g(v)];
      auto w = cubes.index_of(img);
      if (!w) throw std::logic_error("cocycle_space: cube set not closed under automorphisms");
      // x_w = s(g) x_u
      auto [ru, su] = find(u);
      auto [rw, sw] = find(*w);
      const int rel = g.sign() * su * sw;  // x_rw = rel x_ru
      if (ru == rw) {
        if (rel < 0) torsion2[ru] = true;
        continue;
      }
      if (ru < rw) {
        parent[rw] = ru;
        sign[rw] = static_cast<std::int8_t>(rel);
        if (torsion2[rw]) torsion2[ru] = true;
      } else {
        parent[ru] = rw;
        sign[ru] = static_cast<std::int8_t>(rel);
        if (torsion2[ru]) torsion2[rw] = true;
      }
    }
  }
  y.orbit_of.assign(count, 0);
  y.sign_of.assign(count, 1);
  std::vector<std::int64_t> var_of_root(count, -1);
  for (std::size_t u = 0; u < count; ++u) {
    auto [r, s] = find(u);
    if (var_of_root[r] < 0) {
      var_of_root[r] = static_cast<std::int64_t>(y.orbit_rep.size());
      y.orbit_rep.push_back(r);
    }
    y.orbit_of[u] = static_cast<std::uint32_t>(var_of_root[r]);
    y.sign_of[u] = s;
  }
  const std::size_t vars = y.orbit_rep.size();

  std::vector<std::vector<std::pair<std::size_t, Int>>> rows;
  for (std::size_t u = 0; u < count; ++u)
    if (parent[u] == u && torsion2[u]) rows.push_back({{y.orbit_of[u], 2}});
  if (dim >= 1) {
    for_each_concatenation(cubes, dim - 1, [&](std::size_t i, std::size_t j, std::optional<std::size_t> k) {
      if (!k) throw std::logic_error("cocycle_space: concatenation of cubes is not a cube");
      rows.push_back({{y.orbit_of[*k], y.sign_of[*k]}, {y.orbit_of[i], -y.sign_of[i]}, {y.orbit_of[j], -y.sign_of[j]}});
    });
  }
  y.relation_count = rows.size();

  for (std::size_t j = 0; j < a.rank(); ++j) {
    const Int m = a.cyclic_orders()[j];
    ModularRowReducer red(vars, m);
    for (const auto& r : rows) red.add_sparse_row(r);
    y.kernels.push_back(kernel_mod(red));
    const auto& ker = y.kernels.back();
    for (std::size_t g = 0; g < ker.generators.size(); ++g) {
      Cocycle rho = zero_cocycle(n, degree, a, y.cubes);
      std::vector<Int> coords(a.rank(), 0);
      for (std::size_t u = 0; u < count; ++u) {
        coords[j] = mod_floor(y.sign_of[u] * ker.generators[g][y.orbit_of[u]], m);
        rho.values[u] = a.element(coords);
      }
      y.generators.push_back(std::move(rho));
      y.orders.push_back(ker.orders[g]);
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Boundaries

Cocycle boundary(const Cocycle& rho) {
  if (auto chk = check_cocycle_axioms(rho); !chk.ok) throw std::invalid_argument("boundary: input is not a cocycle: " + chk.witness);
  const int n = rho.cube_dim() + 1;
  Cocycle out = zero_cocycle(rho.base, rho.degree + 1, rho.group);
  const Vertex top = Vertex{1} << (n - 1);
  Cube c0(vertex_count(n - 1)), c1(vertex_count(n - 1));
  for (std::size_t i = 0; i < out.cubes->size(); ++i) {
    auto c = (*out.cubes)[i];
    for (Vertex v = 0; v < c0.size(); ++v) {
      c0[v] = c[v];
      c1[v] = c[v | top];
    }
    out.values[i] = rho.group.sub(rho(c0), rho(c1));
  }
  if (auto chk = check_cocycle_axioms(out); !chk.ok)
    throw std::logic_error("boundary: result violates the cocycle axioms: " + chk.witness);
  return out;
}

Cocycle coboundary_of(const Cubespace& n, int degree, const FinAbelianGroup& a, std::span<const Element> g,
                      std::shared_ptr<const CubeSet> cubes) {
  if (g.size() != n.size()) throw std::invalid_argument("coboundary_of: function has wrong length");
  Cocycle out = zero_cocycle(n, degree, a, std::move(cubes));
  for (std::size_t i = 0; i < out.cubes->size(); ++i) {
    auto c = (*out.cubes)[i];
    Element s = 0;
    for (Vertex v = 0; v < c.size(); ++v) s = weight_of(v) % 2 == 0 ? a.add(s, g[c[v]]) : a.sub(s, g[c[v]]);
    out.values[i] = s;
  }
  return out;
}

std::optional<std::vector<Element>> is_coboundary(const Cocycle& rho) {
  const auto& a = rho.group;
  const std::size_t np = rho.base.size();
  std::vector<std::vector<Int>> g_coords(np, std::vector<Int>(a.rank(), 0));
  for (std::size_t j = 0; j < a.rank(); ++j) {
    const Int m = a.cyclic_orders()[j];
    // kernel of [M | -b]; a solution needs last coordinate 1
    ModularRowReducer red(np + 1, m);
    std::vector<Int> row(np + 1);
    for (std::size_t i = 0; i < rho.cubes->size(); ++i) {
      charge_nodes();
      std::fill(row.begin(), row.end(), 0);
      auto c = (*rho.cubes)[i];
      for (Vertex v = 0; v < c.size(); ++v) row[c[v]] += weight_of(v) % 2 == 0 ? 1 : -1;
      row[np] = -a.coordinates(rho.values[i])[j];
      red.add_row(row);
    }
    auto ker = kernel_mod(red);
    if (ker.generators.empty()) return std::nullopt;
    IntMatrix coeff(1, ker.generators.size());
    for (std::size_t g = 0; g < ker.generators.size(); ++g) coeff(0, g) = ker.generators[g][np];
    IntLinearSystem sys{coeff, {m}, FinAbelianGroup(ker.orders)};
    const Int one[1] = {1 % m};
    auto sol = solve_modular(sys, one);
    if (!sol) return std::nullopt;
    for (std::size_t p = 0; p < np; ++p) {
      Int s = 0;
      for (std::size_t g = 0; g < ker.generators.size(); ++g) s = mod_floor(s + sol->particular[g] * ker.generators[g][p], m);
      g_coords[p][j] = s;
    }
  }
  std::vector<Element> g(np);
  for (std::size_t p = 0; p < np; ++p) g[p] = a.element(g_coords[p]);
  Cocycle check = coboundary_of(rho.base, rho.degree, a, g, rho.cubes);
  if (check.values != rho.values) throw std::logic_error("is_coboundary: witness failed re-evaluation");
  return g;
}

// ---------------------------------------------------------------------------
// H_d(N, A)

std::vector<Int> CohomologyGroup::class_of(const Cocycle& rho) const {
  auto coords = cocycles.coordinates(rho);
  std::vector<Int> out(group.rank(), 0);
  for (std::size_t a = 0; a < group.rank(); ++a) {
    Int s = 0;
    for (std::size_t i = 0; i < coords.size(); ++i)
      s = mod_floor(checked_add(s, checked_mul(projection(a, i), coords[i])), group.cyclic_orders()[a]);
    out[a] = s;
  }
  return out;
}

bool CohomologyGroup::is_trivial_class(const Cocycle& rho) const {
  auto c = class_of(rho);
  return std::all_of(c.begin(), c.end(), [](Int x) { return x == 0; });
}

CohomologyGroup cohomology(const Cubespace& n, int degree, const FinAbelianGroup& a) {
  CohomologyGroup h;
  h.degree = degree;
  h.cocycles = cocycle_space(n, degree, a);
  const auto& y = h.cocycles;
  const std::size_t r = y.generators.size();
  // relation columns: generator orders, then coboundaries of point indicators
  std::vector<std::vector<Int>> cols;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Int> c(r, 0);
    c[i] = y.orders[i];
    cols.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < a.rank(); ++j) {
    std::vector<Int> unit(a.rank(), 0);
    unit[j] = 1;
    for (Point p = 0; p < n.size(); ++p) {
      std::vector<Element> g(n.size(), 0);
      g[p] = a.element(unit);
      Cocycle b = coboundary_of(n, degree, a, g, y.cubes);
      cols.push_back(y.coordinates(b));
    }
  }
  if (r == 0) {
    h.group = FinAbelianGroup(std::vector<Int>{});
    h.projection = IntMatrix(0, 0);
    return h;
  }
  IntMatrix rel(r, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < r; ++i) rel(i, c) = cols[c][i];
  auto q = quotient_of_presentation(rel);
  h.group = q.group;
  h.projection = q.projection;
  for (std::size_t g = 0; g < q.group.rank(); ++g) {
    std::vector<Int> coeff(r);
    for (std::size_t i = 0; i < r; ++i) coeff[i] = mod_floor(q.section(i, g), y.orders[i]);
    h.representatives.push_back(y.element(coeff));
  }
  const std::uint64_t hy = y.order(), hh = h.group.order();
  h.coboundary_order = hh == 0 ? 0 : hy / hh;
  return h;
}

// ---------------------------------------------------------------------------
// Three-cube sums and cross sections

Element beta_sum(std::span<const Point> t, const Cocycle& tau) {
  const int k = tau.cube_dim();
  const auto tc = three_cube_maps(k);
  if (t.size() != tc.point_count()) throw std::invalid_argument("beta_sum: map has wrong domain size");
  Element s = 0;
  Cube c(vertex_count(k));
  for (Vertex v = 0; v < vertex_count(k); ++v) {
    for (Vertex w = 0; w < c.size(); ++w) c[w] = t[tc.psi[v][w]];
    if (!tau.cubes->contains(c)) throw std::invalid_argument("beta_sum: t is not a morphism of the three-cube");
    Element val = tau(c);
    s = weight_of(v) % 2 == 0 ? tau.group.add(s, val) : tau.group.sub(s, val);
  }
  return s;
}

Cocycle cocycle_from_cross_section(const ExtensionSpace& m, std::span<const Point> section) {
  if (section.size() != m.base.size()) throw std::invalid_argument("cross section has wrong length");
  for (Point x = 0; x < section.size(); ++x)
    if (section[x] >= m.total.size() || m.project(section[x]) != x)
      throw std::invalid_argument("cross section does not project to the identity");
  const int dim = m.degree + 1;
  Cocycle rho = zero_cocycle(m.base, m.degree, m.fiber, m.cocycle.cubes);
  const auto& a = m.fiber;
  std::vector<std::vector<Point>> allowed(vertex_count(dim));
  for (std::size_t i = 0; i < rho.cubes->size(); ++i) {
    auto c = (*rho.cubes)[i];
    for (Vertex v = 0; v < c.size(); ++v) {
      allowed[v].clear();
      for (Element e = 0; e < a.order(); ++e) allowed[v].push_back(m.point(c[v], e));
    }
    auto lift = find_cube_in(m.total.rule(), dim, allowed);
    if (!lift) throw std::logic_error("cocycle_from_cross_section: base cube " + m.base.format_cube(c) + " has no lift");
    Element s = 0;
    for (Vertex v = 0; v < c.size(); ++v) {
      Element f = a.sub(m.fiber_coordinate((*lift)[v]), m.fiber_coordinate(section[c[v]]));
      s = weight_of(v) % 2 == 0 ? a.add(s, f) : a.sub(s, f);
    }
    rho.values[i] = s;
  }
  return rho;
}

SplitResult is_split(const ExtensionSpace& m) {
  SplitResult out;
  std::vector<Point> section(m.base.size());
  for (Point x = 0; x < section.size(); ++x) section[x] = m.point(x, 0);
  out.cocycle = cocycle_from_cross_section(m, section);
  auto g = is_coboundary(out.cocycle);
  if (!g) return out;
  for (Point x = 0; x < section.size(); ++x) section[x] = m.point(x, (*g)[x]);
  std::string witness;
  if (!is_morphism(m.base, m.total, section, m.degree + 1, &witness))
    throw std::logic_error("is_split: corrected section is not cube preserving: " + witness);
  out.split = true;
  out.section = std::move(section);
  return out;
}

CocycleCheck certify_extension(const ExtensionSpace& m, int max_dim) {
  if (max_dim < 0) max_dim = m.degree + 1;
  if (m.total.size() != m.base.size() * m.fiber.order()) return {false, "point count is not |N| |A|"};
  std::string witness;
  if (!is_morphism(m.total, m.base, m.projection(), max_dim, &witness)) return {false, "projection: " + witness};
  std::vector<Point> section(m.base.size());
  for (Point x = 0; x < section.size(); ++x) section[x] = m.point(x, 0);
  Cocycle rho = cocycle_from_cross_section(m, section);
  if (auto chk = check_cocycle_axioms(rho); !chk.ok) return {false, "section cocycle: " + chk.witness};
  const Cubespace rebuilt = extension_from_cocycle(rho).total;
  for (int d = 0; d <= max_dim; ++d) {
    std::uint64_t count = 0;
    CocycleCheck out;
    for_each_cube(rebuilt, d, [&](std::span<const Point> c) {
      ++count;
      if (out.ok && !m.total.is_cube(c)) out = {false, "rebuilt cube " + m.total.format_cube(c) + " is not a cube"};
    });
    if (!out.ok) return out;
    const std::uint64_t expect = count_cubes(m.total, d);
    if (count != expect)
      return {false, "dimension " + std::to_string(d) + ": " + std::to_string(expect) + " cubes, " +
                         std::to_string(count) + " predicted by the cocycle"};
  }
  return {};
}

}  // namespace nilspace

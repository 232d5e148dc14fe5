#include "nilspace/translation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "nilspace/budget.hpp"
#include "nilspace/constructors.hpp"

namespace nilspace {

PointMap identity_map(std::size_t n) {
  PointMap m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

PointMap compose_maps(std::span<const Point> a, std::span<const Point> b) {
  PointMap out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
  return out;
}

PointMap inverse_map(std::span<const Point> a) {
  constexpr Point kNone = ~Point{0};
  PointMap out(a.size(), kNone);
  for (Point x = 0; x < a.size(); ++x) {
    if (a[x] >= a.size() || out[a[x]] != kNone) throw std::invalid_argument("inverse_map: not a bijection");
    out[a[x]] = x;
  }
  return out;
}

namespace {

int resolve_step(const Cubespace& n, int k) { return k >= 0 ? k : nilspace_step(n); }

bool is_bijection(std::span<const Point> a) {
  std::vector<char> seen(a.size(), 0);
  for (Point y : a) {
    if (y >= a.size() || seen[y]) return false;
    seen[y] = 1;
  }
  return true;
}

std::string format_map(std::span<const Point> a) {
  std::string s = "(";
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (x) s += ' ';
    s += std::to_string(a[x]);
  }
  return s + ")";
}

}  // namespace

bool is_translation(const Cubespace& n, const CubeSet& ck, std::span<const Point> alpha, int i, std::string* witness) {
  if (i < 1) throw std::invalid_argument("is_translation: height must be >= 1");
  if (alpha.size() != n.size()) throw std::invalid_argument("is_translation: map has wrong length");
  if (!is_bijection(alpha)) {
    if (witness) *witness = "map is not a bijection";
    return false;
  }
  for (std::size_t j = 0; j < ck.size(); ++j) {
    charge_nodes();
    auto c = ck[j];
    Cube img = map_cube(c, alpha);
    Cube g = arrow_cube(c, img, i);
    if (!n.is_cube(g)) {
      if (witness) *witness = "(c, alpha(c))_" + std::to_string(i) + " fails for c = " + n.format_cube(c);
      return false;
    }
  }
  return true;
}

bool is_translation(const Cubespace& n, int k, std::span<const Point> alpha, int i, std::string* witness) {
  return is_translation(n, enumerate_cubes(n, k), alpha, i, witness);
}

std::optional<std::size_t> TranslationGroup::index_of(std::span<const Point> alpha) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), alpha, [](const PointMap& a, std::span<const Point> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  if (it == elements.end() || !std::equal(it->begin(), it->end(), alpha.begin(), alpha.end())) return std::nullopt;
  return static_cast<std::size_t>(it - elements.begin());
}

bool TranslationGroup::is_abelian() const {
  for (std::size_t a = 0; a < table.size(); ++a)
    for (std::size_t b = a + 1; b < table.size(); ++b)
      if (table[a][b] != table[b][a]) return false;
  return true;
}

std::vector<std::vector<FinAbelianGroup::Element>> homs_to_degree_space(const Cubespace& m, int d,
                                                                        const FinAbelianGroup& a) {
  if (d < 0) throw std::invalid_argument("homs_to_degree_space: degree must be >= 0");
  const std::size_t size = m.size();
  const CubeSet cubes = enumerate_cubes(m, d + 1);
  // per cyclic factor, every kernel element as a value vector on points
  std::vector<std::vector<std::vector<Int>>> per_factor;
  for (Int mod : a.cyclic_orders()) {
    ModularRowReducer red(size, mod);
    std::map<std::size_t, Int> coeff;
    std::vector<std::pair<std::size_t, Int>> row;
    for (std::size_t j = 0; j < cubes.size(); ++j) {
      auto c = cubes[j];
      coeff.clear();
      for (Vertex v = 0; v < c.size(); ++v) coeff[c[v]] += weight_of(v) % 2 == 0 ? 1 : -1;
      row.clear();
      for (auto [x, e] : coeff)
        if (mod_floor(e, mod) != 0) row.emplace_back(x, e);
      if (!row.empty()) red.add_sparse_row(row);
    }
    const ModularKernel ker = kernel_mod(red);
    std::vector<std::vector<Int>> values{std::vector<Int>(size, 0)};
    for (std::size_t g = 0; g < ker.generators.size(); ++g) {
      std::vector<std::vector<Int>> next;
      for (const auto& base : values)
        for (Int t = 0; t < ker.orders[g]; ++t) {
          auto v = base;
          for (std::size_t x = 0; x < size; ++x) v[x] = mod_floor(v[x] + t * ker.generators[g][x], mod);
          next.push_back(std::move(v));
        }
      values.swap(next);
    }
    per_factor.push_back(std::move(values));
  }
  // combine factors: the value at x has coordinate j taken from factor j
  std::vector<std::vector<std::vector<Int>>> partial{std::vector<std::vector<Int>>(size)};
  for (const auto& values : per_factor) {
    std::vector<std::vector<std::vector<Int>>> next;
    for (const auto& p : partial)
      for (const auto& v : values) {
        auto q = p;
        for (std::size_t x = 0; x < size; ++x) q[x].push_back(v[x]);
        next.push_back(std::move(q));
      }
    partial.swap(next);
  }
  std::vector<std::vector<FinAbelianGroup::Element>> out;
  for (const auto& p : partial) {
    std::vector<FinAbelianGroup::Element> phi(size);
    for (std::size_t x = 0; x < size; ++x) phi[x] = a.element(p[x]);
    out.push_back(std::move(phi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Translation bundles and lifting

namespace {

struct BundleContext {
  Factor base;         // F_{k-1}(N)
  StructureGroup top;  // A_k on N
};

BundleContext make_context(const Cubespace& n, int k) {
  BundleContext ctx;
  ctx.base = factor(n, k - 1);
  ctx.top = structure_group(n, k, factor(n, k), ctx.base);
  return ctx;
}

TranslationBundle bundle_impl(const Cubespace& n, std::span<const Point> alpha, int i, int k, const BundleContext& ctx) {
  if (k < i + 1) throw std::invalid_argument("translation_bundle: requires k >= i + 1");
  const Cubespace& m = ctx.base.space;
  if (alpha.size() != m.size()) throw std::invalid_argument("translation_bundle: alpha must act on F_{k-1}(N)");
  std::string why;
  if (!is_translation(m, k - 1, alpha, i, &why))
    throw std::invalid_argument("translation_bundle: alpha is not in Trans_" + std::to_string(i) + " of the factor: " +
                                why);
  TranslationBundle b;
  b.height = i;
  b.step = k;
  b.alpha.assign(alpha.begin(), alpha.end());
  b.base = ctx.base;
  b.top = ctx.top;
  const auto& pi = ctx.base.projection;
  const Point size = static_cast<Point>(n.size());

  const auto all = arrow_pairs(n, i);
  std::vector<Point> chosen;
  for (Point p = 0; p < all.size(); ++p)
    if (alpha[pi[all[p].first]] == pi[all[p].second]) chosen.push_back(p);
  constexpr Point kNone = ~Point{0};
  std::vector<Point> pair_id(std::size_t{size} * size, kNone);
  for (Point t = 0; t < chosen.size(); ++t) {
    b.pairs.push_back(all[chosen[t]]);
    pair_id[all[chosen[t]].first * size + all[chosen[t]].second] = t;
  }
  b.total = subspace(arrow_space(n, i), chosen, "T");
  b.star_factor = factor(b.total, k - 1);
  const auto& cls = b.star_factor.partition;
  const auto& group = ctx.top.group;
  const auto na = static_cast<Point>(group.order());
  const auto& action = ctx.top.action;

  // A_k acts on T* through the second coordinate
  auto shifted = [&](Point t, FinAbelianGroup::Element a) {
    auto [x, y] = b.pairs[t];
    Point id = pair_id[x * size + action[a][y]];
    if (id == kNone) throw std::logic_error("translation_bundle: T is not closed under the A_k action");
    return cls.class_of[id];
  };
  const std::size_t stars = cls.classes.size();
  std::vector<std::vector<Point>> act(stars, std::vector<Point>(na));
  for (Point s = 0; s < stars; ++s)
    for (FinAbelianGroup::Element a = 0; a < na; ++a) act[s][a] = shifted(cls.classes[s].front(), a);
  for (Point t = 0; t < b.pairs.size(); ++t)
    for (FinAbelianGroup::Element a = 0; a < na; ++a)
      if (shifted(t, a) != act[cls.class_of[t]][a])
        throw std::logic_error("translation_bundle: induced A_k action on T* is not well defined");

  std::vector<std::vector<Point>> fibers(m.size());
  for (Point s = 0; s < stars; ++s) fibers[pi[b.pairs[cls.classes[s].front()].first]].push_back(s);
  std::vector<Point> order(m.size() * na, kNone);
  for (Point x = 0; x < m.size(); ++x) {
    if (fibers[x].size() != na)
      throw std::logic_error("translation_bundle: fiber of T* over " + m.label(x) + " has " +
                             std::to_string(fibers[x].size()) + " points");
    const Point s0 = fibers[x].front();
    for (FinAbelianGroup::Element a = 0; a < na; ++a) order[x * na + a] = act[s0][a];
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (Point s = 0; s < sorted.size(); ++s)
      if (sorted[s] != s) throw std::logic_error("translation_bundle: A_k does not act freely on a T* fiber");
  }
  b.star.total = subspace(b.star_factor.space, order, "T*");
  b.star.base = m;
  b.star.fiber = group;
  b.star.degree = k - i;
  for (Point s : order) b.representative.push_back(b.pairs[cls.classes[s].front()]);
  b.certificate = certify_extension(b.star);
  return b;
}

LiftResult lift_impl(const Cubespace& n, std::span<const Point> alpha, int i, int k, const BundleContext& ctx) {
  LiftResult r;
  const auto& pi = ctx.base.projection;
  if (i >= k) {
    // Trans_i(F_{k-1}(N)) is trivial for i > k - 1
    if (!std::equal(alpha.begin(), alpha.end(), identity_map(alpha.size()).begin()))
      throw std::invalid_argument("lift_translation: alpha is not in Trans_" + std::to_string(i) + " of the factor");
    r.lifted = true;
    r.beta = identity_map(n.size());
    return r;
  }
  TranslationBundle b = bundle_impl(n, alpha, i, k, ctx);
  if (!b.certificate.ok) throw std::logic_error("lift_translation: T* is not an extension: " + b.certificate.witness);
  SplitResult sp = is_split(b.star);
  r.cocycle = sp.cocycle;
  CohomologyGroup h = cohomology(b.star.base, b.star.degree, b.star.fiber);
  r.obstruction_group = h.group;
  r.obstruction = h.class_of(sp.cocycle);
  if (!sp.split) return r;
  r.beta.resize(n.size());
  for (Point x = 0; x < n.size(); ++x) {
    auto [rx, ry] = b.representative[sp.section[pi[x]]];
    r.beta[x] = close_translation_corner(n, k, rx, ry, x);
    if (pi[r.beta[x]] != alpha[pi[x]]) throw std::logic_error("lift_translation: lift does not project to alpha");
  }
  std::string why;
  if (!is_translation(n, k, r.beta, i, &why)) throw std::logic_error("lift_translation: lift is not a translation: " + why);
  r.lifted = true;
  return r;
}

TranslationGroup make_group(std::vector<PointMap> elements, int height, int step, bool require_closed) {
  TranslationGroup g;
  g.height = height;
  g.step = step;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  g.elements = std::move(elements);
  const std::size_t size = g.elements.size();
  g.table.assign(size, std::vector<std::uint32_t>(size, 0));
  g.inverse.assign(size, 0);
  for (std::size_t a = 0; a < size; ++a) {
    auto inv = g.index_of(inverse_map(g.elements[a]));
    if (!inv) {
      if (require_closed) throw std::logic_error("translation group: inverse missing");
    } else {
      g.inverse[a] = static_cast<std::uint32_t>(*inv);
    }
    for (std::size_t b = 0; b < size; ++b) {
      auto c = g.index_of(compose_maps(g.elements[a], g.elements[b]));
      if (!c) throw std::logic_error("translation group: not closed under composition");
      g.table[a][b] = static_cast<std::uint32_t>(*c);
    }
  }
  return g;
}

std::vector<PointMap> generated_closure(std::vector<PointMap> gens, std::size_t points) {
  std::vector<PointMap> out{identity_map(points)};
  std::map<PointMap, char> seen{{out.front(), 1}};
  for (std::size_t j = 0; j < out.size(); ++j)
    for (const auto& g : gens) {
      PointMap c = compose_maps(g, out[j]);
      if (seen.emplace(c, 1).second) out.push_back(std::move(c));
    }
  return out;
}

std::vector<PointMap> enumerate_impl(const Cubespace& n, int i, int k, std::vector<PointMap>* found) {
  if (i > k || k == 0 || n.size() == 1) return {identity_map(n.size())};
  BundleContext ctx = make_context(n, k);
  const Factor& f = ctx.base;
  const auto lower = enumerate_impl(f.space, i, k - 1, nullptr);
  const auto homs = homs_to_degree_space(f.space, k - i, ctx.top.group);
  const CubeSet ck = enumerate_cubes(n, k);
  std::vector<PointMap> out;
  for (const auto& alpha : lower) {
    LiftResult lr = lift_impl(n, alpha, i, k, ctx);
    if (!lr.lifted) continue;
    for (const auto& phi : homs) {
      PointMap beta(n.size());
      for (Point x = 0; x < n.size(); ++x) beta[x] = lr.beta[ctx.top.action[phi[f.projection[x]]][x]];
      std::string why;
      if (!is_translation(n, ck, beta, i, &why))
        throw std::logic_error("enumerate_translations: kernel candidate is not a translation: " + why);
      if (found) found->push_back(beta);
      out.push_back(std::move(beta));
    }
  }
  return out;
}

}  // namespace

TranslationBundle translation_bundle(const Cubespace& n, std::span<const Point> alpha, int i, int k) {
  k = resolve_step(n, k);
  if (k < i + 1) throw std::invalid_argument("translation_bundle: requires k >= i + 1");
  return bundle_impl(n, alpha, i, k, make_context(n, k));
}

LiftResult lift_translation(const Cubespace& n, std::span<const Point> alpha, int i, int k) {
  k = resolve_step(n, k);
  if (i < 1) throw std::invalid_argument("lift_translation: height must be >= 1");
  if (k == 0) {
    LiftResult r;
    r.lifted = true;
    r.beta = identity_map(n.size());
    return r;
  }
  return lift_impl(n, alpha, i, k, make_context(n, k));
}

TranslationGroup enumerate_translations(const Cubespace& n, int i, int k) {
  if (i < 1) throw std::invalid_argument("enumerate_translations: height must be >= 1");
  k = resolve_step(n, k);
  std::vector<PointMap> found;
  try {
    return make_group(enumerate_impl(n, i, k, &found), i, k, true);
  } catch (const BudgetExceeded&) {
    TranslationGroup g = make_group(generated_closure(found, n.size()), i, k, true);
    g.complete = false;
    g.note = "budget exhausted; subgroup generated by " + std::to_string(found.size()) + " certified elements";
    return g;
  }
}

// ---------------------------------------------------------------------------
// Central series

CentralSeriesReport verify_central_series(const Cubespace& n, int k) {
  CentralSeriesReport r;
  k = resolve_step(n, k);
  r.step = k;
  for (int h = 1; h <= std::max(k, 1); ++h) r.groups.push_back(enumerate_translations(n, h, k));
  if (k >= 1) {
    // Trans_{k+1} as the elements of Trans_k passing the height k+1 test
    const CubeSet ck = enumerate_cubes(n, k);
    std::vector<PointMap> keep;
    for (const auto& a : r.groups.back().elements)
      if (is_translation(n, ck, a, k + 1)) keep.push_back(a);
    r.groups.push_back(make_group(std::move(keep), k + 1, k, true));
  }
  auto fail = [&](std::string w) {
    if (r.ok) {
      r.ok = false;
      r.witness = std::move(w);
    }
  };
  for (std::size_t h = 1; h < r.groups.size(); ++h)
    for (const auto& a : r.groups[h].elements)
      if (!r.groups[h - 1].index_of(a))
        fail("Trans_" + std::to_string(h + 1) + " element " + format_map(a) + " is not in Trans_" + std::to_string(h));
  const auto& last = r.groups.back();
  if (last.order() != 1) fail("Trans_" + std::to_string(last.height) + " has order " + std::to_string(last.order()));
  const int top = static_cast<int>(r.groups.size());
  for (int i = 1; i <= top; ++i)
    for (int j = i; j <= top; ++j) {
      const auto& gi = r.groups[i - 1];
      const auto& gj = r.groups[j - 1];
      const int land = std::min(i + j, top);
      const auto& target = r.groups[land - 1];
      for (const auto& a : gi.elements)
        for (const auto& b : gj.elements) {
          ++r.commutators_checked;
          PointMap c = compose_maps(compose_maps(inverse_map(a), inverse_map(b)), compose_maps(a, b));
          const bool trivial = c == identity_map(n.size());
          if (!trivial) {
            ++r.nontrivial_commutators;
            if (r.example.empty())
              r.example = "[" + format_map(a) + ", " + format_map(b) + "] = " + format_map(c) + " in Trans_" +
                          std::to_string(land);
          }
          const bool inside = i + j > top ? trivial : target.index_of(c).has_value();
          if (!inside)
            fail("[" + format_map(a) + ", " + format_map(b) + "] = " + format_map(c) + " is not in Trans_" +
                 std::to_string(i + j));
        }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Translation equivalence of cubes

namespace {

struct CubeHash {
  std::size_t operator()(const Cube& c) const {
    std::size_t h = 1469598103934665603ULL;
    for (Point p : c) h = (h ^ p) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

EquivalenceResult translation_equivalent(const Cubespace& n, std::span<const Point> c1, std::span<const Point> c2,
                                         int k) {
  if (c1.size() != c2.size()) throw std::invalid_argument("translation_equivalent: cubes differ in dimension");
  if (!n.is_cube(c1) || !n.is_cube(c2)) throw std::invalid_argument("translation_equivalent: arguments must be cubes");
  k = resolve_step(n, k);
  const int dim = cube_dimension(c1.size());
  std::vector<TranslationMove> moves;
  std::vector<TranslationGroup> groups;
  for (int h = 1; h <= std::min(k, std::max(dim, 1)); ++h) groups.push_back(enumerate_translations(n, h, k));
  const PointMap id = identity_map(n.size());
  if (!groups.empty())
    for (const auto& a : groups[0].elements)
      if (a != id) moves.push_back({0, a, make_face(dim, 0, 0)});
  for (int h = 1; h <= static_cast<int>(groups.size()) && h <= dim; ++h)
    for (const auto& face : faces(dim, h))
      for (const auto& a : groups[h - 1].elements)
        if (a != id) moves.push_back({h, a, face});

  EquivalenceResult r;
  const Cube start(c1.begin(), c1.end()), goal(c2.begin(), c2.end());
  std::vector<Cube> states{start};
  std::vector<std::pair<std::size_t, std::size_t>> parent{{0, 0}};
  std::unordered_map<Cube, std::size_t, CubeHash> seen{{start, 0}};
  std::optional<std::size_t> hit;
  if (start == goal) hit = 0;
  for (std::size_t q = 0; q < states.size() && !hit; ++q) {
    for (std::size_t mv = 0; mv < moves.size() && !hit; ++mv) {
      charge_nodes();
      Cube next = states[q];
      const auto& m = moves[mv];
      for (Vertex v = 0; v < next.size(); ++v)
        if (m.face.contains(v)) next[v] = m.alpha[next[v]];
      if (seen.count(next)) continue;
      seen.emplace(next, states.size());
      states.push_back(next);
      parent.emplace_back(q, mv);
      if (next == goal) hit = states.size() - 1;
    }
  }
  r.states = states.size();
  if (!hit) return r;
  r.reachable = true;
  for (std::size_t s = *hit; s != 0; s = parent[s].first) r.moves.push_back(moves[parent[s].second]);
  std::reverse(r.moves.begin(), r.moves.end());
  return r;
}

}  // namespace nilspace

#include "nilspace/factor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "nilspace/budget.hpp"
#include "nilspace/cohomology.hpp"
#include "nilspace/constructors.hpp"

namespace nilspace {

// ---------------------------------------------------------------------------
// ~_k

std::string SimKPartition::to_string(const Cubespace& space) const {
  std::string out;
  for (const auto& cls : classes) {
    if (!out.empty()) out += ' ';
    out += '{';
    for (std::size_t j = 0; j < cls.size(); ++j) {
      if (j) out += ',';
      out += space.label(cls[j]);
    }
    out += '}';
  }
  return out;
}

bool sim_related(const Cubespace& n, int k, Point x, Point y) {
  Cube c(vertex_count(k + 1), x);
  c[0] = y;
  return n.is_cube(c);
}

SimKPartition sim_k(const Cubespace& n, int k) {
  if (k < 0) throw std::invalid_argument("sim_k: k must be >= 0");
  const std::size_t size = n.size();
  std::vector<char> rel(size * size, 0);
  for (Point x = 0; x < size; ++x)
    for (Point y = 0; y < size; ++y) {
      charge_nodes();
      rel[x * size + y] = sim_related(n, k, x, y) ? 1 : 0;
    }
  auto fail = [&](const std::string& what, Point x, Point y) {
    throw std::runtime_error("~_" + std::to_string(k) + " is not an equivalence (" + what + ") at " + n.label(x) +
                             ", " + n.label(y));
  };
  for (Point x = 0; x < size; ++x) {
    if (!rel[x * size + x]) fail("reflexivity", x, x);
    for (Point y = 0; y < size; ++y) {
      if (!rel[x * size + y]) continue;
      if (!rel[y * size + x]) fail("symmetry", x, y);
      // related points must have identical rows
      if (!std::equal(rel.begin() + x * size, rel.begin() + (x + 1) * size, rel.begin() + y * size))
        fail("transitivity", x, y);
    }
  }
  SimKPartition p;
  p.k = k;
  constexpr Point kNone = ~Point{0};
  p.class_of.assign(size, kNone);
  for (Point x = 0; x < size; ++x) {
    if (p.class_of[x] != kNone) continue;
    const auto id = static_cast<Point>(p.classes.size());
    p.classes.emplace_back();
    for (Point y = x; y < size; ++y)
      if (rel[x * size + y]) {
        p.class_of[y] = id;
        p.classes.back().push_back(y);
      }
  }
  return p;
}

int nilspace_step(const Cubespace& n) {
  const int top = std::min(dimension_cap(), n.rule().max_dimension());
  for (int k = 0; k + 1 <= top; ++k)
    if (sim_k(n, k).discrete()) return k;
  throw std::runtime_error("nilspace_step: no k below the dimension cap has discrete ~_k");
}

// ---------------------------------------------------------------------------
// Factors

Factor factor(const Cubespace& n, int k) {
  Factor f;
  f.k = k;
  f.partition = sim_k(n, k);
  if (f.partition.discrete()) {
    f.space = n;
    f.projection.resize(n.size());
    std::iota(f.projection.begin(), f.projection.end(), 0);
    return f;
  }
  f.projection = f.partition.class_of;
  std::vector<std::string> labels;
  for (const auto& cls : f.partition.classes) labels.push_back("[" + n.label(cls.front()) + "]");
  std::vector<CubeSet> tables;
  for (int d = 0; d <= k + 1; ++d) {
    CubeSet t(d);
    for_each_cube(n, d, [&](std::span<const Point> c) { t.push_back(map_cube(c, f.projection)); });
    t.canonicalize();
    tables.push_back(std::move(t));
  }
  std::string name = "F" + std::to_string(k) + "(" + (n.name().empty() ? "N" : n.name()) + ")";
  f.space = table_space(std::move(labels), std::move(tables), k).with_name(std::move(name));
  if (!sim_k(f.space, k).discrete())
    throw std::runtime_error("factor: F_" + std::to_string(k) + " is not " + std::to_string(k) + "-step");
  return f;
}

// ---------------------------------------------------------------------------
// Local translations

Point close_translation_corner(const Cubespace& n, int k, Point x, Point y, Point z) {
  const Vertex low = full_vertex(k);
  Cube corner(vertex_count(k + 1));
  for (Vertex u = 0; u + 1 < corner.size(); ++u) {
    const bool top = (u >> k) & 1U;
    if (!top) corner[u] = (u & low) == low ? z : x;
    else corner[u] = y;
  }
  auto done = complete_corner(n, std::span<const Point>(corner.data(), corner.size() - 1));
  if (done.size() != 1)
    throw std::runtime_error("translation corner at " + n.label(x) + ", " + n.label(y) + ", " + n.label(z) + " has " +
                             std::to_string(done.size()) + " completions");
  return done.front();
}

Point LocalTranslation::operator()(Point z) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), z);
  if (it == domain.end() || *it != z) throw std::out_of_range("local translation: point outside the class");
  return image[static_cast<std::size_t>(it - domain.begin())];
}

LocalTranslation local_translation(const Cubespace& n, int k, Point x, Point y) {
  if (k < 1) throw std::invalid_argument("local_translation: k must be >= 1");
  if (x >= n.size() || y >= n.size()) throw std::invalid_argument("local_translation: point out of range");
  auto part = sim_k(n, k - 1);
  LocalTranslation t;
  t.domain = part.classes[part.class_of[x]];
  for (Point z : t.domain) t.image.push_back(close_translation_corner(n, k, x, y, z));
  if (t(x) != y) throw std::logic_error("local_translation: phi(x) != y");
  return t;
}

// ---------------------------------------------------------------------------
// Structure groups

std::vector<std::vector<Point>> StructureGroup::reference_table() const {
  const std::size_t m = reference_fiber.size();
  std::vector<std::vector<Point>> t(m, std::vector<Point>(m));
  for (FinAbelianGroup::Element a = 0; a < m; ++a)
    for (FinAbelianGroup::Element b = 0; b < m; ++b) t[a][b] = reference_fiber[group.add(a, b)];
  return t;
}

namespace {

StructureGroup structure_group_from(const Cubespace& n, int i, Factor upper, Factor lower) {
  StructureGroup sg;
  sg.level = i;
  const Cubespace& t = upper.space;
  const std::size_t count = t.size();
  sg.down.assign(count, 0);
  for (Point x = 0; x < n.size(); ++x) sg.down[upper.projection[x]] = lower.projection[x];
  std::vector<std::vector<Point>> fibers(lower.space.size());
  for (Point p = 0; p < count; ++p) fibers[sg.down[p]].push_back(p);
  const auto& ref = fibers.at(0);
  const Point e = ref.front();
  const std::size_t m = ref.size();
  for (const auto& f : fibers)
    if (f.size() != m)
      throw std::runtime_error("structure group " + std::to_string(i) + ": fibers over " + lower.space.label(0) +
                               " and " + lower.space.label(sg.down[f.front()]) + " differ in size");
  std::vector<std::size_t> pos(count, 0);
  for (std::size_t j = 0; j < m; ++j) pos[ref[j]] = j;
  std::vector<std::vector<std::size_t>> add(m, std::vector<std::size_t>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      Point s = close_translation_corner(t, i, e, ref[a], ref[b]);
      if (sg.down[s] != 0) throw std::runtime_error("structure group: sum leaves the reference fiber");
      add[a][b] = pos[s];
    }
  AbelianIdentification id;
  try {
    id = identify_abelian_table(add, 0);
  } catch (const std::exception& ex) {
    throw std::runtime_error("structure group " + std::to_string(i) + ": fiber addition is not an abelian group: " +
                             ex.what());
  }
  sg.group = id.group;
  const std::size_t order = sg.group.order();
  for (FinAbelianGroup::Element a = 0; a < order; ++a) sg.reference_fiber.push_back(ref[id.table_index_of[a]]);
  sg.action.assign(order, std::vector<Point>(count));
  for (FinAbelianGroup::Element a = 0; a < order; ++a)
    for (Point x = 0; x < count; ++x) sg.action[a][x] = close_translation_corner(t, i, e, x, sg.reference_fiber[a]);

  auto fail = [&](const std::string& what, Point x) {
    throw std::runtime_error("structure group " + std::to_string(i) + ": " + what + " at " + t.label(x));
  };
  sg.fiber_base.resize(count);
  sg.coordinate.resize(count);
  for (const auto& f : fibers) {
    const Point base = f.front();
    std::vector<char> hit(count, 0);
    for (FinAbelianGroup::Element a = 0; a < order; ++a) {
      Point y = sg.action[a][base];
      if (sg.down[y] != sg.down[base]) fail("action leaves the fiber", base);
      if (hit[y]) fail("action is not free", base);
      hit[y] = 1;
      sg.fiber_base[y] = base;
      sg.coordinate[y] = a;
    }
  }
  for (FinAbelianGroup::Element a = 0; a < order; ++a)
    for (FinAbelianGroup::Element b = 0; b < order; ++b)
      for (Point x = 0; x < count; ++x)
        if (sg.action[a][sg.action[b][x]] != sg.action[sg.group.add(a, b)][x])
          fail("action is not additive for " + sg.group.element_label(a) + " and " + sg.group.element_label(b), x);
  sg.upper = std::move(upper);
  sg.lower = std::move(lower);
  return sg;
}

Point apply_offset(const std::vector<std::vector<Point>>& action, Point x, FinAbelianGroup::Element a) {
  return action[a][x];
}

}  // namespace

StructureGroup structure_group(const Cubespace& n, int i) {
  if (i < 1) throw std::invalid_argument("structure_group: level must be >= 1");
  return structure_group_from(n, i, factor(n, i), factor(n, i - 1));
}

StructureGroup structure_group(const Cubespace& n, int i, Factor upper, Factor lower) {
  if (i < 1) throw std::invalid_argument("structure_group: level must be >= 1");
  if (upper.k != i || lower.k != i - 1) throw std::invalid_argument("structure_group: factor levels do not match");
  return structure_group_from(n, i, std::move(upper), std::move(lower));
}

// ---------------------------------------------------------------------------
// Bundle decomposition

std::vector<FinAbelianGroup> BundleDecomposition::structure_groups() const {
  std::vector<FinAbelianGroup> out;
  for (std::size_t i = 1; i < levels.size(); ++i) out.push_back(levels[i].group);
  return out;
}

namespace {

Certificate certify_level(const BundleLevel& prev, const BundleLevel& lvl, int max_dim) {
  const int i = lvl.index;
  const Cubespace& base = prev.factor.space;
  const Cubespace& top = lvl.factor.space;
  const Cubespace offsets = degree_space(lvl.group, i);
  std::vector<std::vector<Point>> fibers(base.size());
  for (Point p = 0; p < top.size(); ++p) fibers[lvl.down[p]].push_back(p);
  for (int d = 0; d <= max_dim; ++d) {
    const CubeSet deltas = enumerate_cubes(offsets, d);
    std::uint64_t base_count = 0;
    std::string witness;
    std::vector<std::vector<Point>> allowed(vertex_count(d));
    Cube moved(vertex_count(d));
    for_each_cube(base, d, [&](std::span<const Point> c) {
      ++base_count;
      if (!witness.empty()) return;
      for (Vertex v = 0; v < c.size(); ++v) allowed[v] = fibers[c[v]];
      auto lift = find_cube_in(top.rule(), d, allowed);
      if (!lift) {
        witness = "cube " + base.format_cube(c) + " has no lift";
        return;
      }
      for (std::size_t j = 0; j < deltas.size() && witness.empty(); ++j) {
        auto delta = deltas[j];
        for (Vertex v = 0; v < moved.size(); ++v) moved[v] = apply_offset(lvl.action, (*lift)[v], delta[v]);
        charge_nodes();
        if (!top.is_cube(moved)) witness = "lift " + top.format_cube(*lift) + " shifted to " + top.format_cube(moved);
      }
    });
    if (!witness.empty())
      return {false, "T_" + std::to_string(i) + " lifts differ by D_" + std::to_string(i) + " cubes (dim " +
                         std::to_string(d) + ")",
              witness};
    const std::uint64_t top_count = count_cubes(top, d);
    if (top_count != base_count * deltas.size())
      return {false, "T_" + std::to_string(i) + " lift count (dim " + std::to_string(d) + ")",
              std::to_string(top_count) + " cubes over " + std::to_string(base_count) + " base cubes with " +
                  std::to_string(deltas.size()) + " offsets"};
  }
  return {};
}

}  // namespace

BundleDecomposition bundle_decomposition(const Cubespace& n, int k, int certify_dim) {
  if (k < 0) throw std::invalid_argument("bundle_decomposition: k must be >= 0");
  if (certify_dim < 0) certify_dim = k + 1;
  BundleDecomposition d;
  d.k = k;
  std::vector<Factor> factors;
  for (int i = 0; i <= k; ++i) factors.push_back(factor(n, i));

  BundleLevel zero;
  zero.index = 0;
  zero.factor = factors[0];
  zero.canonical = factors[0].space;
  zero.to_canonical.resize(factors[0].space.size());
  std::iota(zero.to_canonical.begin(), zero.to_canonical.end(), 0);
  zero.from_canonical = zero.to_canonical;
  zero.group = FinAbelianGroup(std::vector<Int>{});
  d.levels.push_back(std::move(zero));
  if (factors[0].space.size() != 1) {
    d.certificate = {false, "ergodicity", "F_0 has " + std::to_string(factors[0].space.size()) + " points"};
    return d;
  }
  if (!factors[k].partition.discrete()) {
    d.certificate = {false, "k-step", "~_" + std::to_string(k) + " is not discrete"};
  }

  for (int i = 1; i <= k; ++i) {
    StructureGroup sg = structure_group_from(n, i, factors[i], factors[i - 1]);
    const BundleLevel& prev = d.levels.back();
    BundleLevel lvl;
    lvl.index = i;
    lvl.group = sg.group;
    lvl.action = sg.action;
    lvl.down = sg.down;
    const auto na = static_cast<Point>(sg.group.order());
    const std::size_t count = sg.upper.space.size();
    lvl.to_canonical.resize(count);
    lvl.from_canonical.resize(count);
    for (Point p = 0; p < count; ++p) {
      Point c = prev.to_canonical[sg.down[p]] * na + sg.coordinate[p];
      lvl.to_canonical[p] = c;
      lvl.from_canonical[c] = p;
    }
    lvl.canonical = subspace(sg.upper.space, lvl.from_canonical, "T" + std::to_string(i));
    lvl.factor = std::move(sg.upper);

    ExtensionSpace m;
    m.total = lvl.canonical;
    m.base = prev.canonical;
    m.fiber = lvl.group;
    m.degree = i;
    std::vector<Point> section(prev.canonical.size());
    for (Point x = 0; x < section.size(); ++x) section[x] = m.point(x, 0);
    lvl.cocycle = cocycle_from_cross_section(m, section);

    if (d.certificate.ok) d.certificate = certify_level(prev, lvl, std::min(certify_dim, k + 1));
    d.levels.push_back(std::move(lvl));
  }
  return d;
}

RebuildCheck rebuild_from_decomposition(const Cubespace& n, const BundleDecomposition& d, int max_dim) {
  RebuildCheck out;
  if (max_dim < 0) max_dim = d.k + 1;
  Cubespace rebuilt = d.levels.front().canonical;
  for (std::size_t i = 1; i < d.levels.size(); ++i) {
    Cocycle rho = d.levels[i].cocycle;
    rho.base = rebuilt;
    rebuilt = extension_from_cocycle(rho, "R" + std::to_string(i)).total;
  }
  const BundleLevel& top = d.levels.back();
  const Cubespace& target = n;
  if (top.factor.space.size() != n.size()) {
    out.certificate = {false, "k-step", "F_k has fewer points than N"};
    return out;
  }
  Cube mapped;
  for (int dim = 0; dim <= max_dim && out.certificate.ok; ++dim) {
    std::uint64_t count = 0;
    for_each_cube(rebuilt, dim, [&](std::span<const Point> c) {
      ++count;
      if (!out.certificate.ok) return;
      mapped = map_cube(c, top.from_canonical);
      if (!target.is_cube(mapped))
        out.certificate = {false, "rebuilt cube is not a cube (dim " + std::to_string(dim) + ")",
                           target.format_cube(mapped)};
    });
    const std::uint64_t expect = count_cubes(target, dim);
    out.cube_counts.push_back(count);
    if (out.certificate.ok && count != expect)
      out.certificate = {false, "rebuilt cube count (dim " + std::to_string(dim) + ")",
                         std::to_string(count) + " rebuilt vs " + std::to_string(expect)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fiber surjectivity and fiber sizes

bool is_fiber_surjective(const Cubespace& source, const Cubespace& target, std::span<const Point> f, int max_j,
                         std::string* witness) {
  if (f.size() != source.size()) throw std::invalid_argument("is_fiber_surjective: map has wrong length");
  for (int j = 0; j <= max_j; ++j) {
    auto ps = sim_k(source, j);
    auto pt = sim_k(target, j);
    for (const auto& cls : ps.classes) {
      std::vector<Point> img;
      for (Point x : cls) img.push_back(f[x]);
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      if (img != pt.classes[pt.class_of[img.front()]]) {
        if (witness)
          *witness = "~_" + std::to_string(j) + " class of " + source.label(cls.front()) +
                     " does not map onto the class of " + target.label(img.front());
        return false;
      }
    }
  }
  return true;
}

FiberCardinalityReport fiber_cardinality_report(const Cubespace& source, const Cubespace& target,
                                                std::span<const Point> f, int n) {
  if (f.size() != source.size()) throw std::invalid_argument("fiber_cardinality_report: map has wrong length");
  FiberCardinalityReport r;
  r.n = n;
  const CubeSet targets = enumerate_cubes(target, n);
  std::vector<std::uint64_t> counts(targets.size(), 0);
  for_each_cube(source, n, [&](std::span<const Point> c) {
    Cube img = map_cube(c, f);
    auto idx = targets.index_of(img);
    if (!idx)
      throw std::invalid_argument("fiber_cardinality_report: image of " + source.format_cube(c) + " is not a cube");
    ++counts[*idx];
    ++r.source_cubes;
  });
  r.target_cubes = targets.size();
  for (auto c : counts) ++r.histogram[c];
  return r;
}

}  // namespace nilspace

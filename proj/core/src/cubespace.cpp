#include "nilspace/cubespace.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nilspace/budget.hpp"

namespace nilspace {

int cube_dimension(std::size_t vertices) {
  if (vertices == 0 || (vertices & (vertices - 1)) != 0)
    throw std::invalid_argument("cube size " + std::to_string(vertices) + " is not a power of two");
  return __builtin_ctzll(vertices);
}

// ---------------------------------------------------------------------------
// Cubespace

Cubespace::Cubespace(std::shared_ptr<const CubeRule> rule, std::vector<std::string> labels,
                     std::optional<int> claimed_step, std::string name)
    : rule_(std::move(rule)), labels_(std::move(labels)), claimed_step_(claimed_step), name_(std::move(name)) {
  if (!rule_) throw std::invalid_argument("Cubespace: null rule");
  if (rule_->point_count() != labels_.size())
    throw std::invalid_argument("Cubespace: label count does not match point count");
}

Cubespace Cubespace::with_name(std::string name) const {
  Cubespace c = *this;
  c.name_ = std::move(name);
  return c;
}

Cubespace Cubespace::with_step(std::optional<int> step) const {
  Cubespace c = *this;
  c.claimed_step_ = step;
  return c;
}

bool Cubespace::is_cube(std::span<const Point> cube) const {
  const int n = cube_dimension(cube.size());
  if (n > dimension_cap() || n > rule_->max_dimension())
    throw std::out_of_range("is_cube: dimension " + std::to_string(n) + " exceeds capability");
  for (Point p : cube)
    if (p >= size()) throw std::out_of_range("is_cube: value is not a point");
  return rule_->contains(cube);
}

std::string Cubespace::format_cube(std::span<const Point> cube) const {
  std::string s = "[";
  for (std::size_t i = 0; i < cube.size(); ++i) {
    if (i) s += ",";
    s += cube[i] < size() ? labels_[cube[i]] : "?";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// CubeSet

void CubeSet::push_back(std::span<const Point> cube) {
  if (cube.size() != width()) throw std::invalid_argument("CubeSet::push_back: wrong cube size");
  data_.insert(data_.end(), cube.begin(), cube.end());
}

void CubeSet::canonicalize() {
  const std::size_t w = width();
  const std::size_t n = size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(data_.begin() + a * w, data_.begin() + (a + 1) * w,
                                        data_.begin() + b * w, data_.begin() + (b + 1) * w);
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    return std::equal(data_.begin() + a * w, data_.begin() + (a + 1) * w, data_.begin() + b * w);
  };
  std::sort(idx.begin(), idx.end(), less);
  std::vector<Point> out;
  out.reserve(data_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && equal(idx[i], idx[i - 1])) continue;
    out.insert(out.end(), data_.begin() + idx[i] * w, data_.begin() + (idx[i] + 1) * w);
  }
  data_ = std::move(out);
}

std::optional<std::size_t> CubeSet::index_of(std::span<const Point> cube) const {
  const std::size_t w = width();
  if (cube.size() != w) return std::nullopt;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto c = (*this)[mid];
    if (std::lexicographical_compare(c.begin(), c.end(), cube.begin(), cube.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(cube.begin(), cube.end(), (*this)[lo].begin())) return lo;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Backtracking enumeration

namespace {

// Faces of {0,1}^n grouped by their largest vertex, smaller faces first.
struct FacePlan {
  std::vector<std::vector<std::vector<Vertex>>> at;  // at[v] = faces with max vertex v
};

const FacePlan& face_plan(int n) {
  constexpr int kMax = 21;
  static std::array<std::once_flag, kMax> once;
  static std::array<FacePlan, kMax> plans;
  if (n < 0 || n >= kMax) throw std::out_of_range("face_plan: dimension");
  std::call_once(once[n], [n] {
    FacePlan& plan = plans[n];
    plan.at.resize(vertex_count(n));
    for (Vertex v = 0; v < vertex_count(n); ++v) {
      std::vector<Vertex> subsets;
      for (Vertex s = v; s != 0; s = (s - 1) & v) subsets.push_back(s);
      std::sort(subsets.begin(), subsets.end(), [](Vertex a, Vertex b) {
        return weight_of(a) != weight_of(b) ? weight_of(a) < weight_of(b) : a < b;
      });
      for (Vertex s : subsets) {
        std::vector<int> free;
        for (int j = 0; j < n; ++j)
          if ((s >> j) & 1U) free.push_back(j);
        std::vector<Vertex> verts(vertex_count(static_cast<int>(free.size())));
        for (Vertex l = 0; l < verts.size(); ++l) {
          Vertex u = v & ~s;
          for (std::size_t t = 0; t < free.size(); ++t) u |= ((l >> t) & 1U) << free[t];
          verts[l] = u;
        }
        plan.at[v].push_back(std::move(verts));
      }
    }
  });
  return plans[n];
}

class CornerEnumerator {
 public:
  CornerEnumerator(const Cubespace& space, int n, const PartialCube& fixed, const CornerVisitor& visit)
      : rule_(space.rule()),
        n_(n),
        points_(static_cast<Point>(space.size())),
        plan_(face_plan(n)),
        fixed_(fixed),
        visit_(visit),
        cube_(vertex_count(n), 0),
        candidates_(vertex_count(n)) {
    if (n > dimension_cap() || n > rule_.max_dimension())
      throw std::out_of_range("cube enumeration: dimension " + std::to_string(n) + " exceeds capability");
    if (!fixed_.empty() && fixed_.size() != cube_.size())
      throw std::invalid_argument("cube enumeration: fixed assignment has wrong size");
  }

  void run() {
    if (n_ == 0) {
      std::vector<Point> completions;
      for (Point p : options(0)) {
        charge_nodes();
        cube_[0] = p;
        if (rule_.contains(cube_)) completions.push_back(p);
      }
      visit_(cube_, completions);
      return;
    }
    recurse(0);
  }

 private:
  const CubeRule& rule_;
  int n_;
  Point points_;
  const FacePlan& plan_;
  const PartialCube& fixed_;
  const CornerVisitor& visit_;
  Cube cube_;
  std::vector<std::vector<Point>> candidates_;
  std::vector<Point> face_buf_;
  std::vector<Point> completions_;
  std::vector<Point> all_points_;

  const std::vector<Point>& options(Vertex v) {
    auto& out = candidates_[v];
    out.clear();
    if (!fixed_.empty() && fixed_[v]) {
      if (*fixed_[v] < points_) out.push_back(*fixed_[v]);
      return out;
    }
    if (n_ > 0 && rule_.candidates(std::span<const Point>(cube_.data(), v), n_, v, out)) return out;
    if (all_points_.size() != points_) {
      all_points_.resize(points_);
      std::iota(all_points_.begin(), all_points_.end(), 0);
    }
    return all_points_;
  }

  bool accept(Vertex v) {
    for (const auto& face : plan_.at[v]) {
      face_buf_.resize(face.size());
      for (std::size_t i = 0; i < face.size(); ++i) face_buf_[i] = cube_[face[i]];
      if (!rule_.contains_given_faces(face_buf_)) return false;
    }
    return true;
  }

  void recurse(Vertex v) {
    const Vertex top = full_vertex(n_);
    const auto& opts = options(v);
    if (v == top) {
      completions_.clear();
      for (Point p : opts) {
        charge_nodes();
        cube_[v] = p;
        if (accept(v)) completions_.push_back(p);
      }
      visit_(cube_, completions_);
      return;
    }
    // `opts` may alias all_points_, which is stable during recursion.
    for (std::size_t i = 0; i < opts.size(); ++i) {
      charge_nodes();
      cube_[v] = opts[i];
      if (accept(v)) recurse(v + 1);
    }
  }
};

class RestrictedSearch {
 public:
  RestrictedSearch(const CubeRule& rule, int n, const std::vector<std::vector<Point>>& allowed)
      : rule_(rule), n_(n), plan_(face_plan(n)), allowed_(allowed), cube_(vertex_count(n), 0),
        scratch_(vertex_count(n)) {}

  bool run() { return recurse(0); }
  const Cube& cube() const { return cube_; }

 private:
  const CubeRule& rule_;
  int n_;
  const FacePlan& plan_;
  const std::vector<std::vector<Point>>& allowed_;
  Cube cube_;
  std::vector<std::vector<Point>> scratch_;
  std::vector<Point> face_buf_;

  bool recurse(Vertex v) {
    if (v == cube_.size()) return true;
    const std::vector<Point>* opts = &allowed_[v];
    auto& cand = scratch_[v];
    if (n_ > 0 && rule_.candidates(std::span<const Point>(cube_.data(), v), n_, v, cand)) {
      std::vector<Point> both;
      std::set_intersection(cand.begin(), cand.end(), opts->begin(), opts->end(), std::back_inserter(both));
      cand.swap(both);
      opts = &cand;
    }
    for (Point p : *opts) {
      charge_nodes();
      cube_[v] = p;
      bool ok = true;
      for (const auto& face : plan_.at[v]) {
        face_buf_.resize(face.size());
        for (std::size_t i = 0; i < face.size(); ++i) face_buf_[i] = cube_[face[i]];
        if (!rule_.contains_given_faces(face_buf_)) {
          ok = false;
          break;
        }
      }
      if (ok && recurse(v + 1)) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<Cube> find_cube_in(const CubeRule& rule, int n, const std::vector<std::vector<Point>>& allowed) {
  if (allowed.size() != vertex_count(n)) throw std::invalid_argument("find_cube_in: wrong number of vertex lists");
  if (n == 0) {
    for (Point p : allowed[0]) {
      Point c[1] = {p};
      if (rule.contains(c)) return Cube{p};
    }
    return std::nullopt;
  }
  RestrictedSearch s(rule, n, allowed);
  if (s.run()) return s.cube();
  return std::nullopt;
}

void for_each_corner(const Cubespace& space, int n, const CornerVisitor& visit, const PartialCube& fixed) {
  CornerEnumerator e(space, n, fixed, visit);
  e.run();
}

void for_each_cube(const Cubespace& space, int n, const std::function<void(std::span<const Point>)>& visit,
                   const PartialCube& fixed) {
  Cube c;
  for_each_corner(
      space, n,
      [&](std::span<const Point> corner, std::span<const Point> completions) {
        if (completions.empty()) return;
        c.assign(corner.begin(), corner.end());
        for (Point p : completions) {
          c.back() = p;
          visit(c);
        }
      },
      fixed);
}

CubeSet enumerate_cubes(const Cubespace& space, int n, const PartialCube& fixed) {
  CubeSet set(n);
  for_each_cube(space, n, [&](std::span<const Point> c) { set.push_back(c); }, fixed);
  set.canonicalize();
  return set;
}

std::uint64_t count_cubes(const Cubespace& space, int n, const PartialCube& fixed) {
  std::uint64_t count = 0;
  for_each_corner(
      space, n, [&](std::span<const Point>, std::span<const Point> completions) { count += completions.size(); },
      fixed);
  return count;
}

Cube compose(std::span<const Point> cube, const CubeMorphism& phi) {
  if (vertex_count(phi.target_dim()) != cube.size())
    throw std::invalid_argument("compose: morphism target does not match cube dimension");
  Cube out(vertex_count(phi.source_dim()));
  for (Vertex w = 0; w < out.size(); ++w) out[w] = cube[phi(w)];
  return out;
}

Cube restrict_to_face(std::span<const Point> cube, const FaceDescriptor& face) {
  Cube out(vertex_count(face.dim()));
  for (Vertex l = 0; l < out.size(); ++l) out[l] = cube[face.vertex(l)];
  return out;
}

Cube map_cube(std::span<const Point> cube, std::span<const Point> point_map) {
  Cube out(cube.size());
  for (std::size_t i = 0; i < cube.size(); ++i) out[i] = point_map[cube[i]];
  return out;
}

// ---------------------------------------------------------------------------
// Axiom verification

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

Verdict AxiomReport::overall() const {
  Verdict out = Verdict::Pass;
  for (const AxiomResult* r : {&composition, &ergodicity, &gluing, &unique_closing}) {
    if (r->verdict == Verdict::Fail) return Verdict::Fail;
    if (r->verdict == Verdict::Indeterminate) out = Verdict::Indeterminate;
  }
  return out;
}

namespace {

void fail(AxiomResult& r, std::string witness) {
  if (r.verdict == Verdict::Fail) return;
  r.verdict = Verdict::Fail;
  r.witness = std::move(witness);
}

// Closure under a generating set of cube morphisms: automorphism generators,
// restriction to the face x_n = 0, the diagonal x_1 = x_2 and the degeneracy
// along a new coordinate. Together these generate every morphism between
// dimensions <= max_dim through intermediate dimensions <= max_dim.
class CompositionChecker {
 public:
  CompositionChecker(const Cubespace& space, int max_dim) : space_(space), max_dim_(max_dim) {
    for (int n = 0; n <= max_dim; ++n) {
      Level lvl;
      for (const auto& g : automorphism_generators(n)) lvl.autos.push_back({g.as_morphism(), {}});
      for (auto& a : lvl.autos) a.second = a.first.table();
      if (n >= 1) {
        lvl.face = make_face(n, Vertex{1} << (n - 1), 0).as_morphism();
        std::vector<CoordSymbol> c(n);
        c[0] = {CoordKind::Var, 0};
        for (int j = 1; j < n; ++j) c[j] = {CoordKind::Var, static_cast<std::uint8_t>(j - 1)};
        if (n >= 2) lvl.diagonal = CubeMorphism(n - 1, c);
      }
      if (n + 1 <= max_dim) {
        std::vector<CoordSymbol> c(n);
        for (int j = 0; j < n; ++j) c[j] = {CoordKind::Var, static_cast<std::uint8_t>(j)};
        lvl.degeneracy = CubeMorphism(n + 1, c);
      }
      levels_.push_back(std::move(lvl));
    }
  }

  // Returns an empty string when every generator keeps the cube inside C.
  std::string check(std::span<const Point> cube, bool top_check_for_autos) {
    const int n = cube_dimension(cube.size());
    const Level& lvl = levels_.at(n);
    for (const auto& [phi, table] : lvl.autos) {
      buf_.resize(table.size());
      for (Vertex w = 0; w < table.size(); ++w) buf_[w] = cube[table[w]];
      bool ok = top_check_for_autos ? space_.rule().contains_given_faces(buf_) : space_.rule().contains(buf_);
      if (!ok) return describe(cube, phi);
    }
    for (const auto* phi : {&lvl.face, &lvl.diagonal, &lvl.degeneracy}) {
      if (!*phi) continue;
      Cube img = compose(cube, **phi);
      if (!space_.rule().contains(img)) return describe(cube, **phi);
    }
    return {};
  }

 private:
  struct Level {
    std::vector<std::pair<CubeMorphism, std::vector<Vertex>>> autos;
    std::optional<CubeMorphism> face, diagonal, degeneracy;
  };
  const Cubespace& space_;
  int max_dim_;
  std::vector<Level> levels_;
  Cube buf_;

  std::string describe(std::span<const Point> cube, const CubeMorphism& phi) const {
    return "cube " + space_.format_cube(cube) + " composed with " + phi.to_string() + " gives " +
           space_.format_cube(compose(cube, phi)) + ", which is not a cube";
  }
};

}  // namespace

AxiomReport verify_axioms(const Cubespace& space, int k, int max_dim, int gluing_dim) {
  if (k < 0) throw std::invalid_argument("verify_axioms: step must be >= 0");
  if (gluing_dim < 0) gluing_dim = std::max(k + 2, 3);
  if (gluing_dim < k + 1) throw std::invalid_argument("verify_axioms: gluing dimension below k+1");
  if (max_dim < 1) throw std::invalid_argument("verify_axioms: max_dim must be >= 1");
  const int top = std::max(max_dim, gluing_dim);
  if (top > dimension_cap() || top > space.rule().max_dimension())
    throw std::out_of_range("verify_axioms: dimension " + std::to_string(top) + " exceeds capability");

  AxiomReport rep;
  rep.step = k;
  rep.max_dim = max_dim;
  rep.gluing_dim = gluing_dim;
  const auto* table_rule = dynamic_cast<const TableRule*>(&space.rule());
  const Point npoints = static_cast<Point>(space.size());

  try {
    CompositionChecker checker(space, max_dim);
    for (Point p = 0; p < npoints; ++p) {
      Point c[1] = {p};
      if (!space.rule().contains(c)) fail(rep.composition, "point " + space.label(p) + " is not a 0-cube");
      else if (auto w = checker.check(c, false); !w.empty()) fail(rep.composition, w);
    }
    for (int n = 1; n <= top; ++n) {
      const bool check_cubes = n <= max_dim && table_rule == nullptr;
      for_each_corner(space, n, [&](std::span<const Point> corner, std::span<const Point> completions) {
        if (n == 1 && completions.size() != npoints && rep.ergodicity.verdict != Verdict::Fail) {
          Point missing = 0;
          while (std::find(completions.begin(), completions.end(), missing) != completions.end()) ++missing;
          fail(rep.ergodicity, "pair (" + space.label(corner[0]) + "," + space.label(missing) + ") is not a 1-cube");
        }
        if (n <= gluing_dim && completions.empty()) {
          fail(rep.gluing, "corner " + space.format_cube(corner.first(corner.size() - 1)) +
                               " of dimension " + std::to_string(n) + " has no completion");
        }
        if (n == k + 1 && completions.size() > 1) {
          fail(rep.unique_closing, "corner " + space.format_cube(corner.first(corner.size() - 1)) + " closes with " +
                                       space.label(completions[0]) + " and " + space.label(completions[1]));
        }
        if (check_cubes && !completions.empty()) {
          Cube c(corner.begin(), corner.end());
          for (Point p : completions) {
            c.back() = p;
            ++rep.cubes_checked;
            if (rep.composition.verdict == Verdict::Fail) break;
            if (auto w = checker.check(c, true); !w.empty()) fail(rep.composition, w);
          }
        }
      });
      if (table_rule != nullptr && n <= max_dim && n < static_cast<int>(table_rule->tables().size())) {
        const CubeSet& set = table_rule->tables()[n];
        for (std::size_t i = 0; i < set.size() && rep.composition.verdict != Verdict::Fail; ++i) {
          charge_nodes();
          ++rep.cubes_checked;
          auto c = set[i];
          // every face of a table cube must itself be a table cube
          for (int d = 0; d < n && rep.composition.verdict != Verdict::Fail; ++d)
            for (const auto& face : face_vertex_lists(n, d)) {
              Cube f(face.size());
              for (std::size_t t = 0; t < face.size(); ++t) f[t] = c[face[t]];
              if (!space.rule().contains(f)) {
                fail(rep.composition, "face " + space.format_cube(f) + " of cube " + space.format_cube(c) +
                                          " is not a cube");
                break;
              }
            }
          if (auto w = checker.check(c, false); !w.empty()) fail(rep.composition, w);
        }
      }
    }
  } catch (const BudgetExceeded& e) {
    for (AxiomResult* r : {&rep.composition, &rep.ergodicity, &rep.gluing, &rep.unique_closing})
      if (r->verdict == Verdict::Pass) {
        r->verdict = Verdict::Indeterminate;
        r->witness = e.what();
      }
  }
  return rep;
}

std::vector<Point> complete_corner(const Cubespace& space, std::span<const Point> corner) {
  const int n = cube_dimension(corner.size() + 1);
  Cube c(corner.begin(), corner.end());
  c.push_back(0);
  for (Point p : corner)
    if (p >= space.size()) throw std::out_of_range("complete_corner: value is not a point");
  for (int j = 0; j < n; ++j) {
    auto face = restrict_to_face(c, make_face(n, Vertex{1} << j, 0));
    if (!space.is_cube(face))
      throw std::invalid_argument("complete_corner: face " + space.format_cube(face) + " is not a cube");
  }
  std::vector<Point> opts;
  const Vertex top = full_vertex(n);
  if (n == 0 || !space.rule().candidates(std::span<const Point>(c.data(), top), n, top, opts)) {
    opts.resize(space.size());
    std::iota(opts.begin(), opts.end(), 0);
  }
  std::vector<Point> out;
  for (Point p : opts) {
    charge_nodes();
    c[top] = p;
    if (space.is_cube(c)) out.push_back(p);
  }
  return out;
}

Cube concatenate(std::span<const Point> c1, std::span<const Point> c2, int axis) {
  if (c1.size() != c2.size()) throw std::invalid_argument("concatenate: dimension mismatch");
  const int n = cube_dimension(c1.size());
  if (n == 0) throw std::invalid_argument("concatenate: cubes must have dimension >= 1");
  if (axis < 0) axis = n - 1;
  if (axis >= n) throw std::invalid_argument("concatenate: axis out of range");
  const Vertex bit = Vertex{1} << axis;
  Cube out(c1.size());
  for (Vertex v = 0; v < c1.size(); ++v) {
    if (v & bit) continue;
    if (c1[v | bit] != c2[v]) throw std::invalid_argument("concatenate: cubes are not adjacent");
    out[v] = c1[v];
    out[v | bit] = c2[v | bit];
  }
  return out;
}

bool is_morphism(const Cubespace& source, const Cubespace& target, std::span<const Point> map, int max_dim,
                 std::string* witness) {
  if (map.size() != source.size()) throw std::invalid_argument("is_morphism: map has wrong length");
  for (Point p : map)
    if (p >= target.size()) throw std::out_of_range("is_morphism: image is not a point");
  for (int n = 0; n <= max_dim; ++n) {
    bool ok = true;
    for_each_cube(source, n, [&](std::span<const Point> c) {
      if (!ok) return;
      Cube img = map_cube(c, map);
      if (!target.is_cube(img)) {
        ok = false;
        if (witness) *witness = "cube " + source.format_cube(c) + " maps to non-cube " + target.format_cube(img);
      }
    });
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Isomorphism search

namespace {

class IsoSearch {
 public:
  IsoSearch(const Cubespace& a, const Cubespace& b, int max_dim) : a_(a), b_(b) {
    for (int n = 1; n <= max_dim; ++n) {
      sets_a_.push_back(enumerate_cubes(a, n));
      sets_b_.push_back(enumerate_cubes(b, n));
    }
    by_max_.resize(a.size());
    for (std::size_t d = 0; d < sets_a_.size(); ++d)
      for (std::size_t i = 0; i < sets_a_[d].size(); ++i) {
        auto c = sets_a_[d][i];
        Point m = *std::max_element(c.begin(), c.end());
        by_max_[m].push_back({d, i});
      }
    inv_a_ = invariants(a, sets_a_);
    inv_b_ = invariants(b, sets_b_);
  }

  std::optional<std::vector<Point>> run() {
    if (a_.size() != b_.size()) return std::nullopt;
    for (std::size_t d = 0; d < sets_a_.size(); ++d)
      if (sets_a_[d].size() != sets_b_[d].size()) return std::nullopt;
    auto sa = inv_a_, sb = inv_b_;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
    map_.assign(a_.size(), 0);
    used_.assign(b_.size(), false);
    if (recurse(0)) return map_;
    return std::nullopt;
  }

 private:
  const Cubespace& a_;
  const Cubespace& b_;
  std::vector<CubeSet> sets_a_, sets_b_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_max_;
  std::vector<std::vector<std::uint64_t>> inv_a_, inv_b_;
  std::vector<Point> map_;
  std::vector<bool> used_;

  static std::vector<std::vector<std::uint64_t>> invariants(const Cubespace& s, const std::vector<CubeSet>& sets) {
    std::vector<std::vector<std::uint64_t>> inv(s.size(), std::vector<std::uint64_t>(sets.size(), 0));
    for (std::size_t d = 0; d < sets.size(); ++d)
      for (std::size_t i = 0; i < sets[d].size(); ++i) {
        auto c = sets[d][i];
        // cubes per dimension starting at a point are preserved by isomorphisms
        ++inv[c[0]][d];
      }
    return inv;
  }

  bool recurse(Point p) {
    if (p == a_.size()) return true;
    for (Point q = 0; q < b_.size(); ++q) {
      if (used_[q] || inv_a_[p] != inv_b_[q]) continue;
      charge_nodes();
      map_[p] = q;
      bool ok = true;
      for (auto [d, i] : by_max_[p]) {
        Cube img = map_cube(sets_a_[d][i], map_);
        if (!sets_b_[d].contains(img)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used_[q] = true;
      if (recurse(p + 1)) return true;
      used_[q] = false;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<Point>> find_isomorphism(const Cubespace& a, const Cubespace& b, int max_dim) {
  if (a.size() != b.size()) return std::nullopt;
  IsoSearch search(a, b, max_dim);
  return search.run();
}

std::vector<std::vector<Point>> ergodic_components(const Cubespace& space) {
  std::vector<Point> parent(space.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Point x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for_each_cube(space, 1, [&](std::span<const Point> c) {
    Point a = find(c[0]), b = find(c[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  });
  std::vector<std::vector<Point>> comps;
  std::vector<int> index(space.size(), -1);
  for (Point p = 0; p < space.size(); ++p) {
    Point r = find(p);
    if (index[r] < 0) {
      index[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[index[r]].push_back(p);
  }
  return comps;
}

// ---------------------------------------------------------------------------
// Three-cubes

Point ThreeCube::point_count() const {
  Point c = 1;
  for (int j = 0; j < n; ++j) c *= 3;
  return c;
}

std::vector<int> ThreeCube::coordinates(Point p) const {
  std::vector<int> t(n);
  for (int j = 0; j < n; ++j) {
    t[j] = static_cast<int>(p % 3) - 1;
    p /= 3;
  }
  return t;
}

namespace {

Point encode_three(const std::vector<int>& t) {
  Point p = 0, scale = 1;
  for (int x : t) {
    p += static_cast<Point>(x + 1) * scale;
    scale *= 3;
  }
  return p;
}

}  // namespace

ThreeCube three_cube_maps(int n) {
  if (n < 0 || n > dimension_cap()) throw std::out_of_range("three_cube_maps: dimension exceeds cap");
  ThreeCube t;
  t.n = n;
  for (Point p = 0; p < t.point_count(); ++p) {
    auto c = t.coordinates(p);
    std::string s = "(";
    for (int j = 0; j < n; ++j) s += (j ? "," : "") + std::to_string(c[j]);
    t.labels.push_back(s + ")");
  }
  for (Vertex v = 0; v < vertex_count(n); ++v) {
    std::vector<Point> psi(vertex_count(n));
    for (Vertex w = 0; w < vertex_count(n); ++w) {
      std::vector<int> c(n);
      for (int j = 0; j < n; ++j) {
        int vj = (v >> j) & 1U, wj = (w >> j) & 1U;
        c[j] = (1 - 2 * vj) * (1 - wj);
      }
      psi[w] = encode_three(c);
    }
    t.omega.push_back(psi[0]);
    t.psi.push_back(std::move(psi));
  }
  return t;
}

namespace {

class ThreeCubeRule final : public CubeRule {
 public:
  explicit ThreeCubeRule(ThreeCube t) : t_(std::move(t)) {}
  std::size_t point_count() const override { return t_.point_count(); }
  std::string kind() const override { return "three-cube"; }

  bool contains(std::span<const Point> cube) const override {
    const int n = t_.n;
    std::vector<Vertex> pre(cube.size());
    for (Vertex v = 0; v < vertex_count(n); ++v) {
      bool inside = true;
      for (std::size_t i = 0; i < cube.size() && inside; ++i) {
        auto c = t_.coordinates(cube[i]);
        Vertex w = 0;
        for (int j = 0; j < n; ++j) {
          int s = 1 - 2 * static_cast<int>((v >> j) & 1U);
          if (c[j] == 0) w |= Vertex{1} << j;
          else if (c[j] != s) inside = false;
        }
        pre[i] = w;
      }
      if (inside && morphism_from_table(pre, n)) return true;
    }
    return false;
  }

 private:
  ThreeCube t_;
};

}  // namespace

Cubespace three_cube_space(int n) {
  auto t = three_cube_maps(n);
  auto labels = t.labels;
  return Cubespace(std::make_shared<ThreeCubeRule>(std::move(t)), std::move(labels), std::nullopt,
                   "T" + std::to_string(n));
}

FinitePattern point_pattern() { return {1, {Cube{0}}, {"*"}}; }

FinitePattern discrete_cube_pattern(int n) {
  FinitePattern p;
  p.point_count = vertex_count(n);
  Cube id(p.point_count);
  std::iota(id.begin(), id.end(), 0);
  p.generating_cubes.push_back(std::move(id));
  for (Vertex v = 0; v < p.point_count; ++v) p.labels.push_back(vertex_string(v, n));
  return p;
}

FinitePattern three_cube_pattern(int n) {
  auto t = three_cube_maps(n);
  FinitePattern p;
  p.point_count = t.point_count();
  p.generating_cubes = t.psi;
  p.labels = t.labels;
  return p;
}

HomSet hom_set(const FinitePattern& pattern, const Cubespace& target, const PartialCube& constraints) {
  const std::size_t np = pattern.point_count;
  if (!constraints.empty() && constraints.size() != np)
    throw std::invalid_argument("hom_set: constraint list has wrong length");
  std::vector<std::vector<std::size_t>> by_max(np);
  for (std::size_t g = 0; g < pattern.generating_cubes.size(); ++g) {
    const auto& c = pattern.generating_cubes[g];
    by_max[*std::max_element(c.begin(), c.end())].push_back(g);
  }
  HomSet out;
  std::vector<Point> m(np, 0);
  Cube img;
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == np) {
      out.maps.push_back(m);
      return;
    }
    Point lo = 0, hi = static_cast<Point>(target.size());
    if (!constraints.empty() && constraints[p]) {
      lo = *constraints[p];
      hi = lo + 1;
      if (lo >= target.size()) throw std::out_of_range("hom_set: constraint is not a point");
    }
    for (Point q = lo; q < hi; ++q) {
      charge_nodes();
      m[p] = q;
      bool ok = true;
      for (std::size_t g : by_max[p]) {
        img = map_cube(pattern.generating_cubes[g], m);
        if (!target.is_cube(img)) {
          ok = false;
          break;
        }
      }
      if (ok) rec(p + 1);
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// Generic rules

bool all_faces_of_dim(std::span<const Point> cube, int face_dim,
                      const std::function<bool(std::span<const Point>)>& test) {
  const int n = cube_dimension(cube.size());
  std::vector<Point> buf;
  for (const auto& face : face_vertex_lists(n, face_dim)) {
    buf.resize(face.size());
    for (std::size_t i = 0; i < face.size(); ++i) buf[i] = cube[face[i]];
    if (!test(buf)) return false;
  }
  return true;
}

TableRule::TableRule(std::size_t points, std::vector<CubeSet> tables, std::optional<int> step)
    : points_(points), tables_(std::move(tables)), step_(step) {
  for (std::size_t n = 0; n < tables_.size(); ++n) {
    if (tables_[n].dim() != static_cast<int>(n)) throw std::invalid_argument("TableRule: table dimension mismatch");
    tables_[n].canonicalize();
    for (Point p : tables_[n].data())
      if (p >= points_) throw std::out_of_range("TableRule: cube value is not a point");
  }
}

int TableRule::max_dimension() const {
  const int bound = static_cast<int>(tables_.size()) - 1;
  if (step_ && *step_ + 1 <= bound) return dimension_cap();
  return bound;
}

bool TableRule::contains(std::span<const Point> cube) const {
  const int n = cube_dimension(cube.size());
  if (n < static_cast<int>(tables_.size())) return tables_[n].contains(cube);
  if (!step_ || *step_ + 1 >= static_cast<int>(tables_.size()))
    throw std::out_of_range("TableRule: dimension beyond table bound");
  const int d = *step_ + 1;
  return all_faces_of_dim(cube, d, [&](std::span<const Point> f) { return tables_[d].contains(f); });
}

Cubespace table_space(std::vector<std::string> labels, std::vector<CubeSet> tables, std::optional<int> step) {
  const std::size_t n = labels.size();
  return Cubespace(std::make_shared<TableRule>(n, std::move(tables), step), std::move(labels), step, "table");
}

std::vector<CubeSet> cube_tables(const Cubespace& space, int dim_bound) {
  std::vector<CubeSet> out;
  for (int n = 0; n <= dim_bound; ++n) out.push_back(enumerate_cubes(space, n));
  return out;
}

namespace {

class SubspaceRule final : public CubeRule {
 public:
  SubspaceRule(std::shared_ptr<const CubeRule> ambient, std::vector<Point> points)
      : ambient_(std::move(ambient)), points_(std::move(points)), inverse_(ambient_->point_count(), kNone) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] >= inverse_.size()) throw std::out_of_range("subspace: point out of range");
      if (inverse_[points_[i]] != kNone) throw std::invalid_argument("subspace: repeated point");
      inverse_[points_[i]] = static_cast<Point>(i);
    }
  }
  std::size_t point_count() const override { return points_.size(); }
  std::string kind() const override { return "subspace"; }
  int max_dimension() const override { return ambient_->max_dimension(); }

  bool contains(std::span<const Point> cube) const override { return ambient_->contains(lift(cube)); }
  bool contains_given_faces(std::span<const Point> cube) const override {
    return ambient_->contains_given_faces(lift(cube));
  }
  bool candidates(std::span<const Point> partial, int n, Vertex v, std::vector<Point>& out) const override {
    std::vector<Point> amb;
    if (!ambient_->candidates(lift(partial), n, v, amb)) return false;
    out.clear();
    for (Point a : amb)
      if (inverse_[a] != kNone) out.push_back(inverse_[a]);
    std::sort(out.begin(), out.end());
    return true;
  }

 private:
  static constexpr Point kNone = ~Point{0};
  std::shared_ptr<const CubeRule> ambient_;
  std::vector<Point> points_;
  std::vector<Point> inverse_;

  Cube lift(std::span<const Point> cube) const {
    Cube out(cube.size());
    for (std::size_t i = 0; i < cube.size(); ++i) out[i] = points_[cube[i]];
    return out;
  }
};

}  // namespace

Cubespace subspace(const Cubespace& ambient, std::vector<Point> points, std::string name) {
  std::vector<std::string> labels;
  for (Point p : points) labels.push_back(ambient.label(p));
  return Cubespace(std::make_shared<SubspaceRule>(ambient.rule_ptr(), std::move(points)), std::move(labels),
                   std::nullopt, std::move(name));
}

}  // namespace nilspace

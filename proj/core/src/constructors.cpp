#include "nilspace/constructors.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "nilspace/budget.hpp"

namespace nilspace {

namespace {

using Element = FiniteGroup::Element;

// Deposits the bits of `local` into the positions of the set bits of `mask`.
Vertex deposit(Vertex local, Vertex mask) {
  Vertex out = 0;
  for (int t = 0; mask != 0; mask &= mask - 1, ++t)
    if ((local >> t) & 1U) out |= mask & (~mask + 1);
  return out;
}

const std::vector<Vertex>& cached_gray_sequence(int d) {
  constexpr int kMax = 21;
  static std::array<std::once_flag, kMax> once;
  static std::array<std::vector<Vertex>, kMax> seqs;
  if (d < 0 || d >= kMax) throw std::out_of_range("gray sequence dimension");
  std::call_once(once[d], [d] { seqs[d] = gray_sequence(d); });
  return seqs[d];
}

class PointRule final : public CubeRule {
 public:
  std::size_t point_count() const override { return 1; }
  std::string kind() const override { return "point"; }
  bool contains(std::span<const Point> cube) const override {
    return std::all_of(cube.begin(), cube.end(), [](Point p) { return p == 0; });
  }
};

// ---------------------------------------------------------------------------
// D_k(A)

class DegreeRule final : public CubeRule {
 public:
  DegreeRule(FinAbelianGroup a, int k) : a_(std::move(a)), k_(k) {}

  std::size_t point_count() const override { return a_.order(); }
  std::string kind() const override { return "degree"; }

  bool contains(std::span<const Point> cube) const override {
    const int n = cube_dimension(cube.size());
    if (n <= k_) return true;
    return all_faces_of_dim(cube, k_ + 1, [&](std::span<const Point> f) { return weight(f) == 0; });
  }

  bool contains_given_faces(std::span<const Point> cube) const override {
    const int n = cube_dimension(cube.size());
    if (n != k_ + 1) return true;
    return weight(cube) == 0;
  }

  bool candidates(std::span<const Point> partial, int, Vertex v, std::vector<Point>& out) const override {
    if (weight_of(v) < k_ + 1) return false;
    Vertex s = 0;
    for (Vertex rest = v; weight_of(s) < k_ + 1; rest &= rest - 1) s |= rest & (~rest + 1);
    const Vertex base = v & ~s;
    // x (-1)^(k+1) + sum_{sub < S} (-1)^|sub| f(u_sub) = 0
    FinAbelianGroup::Element sum = 0;
    for (Vertex sub = (s - 1) & s;; sub = (sub - 1) & s) {
      Point val = partial[base | sub];
      sum = weight_of(sub) % 2 == 0 ? a_.add(sum, val) : a_.sub(sum, val);
      if (sub == 0) break;
    }
    out.assign(1, k_ % 2 == 0 ? sum : a_.neg(sum));
    return true;
  }

 private:
  FinAbelianGroup a_;
  int k_;

  FinAbelianGroup::Element weight(std::span<const Point> f) const {
    FinAbelianGroup::Element w = 0;
    for (Vertex v = 0; v < f.size(); ++v) w = weight_of(v) % 2 == 0 ? a_.add(w, f[v]) : a_.sub(w, f[v]);
    return w;
  }
};

// ---------------------------------------------------------------------------
// Group cubes

class GrayRule final : public CubeRule {
 public:
  GrayRule(FiniteGroup g, Filtration f) : g_(std::move(g)), f_(std::move(f)) {}

  std::size_t point_count() const override { return g_.order(); }
  std::string kind() const override { return "graycode"; }

  bool contains(std::span<const Point> cube) const override {
    const int n = cube_dimension(cube.size());
    for (int d = 1; d <= n; ++d)
      for (const auto& face : face_vertex_lists(n, d))
        if (!f_.in_level(d, gray_product(cube, face))) return false;
    return true;
  }

  bool contains_given_faces(std::span<const Point> cube) const override {
    const int n = cube_dimension(cube.size());
    if (n == 0) return true;
    const auto& seq = cached_gray_sequence(n);
    Element p = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) p = g_.mul(p, i % 2 == 0 ? g_.inv(cube[seq[i]]) : cube[seq[i]]);
    return f_.in_level(n, p);
  }

  bool candidates(std::span<const Point> partial, int, Vertex v, std::vector<Point>& out) const override {
    const int d = weight_of(v);
    if (d == 0) return false;
    const auto& level = f_.level(d);
    if (level.size() == g_.order()) return false;
    const auto& seq = cached_gray_sequence(d);
    const Vertex top = full_vertex(d);
    Element before = 0, after = 0;
    bool seen = false;
    int exponent = 1;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (seq[i] == top) {
        seen = true;
        exponent = i % 2 == 0 ? -1 : 1;
        continue;
      }
      Element x = partial[deposit(seq[i], v)];
      if (i % 2 == 0) x = g_.inv(x);
      if (seen) after = g_.mul(after, x);
      else before = g_.mul(before, x);
    }
    // before * x^e * after in G_d  <=>  x^e in h G_d with h = before^-1 after^-1
    Element h = g_.mul(g_.inv(before), g_.inv(after));
    if (exponent < 0) h = g_.inv(h);
    out.clear();
    for (Element z : level) out.push_back(g_.mul(h, z));
    std::sort(out.begin(), out.end());
    return true;
  }

 private:
  FiniteGroup g_;
  Filtration f_;

  Element gray_product(std::span<const Point> cube, const std::vector<Vertex>& face) const {
    const int d = cube_dimension(face.size());
    const auto& seq = cached_gray_sequence(d);
    Element p = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      Element x = cube[face[seq[i]]];
      p = g_.mul(p, i % 2 == 0 ? g_.inv(x) : x);
    }
    return p;
  }
};

// Conjugation-closed generating set of a normal subgroup.
std::vector<Element> normal_generators(const FiniteGroup& g, const std::vector<Element>& subgroup) {
  std::vector<Element> gens;
  std::vector<Element> span{0};
  for (Element x : subgroup) {
    if (std::binary_search(span.begin(), span.end(), x)) continue;
    for (Element c : g.conjugacy_class(x))
      if (std::find(gens.begin(), gens.end(), c) == gens.end()) gens.push_back(c);
    span = g.generated_subgroup(gens);
  }
  return gens;
}

std::uint64_t key_of(std::span<const Point> cube, std::uint64_t base) {
  std::uint64_t key = 0;
  for (std::size_t v = cube.size(); v-- > 1;) key = key * base + cube[v];
  return key;
}

__extension__ using WideKey = unsigned __int128;

bool key_fits(std::uint64_t base, int n) {
  WideKey cap = 1;
  for (Vertex v = 1; v < vertex_count(n); ++v) {
    cap *= base;
    if (cap > static_cast<WideKey>(UINT64_MAX)) return false;
  }
  return true;
}

std::vector<std::uint64_t> generative_closure(const FiniteGroup& g, const Filtration& filt, int n) {
  const std::uint64_t base = g.order();
  if (!key_fits(base, n))
    throw std::out_of_range("generative cubes: dimension " + std::to_string(n) + " too large for this group");
  struct Move {
    std::vector<Vertex> face;
    Element g;
  };
  std::vector<Move> moves;
  for (int i = 1; i <= n; ++i) {
    const auto gens = normal_generators(g, filt.level(i));
    for (const auto& face : face_vertex_lists(n, n - i))
      for (Element x : gens) moves.push_back({face, x});
  }
  std::unordered_set<std::uint64_t> seen{0};
  std::deque<std::uint64_t> frontier{0};
  Cube f(vertex_count(n)), h(vertex_count(n));
  while (!frontier.empty()) {
    std::uint64_t key = frontier.front();
    frontier.pop_front();
    f[0] = 0;
    for (Vertex v = 1; v < f.size(); ++v) {
      f[v] = static_cast<Point>(key % base);
      key /= base;
    }
    for (const auto& m : moves) {
      charge_nodes();
      h = f;
      for (Vertex v : m.face) h[v] = g.mul(m.g, h[v]);
      const Element a = g.inv(h[0]);
      for (auto& x : h) x = g.mul(a, x);
      const std::uint64_t k2 = key_of(h, base);
      if (seen.insert(k2).second) frontier.push_back(k2);
    }
  }
  std::vector<std::uint64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

class GenerativeRule final : public CubeRule {
 public:
  GenerativeRule(FiniteGroup g, Filtration f) : g_(std::move(g)), f_(std::move(f)) {
    for (int n = 0; n <= 3 && n <= dimension_cap() && key_fits(g_.order(), n); ++n)
      sets_.push_back(generative_closure(g_, f_, n));
  }

  std::size_t point_count() const override { return g_.order(); }
  std::string kind() const override { return "generative"; }

  int max_dimension() const override {
    const int top = static_cast<int>(sets_.size()) - 1;
    return f_.degree() + 1 <= top ? dimension_cap() : top;
  }

  bool contains(std::span<const Point> cube) const override {
    const int n = cube_dimension(cube.size());
    if (n < static_cast<int>(sets_.size())) {
      const Element a = g_.inv(cube[0]);
      Cube h(cube.size());
      for (std::size_t v = 0; v < h.size(); ++v) h[v] = g_.mul(a, cube[v]);
      return std::binary_search(sets_[n].begin(), sets_[n].end(), key_of(h, g_.order()));
    }
    const int d = f_.degree() + 1;
    if (d >= static_cast<int>(sets_.size())) throw std::out_of_range("generative cubes: dimension beyond closure");
    return all_faces_of_dim(cube, d, [&](std::span<const Point> face) { return contains(face); });
  }

 private:
  FiniteGroup g_;
  Filtration f_;
  std::vector<std::vector<std::uint64_t>> sets_;
};

// ---------------------------------------------------------------------------
// Lift rules (cosets and general quotients)

class LiftRule final : public CubeRule {
 public:
  LiftRule(std::shared_ptr<const CubeRule> ambient, std::vector<Point> class_of, std::size_t classes,
           std::vector<Point> origin_of, std::string kind)
      : ambient_(std::move(ambient)), class_of_(std::move(class_of)), fibers_(classes),
        origin_of_(std::move(origin_of)), kind_(std::move(kind)) {
    for (Point x = 0; x < class_of_.size(); ++x) {
      if (class_of_[x] >= classes) throw std::out_of_range("quotient: class index out of range");
      fibers_[class_of_[x]].push_back(x);
    }
    for (const auto& f : fibers_)
      if (f.empty()) throw std::invalid_argument("quotient: class map is not surjective");
  }

  std::size_t point_count() const override { return fibers_.size(); }
  std::string kind() const override { return kind_; }
  int max_dimension() const override { return ambient_->max_dimension(); }

  bool contains(std::span<const Point> cube) const override {
    std::vector<std::vector<Point>> allowed(cube.size());
    for (std::size_t v = 0; v < cube.size(); ++v) {
      if (cube[v] >= fibers_.size()) return false;
      allowed[v] = fibers_[cube[v]];
    }
    // right-invariant structures: a lift may start at a fixed representative
    if (!origin_of_.empty()) allowed[0] = {origin_of_[cube[0]]};
    return find_cube_in(*ambient_, cube_dimension(cube.size()), allowed).has_value();
  }

 private:
  std::shared_ptr<const CubeRule> ambient_;
  std::vector<Point> class_of_;
  std::vector<std::vector<Point>> fibers_;
  std::vector<Point> origin_of_;
  std::string kind_;
};

// ---------------------------------------------------------------------------
// Products, arrows, derived spaces

class ProductRule final : public CubeRule {
 public:
  ProductRule(std::shared_ptr<const CubeRule> a, std::shared_ptr<const CubeRule> b)
      : a_(std::move(a)), b_(std::move(b)), nb_(static_cast<Point>(b_->point_count())) {}

  std::size_t point_count() const override { return a_->point_count() * b_->point_count(); }
  std::string kind() const override { return "product"; }
  int max_dimension() const override { return std::min(a_->max_dimension(), b_->max_dimension()); }

  bool contains(std::span<const Point> cube) const override {
    Cube x, y;
    split(cube, x, y);
    return a_->contains(x) && b_->contains(y);
  }
  bool contains_given_faces(std::span<const Point> cube) const override {
    Cube x, y;
    split(cube, x, y);
    return a_->contains_given_faces(x) && b_->contains_given_faces(y);
  }
  bool candidates(std::span<const Point> partial, int n, Vertex v, std::vector<Point>& out) const override {
    Cube x, y;
    split(partial, x, y);
    std::vector<Point> ca, cb;
    const bool ra = a_->candidates(x, n, v, ca);
    const bool rb = b_->candidates(y, n, v, cb);
    if (!ra && !rb) return false;
    if (!ra) {
      ca.resize(a_->point_count());
      std::iota(ca.begin(), ca.end(), 0);
    }
    if (!rb) {
      cb.resize(nb_);
      std::iota(cb.begin(), cb.end(), 0);
    }
    out.clear();
    for (Point p : ca)
      for (Point q : cb) out.push_back(p * nb_ + q);
    return true;
  }

 private:
  std::shared_ptr<const CubeRule> a_, b_;
  Point nb_;

  void split(std::span<const Point> cube, Cube& x, Cube& y) const {
    x.resize(cube.size());
    y.resize(cube.size());
    for (std::size_t i = 0; i < cube.size(); ++i) {
      x[i] = cube[i] / nb_;
      y[i] = cube[i] % nb_;
    }
  }
};

class ArrowRule final : public CubeRule {
 public:
  ArrowRule(std::shared_ptr<const CubeRule> base, std::vector<std::pair<Point, Point>> pairs, int i)
      : base_(std::move(base)), pairs_(std::move(pairs)), i_(i) {}

  std::size_t point_count() const override { return pairs_.size(); }
  std::string kind() const override { return "arrow"; }
  int max_dimension() const override { return std::max(0, std::min(base_->max_dimension(), dimension_cap()) - i_); }

  bool contains(std::span<const Point> cube) const override {
    Cube f1(cube.size()), f2(cube.size());
    for (std::size_t v = 0; v < cube.size(); ++v) {
      f1[v] = pairs_[cube[v]].first;
      f2[v] = pairs_[cube[v]].second;
    }
    return base_->contains(arrow_cube(f1, f2, i_));
  }

 private:
  std::shared_ptr<const CubeRule> base_;
  std::vector<std::pair<Point, Point>> pairs_;
  int i_;
};

class DerivedRule final : public CubeRule {
 public:
  DerivedRule(std::shared_ptr<const CubeRule> base, Point x) : base_(std::move(base)), x_(x) {}

  std::size_t point_count() const override { return base_->point_count(); }
  std::string kind() const override { return "derived"; }
  int max_dimension() const override { return std::max(0, std::min(base_->max_dimension(), dimension_cap()) - 1); }

  bool contains(std::span<const Point> cube) const override { return base_->contains(lift(cube)); }
  bool candidates(std::span<const Point> partial, int n, Vertex v, std::vector<Point>& out) const override {
    Cube g(vertex_count(n + 1), x_);
    for (Vertex u = 0; u < v; ++u) g[u | (Vertex{1} << n)] = partial[u];
    return base_->candidates(std::span<const Point>(g.data(), v | (Vertex{1} << n)), n + 1, v | (Vertex{1} << n),
                             out);
  }

 private:
  std::shared_ptr<const CubeRule> base_;
  Point x_;

  Cube lift(std::span<const Point> cube) const {
    Cube g(cube.size() * 2, x_);
    std::copy(cube.begin(), cube.end(), g.begin() + static_cast<std::ptrdiff_t>(cube.size()));
    return g;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

Cubespace point_space() { return Cubespace(std::make_shared<PointRule>(), {"*"}, 0, "point"); }

Cubespace degree_space(const FinAbelianGroup& a, int k) {
  if (k < 1) throw std::invalid_argument("degree_space: k must be >= 1");
  std::vector<std::string> labels;
  for (FinAbelianGroup::Element e = 0; e < a.order(); ++e) labels.push_back(a.element_label(e));
  return Cubespace(std::make_shared<DegreeRule>(a, k), std::move(labels), k,
                   "D" + std::to_string(k) + "(" + a.to_string() + ")");
}

std::string to_string(GroupCubeMode mode) { return mode == GroupCubeMode::Generative ? "generative" : "graycode"; }

Cubespace group_space(const FiniteGroup& g, const Filtration& filt, GroupCubeMode mode) {
  if (filt.group_order() != g.order()) throw std::invalid_argument("group_space: filtration belongs to another group");
  std::shared_ptr<const CubeRule> rule;
  if (mode == GroupCubeMode::GrayCode)
    rule = std::make_shared<GrayRule>(g, filt);
  else
    rule = std::make_shared<GenerativeRule>(g, filt);
  return Cubespace(rule, g.labels(), filt.degree(), g.name().empty() ? "group" : g.name());
}

std::vector<std::uint64_t> generative_cube_keys(const FiniteGroup& g, const Filtration& filt, int n) {
  if (n < 0 || n > dimension_cap()) throw std::out_of_range("generative_cube_keys: dimension");
  return generative_closure(g, filt, n);
}

std::vector<std::uint64_t> graycode_cube_keys(const FiniteGroup& g, const Filtration& filt, int n) {
  if (!key_fits(g.order(), n)) throw std::out_of_range("graycode_cube_keys: dimension too large for this group");
  Cubespace s = group_space(g, filt, GroupCubeMode::GrayCode);
  PartialCube fixed(vertex_count(n));
  fixed[0] = 0;
  std::vector<std::uint64_t> out;
  for_each_cube(s, n, [&](std::span<const Point> c) { out.push_back(key_of(c, g.order())); }, fixed);
  std::sort(out.begin(), out.end());
  return out;
}

Cubespace coset_space(const FiniteGroup& g, const Filtration& filt, const std::vector<FiniteGroup::Element>& gamma_gens,
                      FiniteGroup::Element base) {
  for (Element x : gamma_gens)
    if (x >= g.order()) throw std::out_of_range("coset_space: generator is not a group element");
  if (base >= g.order()) throw std::out_of_range("coset_space: base point is not a group element");
  const auto gamma = g.generated_subgroup(gamma_gens);
  // coset of x is x Gamma; classes are numbered by least element
  std::vector<Point> class_of(g.order(), ~Point{0});
  std::vector<Point> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (class_of[x] != ~Point{0}) continue;
    for (Element y : gamma) class_of[g.mul(x, y)] = static_cast<Point>(reps.size());
    reps.push_back(x);
  }
  // f(v) = f'(v) x Gamma: relabel group elements by right multiplication with base
  std::vector<Point> cls(g.order());
  for (Element y = 0; y < g.order(); ++y) cls[y] = class_of[g.mul(y, base)];
  std::vector<Point> origin(reps.size());
  for (Element y = g.order(); y-- > 0;) origin[cls[y]] = y;
  std::vector<std::string> labels;
  for (Element r : reps) labels.push_back(g.label(r) + "G");
  auto rule = std::make_shared<LiftRule>(std::make_shared<GrayRule>(g, filt), std::move(cls), reps.size(),
                                         std::move(origin), "cosets");
  return Cubespace(rule, std::move(labels), filt.degree(), "cosets");
}

Cubespace product(const Cubespace& n1, const Cubespace& n2) {
  std::vector<std::string> labels;
  for (const auto& a : n1.labels())
    for (const auto& b : n2.labels()) labels.push_back("(" + a + "," + b + ")");
  std::optional<int> step;
  if (n1.claimed_step() && n2.claimed_step()) step = std::max(*n1.claimed_step(), *n2.claimed_step());
  return Cubespace(std::make_shared<ProductRule>(n1.rule_ptr(), n2.rule_ptr()), std::move(labels), step,
                   n1.name() + "x" + n2.name());
}

Cube arrow_cube(std::span<const Point> f1, std::span<const Point> f2, int i) {
  if (f1.size() != f2.size()) throw std::invalid_argument("arrow_cube: dimension mismatch");
  const int n = cube_dimension(f1.size());
  const Vertex ones = full_vertex(i);
  Cube g(vertex_count(n + i));
  for (Vertex w = 0; w <= ones; ++w)
    for (Vertex v = 0; v < f1.size(); ++v) g[v | (w << n)] = w == ones ? f2[v] : f1[v];
  return g;
}

std::vector<std::pair<Point, Point>> arrow_pairs(const Cubespace& n, int i) {
  if (i < 1) throw std::invalid_argument("arrow_space: i must be >= 1");
  std::vector<std::pair<Point, Point>> pairs;
  for (Point x = 0; x < n.size(); ++x)
    for (Point y = 0; y < n.size(); ++y) {
      Point a[1] = {x}, b[1] = {y};
      if (n.is_cube(arrow_cube(a, b, i))) pairs.emplace_back(x, y);
    }
  return pairs;
}

Cubespace arrow_space(const Cubespace& n, int i) {
  auto pairs = arrow_pairs(n, i);
  std::vector<std::string> labels;
  for (auto [x, y] : pairs) labels.push_back("(" + n.label(x) + "," + n.label(y) + ")");
  std::optional<int> step;
  if (n.claimed_step()) step = std::max(0, *n.claimed_step() - i);
  return Cubespace(std::make_shared<ArrowRule>(n.rule_ptr(), std::move(pairs), i), std::move(labels), step,
                   "arrow" + std::to_string(i) + "(" + n.name() + ")");
}

Cubespace derived_at(const Cubespace& n, Point x) {
  if (x >= n.size()) throw std::out_of_range("derived_at: base point is not a point");
  std::optional<int> step;
  if (n.claimed_step()) step = std::max(0, *n.claimed_step() - 1);
  return Cubespace(std::make_shared<DerivedRule>(n.rule_ptr(), x), n.labels(), step,
                   "d_" + n.label(x) + "(" + n.name() + ")");
}

Cubespace quotient_space(const Cubespace& n, std::vector<Point> class_of, std::vector<std::string> labels,
                         std::string name) {
  if (class_of.size() != n.size()) throw std::invalid_argument("quotient_space: class map has wrong length");
  const std::size_t classes = labels.size();
  auto rule = std::make_shared<LiftRule>(n.rule_ptr(), std::move(class_of), classes, std::vector<Point>{}, "quotient");
  return Cubespace(rule, std::move(labels), std::nullopt, std::move(name));
}

}  // namespace nilspace

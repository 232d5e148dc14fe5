#include "nilspace/extension.hpp"

#include <algorithm>
#include <stdexcept>

#include "nilspace/cohomology.hpp"

namespace nilspace {

namespace {

class ExtensionRule final : public CubeRule {
 public:
  explicit ExtensionRule(Cocycle rho)
      : rho_(std::move(rho)), base_(rho_.base.rule_ptr()), a_(rho_.group), k_(rho_.degree),
        na_(static_cast<Point>(a_.order())) {}

  std::size_t point_count() const override { return base_->point_count() * a_.order(); }
  std::string kind() const override { return "extension"; }
  int max_dimension() const override { return base_->max_dimension(); }

  bool contains(std::span<const Point> cube) const override {
    Cube x;
    std::vector<FinAbelianGroup::Element> a;
    split(cube, x, a);
    if (!base_->contains(x)) return false;
    const int n = cube_dimension(cube.size());
    if (n < k_ + 1) return true;
    for (const auto& face : face_vertex_lists(n, k_ + 1))
      if (!face_ok(x, a, face)) return false;
    return true;
  }

  bool contains_given_faces(std::span<const Point> cube) const override {
    Cube x;
    std::vector<FinAbelianGroup::Element> a;
    split(cube, x, a);
    if (!base_->contains_given_faces(x)) return false;
    if (cube_dimension(cube.size()) != k_ + 1) return true;
    std::vector<Vertex> all(cube.size());
    for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
    return face_ok(x, a, all);
  }

  bool candidates(std::span<const Point> partial, int n, Vertex v, std::vector<Point>& out) const override {
    Cube x;
    std::vector<FinAbelianGroup::Element> a;
    split(partial, x, a);
    std::vector<Point> bc;
    const bool restricted = base_->candidates(x, n, v, bc);
    if (weight_of(v) < k_ + 1) {
      if (!restricted) return false;
      out.clear();
      for (Point b : bc)
        for (Point t = 0; t < na_; ++t) out.push_back(b * na_ + t);
      return true;
    }
    if (!restricted) {
      bc.resize(base_->point_count());
      for (Point b = 0; b < bc.size(); ++b) bc[b] = b;
    }
    Vertex s = 0;
    for (Vertex rest = v; weight_of(s) < k_ + 1; rest &= rest - 1) s |= rest & (~rest + 1);
    const Vertex low = v & ~s;
    FinAbelianGroup::Element sum = 0;
    Cube face(vertex_count(k_ + 1));
    for (Vertex sub = (s - 1) & s;; sub = (sub - 1) & s) {
      sum = weight_of(sub) % 2 == 0 ? a_.add(sum, a[low | sub]) : a_.sub(sum, a[low | sub]);
      if (sub == 0) break;
    }
    // local face vertex l corresponds to low | deposit(l, s)
    std::vector<Vertex> local(face.size());
    for (Vertex l = 0; l < face.size(); ++l) {
      Vertex u = low, m = s;
      for (int t = 0; m != 0; m &= m - 1, ++t)
        if ((l >> t) & 1U) u |= m & (~m + 1);
      local[l] = u;
    }
    out.clear();
    for (Point b : bc) {
      for (Vertex l = 0; l + 1 < face.size(); ++l) face[l] = x[local[l]];
      face.back() = b;
      auto idx = rho_.cubes->index_of(face);
      if (!idx) continue;
      // (-1)^(k+1) a(v) = rho - sum
      FinAbelianGroup::Element t = a_.sub(rho_.values[*idx], sum);
      if (k_ % 2 == 0) t = a_.neg(t);
      out.push_back(b * na_ + t);
    }
    return true;
  }

 private:
  Cocycle rho_;
  std::shared_ptr<const CubeRule> base_;
  FinAbelianGroup a_;
  int k_;
  Point na_;

  void split(std::span<const Point> cube, Cube& x, std::vector<FinAbelianGroup::Element>& a) const {
    x.resize(cube.size());
    a.resize(cube.size());
    for (std::size_t i = 0; i < cube.size(); ++i) {
      x[i] = cube[i] / na_;
      a[i] = cube[i] % na_;
    }
  }

  bool face_ok(const Cube& x, const std::vector<FinAbelianGroup::Element>& a, const std::vector<Vertex>& face) const {
    Cube fx(face.size());
    FinAbelianGroup::Element w = 0;
    for (Vertex l = 0; l < face.size(); ++l) {
      fx[l] = x[face[l]];
      w = weight_of(l) % 2 == 0 ? a_.add(w, a[face[l]]) : a_.sub(w, a[face[l]]);
    }
    auto idx = rho_.cubes->index_of(fx);
    return idx && rho_.values[*idx] == w;
  }
};

}  // namespace

std::vector<Point> ExtensionSpace::projection() const {
  std::vector<Point> p(total.size());
  for (Point m = 0; m < p.size(); ++m) p[m] = project(m);
  return p;
}

ExtensionSpace extension_from_cocycle(const Cocycle& rho, std::string name) {
  if (rho.degree < 0) throw std::invalid_argument("extension_from_cocycle: degree must be >= 0");
  if (auto chk = check_cocycle_axioms(rho); !chk.ok)
    throw std::invalid_argument("extension_from_cocycle: not a cocycle: " + chk.witness);
  ExtensionSpace m;
  m.base = rho.base;
  m.fiber = rho.group;
  m.degree = rho.degree;
  m.cocycle = rho;
  std::vector<std::string> labels;
  for (const auto& x : rho.base.labels())
    for (FinAbelianGroup::Element a = 0; a < rho.group.order(); ++a)
      labels.push_back("(" + x + "," + rho.group.element_label(a) + ")");
  std::optional<int> step;
  if (rho.base.claimed_step()) step = std::max(*rho.base.claimed_step(), rho.degree);
  if (name.empty()) name = "ext(" + rho.base.name() + ")";
  m.total = Cubespace(std::make_shared<ExtensionRule>(rho), std::move(labels), step, std::move(name));
  return m;
}

}  // namespace nilspace

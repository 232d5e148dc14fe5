#include "nilspace/groups.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nilspace {

FiniteGroup::FiniteGroup(std::vector<std::vector<Element>> table, std::vector<std::string> labels, std::string name)
    : table_(std::move(table)), labels_(std::move(labels)), name_(std::move(name)) {
  const std::size_t m = table_.size();
  if (m == 0) throw std::invalid_argument("group table is empty");
  for (std::size_t i = 0; i < m; ++i) {
    if (table_[i].size() != m)
      throw std::invalid_argument("group table row " + std::to_string(i) + " has " +
                                  std::to_string(table_[i].size()) + " entries, expected " + std::to_string(m));
    for (Element x : table_[i])
      if (x >= m) throw std::invalid_argument("group table row " + std::to_string(i) + " has entry out of range");
  }
  for (std::size_t i = 0; i < m; ++i)
    if (table_[0][i] != i || table_[i][0] != i) throw std::invalid_argument("index 0 is not the identity");
  inverse_.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    auto it = std::find(table_[i].begin(), table_[i].end(), Element{0});
    if (it == table_[i].end()) throw std::invalid_argument("element " + std::to_string(i) + " has no inverse");
    Element j = static_cast<Element>(it - table_[i].begin());
    if (table_[j][i] != 0) throw std::invalid_argument("element " + std::to_string(i) + " has no two-sided inverse");
    inverse_[i] = j;
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw std::invalid_argument("multiplication is not associative at (" + std::to_string(a) + "," +
                                      std::to_string(b) + "," + std::to_string(c) + ")");
  if (labels_.empty())
    for (std::size_t i = 0; i < m; ++i) labels_.push_back(std::to_string(i));
  if (labels_.size() != m) throw std::invalid_argument("group label count does not match order");
}

FiniteGroup::Element FiniteGroup::power(Element a, std::int64_t e) const {
  if (e < 0) return power(inv(a), -e);
  Element r = 0;
  for (std::int64_t i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < order(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

std::vector<FiniteGroup::Element> FiniteGroup::generated_subgroup(std::span<const Element> gens) const {
  std::vector<char> seen(order(), 0);
  std::vector<Element> elems{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Element g : gens) {
      if (g >= order()) throw std::out_of_range("generator is not a group element");
      Element x = mul(elems[i], g);
      if (!seen[x]) {
        seen[x] = 1;
        elems.push_back(x);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool FiniteGroup::is_subgroup(std::span<const Element> s) const {
  if (s.empty() || !std::binary_search(s.begin(), s.end(), Element{0})) return false;
  for (Element a : s)
    for (Element b : s)
      if (!std::binary_search(s.begin(), s.end(), mul(a, inv(b)))) return false;
  return true;
}

bool FiniteGroup::is_normal(std::span<const Element> s) const {
  for (Element g = 0; g < order(); ++g)
    for (Element a : s)
      if (!std::binary_search(s.begin(), s.end(), mul(mul(g, a), inv(g)))) return false;
  return true;
}

std::vector<FiniteGroup::Element> FiniteGroup::conjugacy_class(Element a) const {
  std::vector<Element> out;
  for (Element g = 0; g < order(); ++g) out.push_back(mul(mul(g, a), inv(g)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<FiniteGroup::Element> FiniteGroup::commutator_subgroup(std::span<const Element> a,
                                                                   std::span<const Element> b) const {
  std::vector<Element> gens;
  for (Element x : a)
    for (Element y : b) gens.push_back(commutator(x, y));
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return generated_subgroup(gens);
}

// ---------------------------------------------------------------------------

FiniteGroup cyclic_group(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group order must be >= 1");
  std::vector<std::vector<FiniteGroup::Element>> t(n, std::vector<FiniteGroup::Element>(n));
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(std::move(t), {}, "Z" + std::to_string(n));
}

FiniteGroup abelian_group(const FinAbelianGroup& a) {
  const auto m = static_cast<std::uint32_t>(a.order());
  std::vector<std::vector<FiniteGroup::Element>> t(m, std::vector<FiniteGroup::Element>(m));
  std::vector<std::string> labels;
  for (std::uint32_t x = 0; x < m; ++x) {
    labels.push_back(a.element_label(x));
    for (std::uint32_t y = 0; y < m; ++y) t[x][y] = a.add(x, y);
  }
  return FiniteGroup(std::move(t), std::move(labels), a.to_string());
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const auto m = static_cast<std::uint32_t>(g.order() * h.order());
  const auto nh = static_cast<std::uint32_t>(h.order());
  std::vector<std::vector<FiniteGroup::Element>> t(m, std::vector<FiniteGroup::Element>(m));
  std::vector<std::string> labels;
  for (std::uint32_t x = 0; x < m; ++x) {
    labels.push_back("(" + g.label(x / nh) + "," + h.label(x % nh) + ")");
    for (std::uint32_t y = 0; y < m; ++y) t[x][y] = g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh);
  }
  return FiniteGroup(std::move(t), std::move(labels), g.name() + "x" + h.name());
}

FiniteGroup heisenberg_group(std::uint32_t p) {
  if (p < 2) throw std::invalid_argument("heisenberg_group: p must be >= 2");
  const std::uint32_t m = p * p * p;
  auto decode = [p](std::uint32_t x) { return std::array<std::uint32_t, 3>{x % p, (x / p) % p, x / (p * p)}; };
  std::vector<std::vector<FiniteGroup::Element>> t(m, std::vector<FiniteGroup::Element>(m));
  std::vector<std::string> labels;
  for (std::uint32_t x = 0; x < m; ++x) {
    auto [a, b, c] = decode(x);
    labels.push_back("[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]");
    for (std::uint32_t y = 0; y < m; ++y) {
      auto [a2, b2, c2] = decode(y);
      std::uint32_t na = (a + a2) % p, nb = (b + b2) % p, nc = (c + c2 + a * b2) % p;
      t[x][y] = na + p * nb + p * p * nc;
    }
  }
  return FiniteGroup(std::move(t), std::move(labels), "UT3(Z" + std::to_string(p) + ")");
}

FiniteGroup dihedral_group(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("dihedral_group: n must be >= 1");
  const std::uint32_t m = 2 * n;
  // r^i s^e * r^j s^f = r^{i + (-1)^e j} s^{e+f}
  std::vector<std::vector<FiniteGroup::Element>> t(m, std::vector<FiniteGroup::Element>(m));
  std::vector<std::string> labels;
  for (std::uint32_t x = 0; x < m; ++x) {
    std::uint32_t i = x % n, e = x / n;
    std::string l = i == 0 ? (e ? "" : "1") : "r" + (i == 1 ? std::string() : "^" + std::to_string(i));
    if (e) l += "s";
    labels.push_back(l);
    for (std::uint32_t y = 0; y < m; ++y) {
      std::uint32_t j = y % n, f = y / n;
      std::uint32_t k = e ? (i + n - j) % n : (i + j) % n;
      t[x][y] = k + n * ((e + f) % 2);
    }
  }
  return FiniteGroup(std::move(t), std::move(labels), "D" + std::to_string(n));
}

FiniteGroup quaternion_group() {
  // elements s*u with s in {+1,-1}, u in {1,i,j,k}; index = unit + 4 * (s < 0)
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  static const char* names[4] = {"1", "i", "j", "k"};
  std::vector<std::vector<FiniteGroup::Element>> t(8, std::vector<FiniteGroup::Element>(8));
  std::vector<std::string> labels;
  for (std::uint32_t x = 0; x < 8; ++x) {
    labels.push_back(std::string(x >= 4 ? "-" : "") + names[x % 4]);
    for (std::uint32_t y = 0; y < 8; ++y) {
      int s = (x >= 4 ? -1 : 1) * (y >= 4 ? -1 : 1) * unit_sign[x % 4][y % 4];
      t[x][y] = static_cast<FiniteGroup::Element>(unit_mul[x % 4][y % 4] + (s < 0 ? 4 : 0));
    }
  }
  return FiniteGroup(std::move(t), std::move(labels), "Q8");
}

// ---------------------------------------------------------------------------

FiniteGroup parse_group_table(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) fail("missing order line");
  std::uint64_t m = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> m) || (ls >> extra) || m == 0) fail("first line must be a positive group order");
    if (m > 4096) fail("group order above 4096 is not supported");
  }
  std::vector<std::vector<FiniteGroup::Element>> table(m);
  for (std::uint64_t r = 0; r < m; ++r) {
    if (!next_line()) fail("table row " + std::to_string(r) + " is missing");
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::uint64_t v = 0;
      auto pos = tok.find_first_not_of("0123456789");
      if (pos != std::string::npos || tok.size() > 9) fail("table row " + std::to_string(r) + ": bad entry '" + tok + "'");
      v = std::stoull(tok);
      if (v >= m) fail("table row " + std::to_string(r) + ": entry " + tok + " out of range");
      table[r].push_back(static_cast<FiniteGroup::Element>(v));
    }
    if (table[r].size() != m)
      fail("table row " + std::to_string(r) + " has " + std::to_string(table[r].size()) + " entries, expected " +
           std::to_string(m));
  }
  std::vector<std::string> labels;
  for (std::uint64_t i = 0; i < m; ++i) labels.push_back(std::to_string(i));
  while (next_line()) {
    std::istringstream ls(line);
    std::string kw, name;
    std::uint64_t idx = 0;
    if (!(ls >> kw) || kw != "label" || !(ls >> idx) || !(ls >> name)) fail("expected 'label <index> <name>'");
    if (idx >= m) fail("label index out of range");
    labels[idx] = name;
  }
  try {
    return FiniteGroup(std::move(table), std::move(labels), source);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(source + ": " + e.what());
  }
}

FiniteGroup load_group_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open group table '" + path + "'");
  return parse_group_table(in, path);
}

std::string format_group_table(const FiniteGroup& g) {
  std::ostringstream os;
  os << g.order() << '\n';
  for (std::size_t a = 0; a < g.order(); ++a) {
    for (std::size_t b = 0; b < g.order(); ++b) os << (b ? " " : "") << g.mul(a, b);
    os << '\n';
  }
  for (std::size_t a = 0; a < g.order(); ++a)
    if (g.label(a) != std::to_string(a)) os << "label " << a << ' ' << g.label(a) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

Filtration::Filtration(const FiniteGroup& g, std::vector<std::vector<Element>> levels) : levels_(std::move(levels)) {
  const std::size_t m = g.order();
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!g.is_subgroup(levels_[i])) throw std::invalid_argument("filtration level G_" + std::to_string(i + 1) + " is not a subgroup");
    if (!g.is_normal(levels_[i])) throw std::invalid_argument("filtration level G_" + std::to_string(i + 1) + " is not normal");
    if (i > 0 && !std::includes(levels_[i - 1].begin(), levels_[i - 1].end(), levels_[i].begin(), levels_[i].end()))
      throw std::invalid_argument("filtration is not decreasing at G_" + std::to_string(i + 1));
  }
  member_.assign(levels_.size(), std::vector<char>(m, 0));
  for (std::size_t i = 0; i < levels_.size(); ++i)
    for (Element x : levels_[i]) member_[i][x] = 1;
  const int k = degree();
  for (int i = 1; i <= k; ++i)
    for (int j = 1; i + j <= k + 1; ++j)
      for (Element a : level(i))
        for (Element b : level(j))
          if (!in_level(i + j, g.commutator(a, b)))
            throw std::invalid_argument("filtration violates [G_" + std::to_string(i) + ", G_" + std::to_string(j) +
                                        "] <= G_" + std::to_string(i + j) + " at (" + g.label(a) + ", " +
                                        g.label(b) + ")");
}

Filtration Filtration::from_generators(const FiniteGroup& g, const std::vector<std::vector<Element>>& levels) {
  std::vector<std::vector<Element>> lv;
  std::vector<Element> all(g.order());
  for (Element x = 0; x < g.order(); ++x) all[x] = x;
  lv.push_back(all);
  for (const auto& gens : levels) {
    auto s = g.generated_subgroup(gens);
    lv.push_back(std::move(s));
  }
  if (lv.back().size() != 1) lv.push_back({0});
  return Filtration(g, std::move(lv));
}

Filtration Filtration::lower_central_series(const FiniteGroup& g) {
  std::vector<std::vector<Element>> lv;
  std::vector<Element> all(g.order());
  for (Element x = 0; x < g.order(); ++x) all[x] = x;
  lv.push_back(all);
  while (lv.back().size() > 1) {
    auto next = g.commutator_subgroup(lv.back(), all);
    if (next == lv.back()) throw std::invalid_argument("group is not nilpotent");
    lv.push_back(std::move(next));
  }
  return Filtration(g, std::move(lv));
}

const std::vector<Filtration::Element>& Filtration::level(int i) const {
  if (i <= 0) i = 1;
  if (i > static_cast<int>(levels_.size())) return trivial_;
  return levels_[i - 1];
}

bool Filtration::in_level(int i, Element g) const {
  if (i <= 0) i = 1;
  if (i > static_cast<int>(levels_.size())) return g == 0;
  return member_[i - 1][g] != 0;
}

}  // namespace nilspace

#pragma once

// Test-local reference implementations that do not go through the library's
// cube rules.

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "nilspace/cube.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/groups.hpp"

namespace oracle {

using nilspace::Point;
using nilspace::Vertex;

// Every (k+1)-face of c has alternating sum 0 mod m.
inline bool degree_cube(const std::vector<Point>& c, int k, std::uint32_t m) {
  const int n = nilspace::cube_dimension(c.size());
  if (n <= k) return true;
  for (const auto& f : nilspace::faces(n, n - k - 1)) {
    long long s = 0;
    for (Vertex w = 0; w < nilspace::vertex_count(k + 1); ++w) {
      long long val = c[f.vertex(w)];
      s += nilspace::weight_of(w) % 2 == 0 ? val : -val;
    }
    if (((s % m) + m) % m != 0) return false;
  }
  return true;
}

inline std::uint64_t binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t b = 1;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Calls visit on every map {0,1}^n -> {0..points-1}.
inline void for_each_map(std::size_t points, int n, const std::function<void(const std::vector<Point>&)>& visit) {
  std::vector<Point> c(nilspace::vertex_count(n), 0);
  while (true) {
    visit(c);
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == points) c[i++] = 0;
    if (i == c.size()) return;
  }
}

// Host-Kra cubes by closure under g^[F], g in G_{codim F}, multiplied on the left.
inline std::set<std::vector<Point>> host_kra_closure(const nilspace::FiniteGroup& g, const nilspace::Filtration& filt,
                                                    int n) {
  std::vector<std::vector<Point>> gens;
  for (int codim = 0; codim <= n; ++codim)
    for (const auto& f : nilspace::faces(n, codim))
      for (Point x : filt.level(codim)) {
        std::vector<Point> e(nilspace::vertex_count(n), 0);
        for (Vertex v = 0; v < e.size(); ++v)
          if (f.contains(v)) e[v] = x;
        gens.push_back(e);
      }
  std::set<std::vector<Point>> seen{std::vector<Point>(nilspace::vertex_count(n), 0)};
  std::vector<std::vector<Point>> queue(seen.begin(), seen.end());
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (const auto& e : gens) {
      auto c = queue[q];
      for (Vertex v = 0; v < c.size(); ++v) c[v] = g.mul(e[v], c[v]);
      if (seen.insert(c).second) queue.push_back(c);
    }
  return seen;
}

}  // namespace oracle

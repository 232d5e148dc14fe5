#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/groups.hpp"

namespace nilspace {

/// The one-point nilspace.
Cubespace point_space();

/// D_k(A): f is a cube iff every (k+1)-dimensional face has weight zero.
/// Point ids are the element encodings of A.
Cubespace degree_space(const FinAbelianGroup& a, int k);

enum class GroupCubeMode { Generative, GrayCode };

std::string to_string(GroupCubeMode mode);

/// Host-Kra cubes on a filtered group. Point ids are group element indices.
/// Generative mode materializes the closure for dimensions up to 3 and
/// decides larger dimensions through (k+1)-faces.
Cubespace group_space(const FiniteGroup& g, const Filtration& filt, GroupCubeMode mode = GroupCubeMode::GrayCode);

/// Cubes with f(0) = 1 from the generative closure, encoded as
/// sum_{v >= 1} f(v) |G|^(v-1) and sorted.
std::vector<std::uint64_t> generative_cube_keys(const FiniteGroup& g, const Filtration& filt, int n);
/// The same encoding for the cubes of the Gray-code rule with f(0) = 1.
std::vector<std::uint64_t> graycode_cube_keys(const FiniteGroup& g, const Filtration& filt, int n);

/// Left cosets g Gamma of the subgroup generated by `gamma_gens`, acted on
/// from the left. `base` selects the coset x = base * Gamma used as origin.
Cubespace coset_space(const FiniteGroup& g, const Filtration& filt, const std::vector<FiniteGroup::Element>& gamma_gens,
                      FiniteGroup::Element base = 0);

/// Points (a, b) with id a * |N2| + b.
Cubespace product(const Cubespace& n1, const Cubespace& n2);

/// The i-th arrow space restricted to pairs (x, y) whose arrow (x, y)_i is
/// an i-cube. `arrow_pairs` lists those pairs in point-id order.
Cubespace arrow_space(const Cubespace& n, int i);
std::vector<std::pair<Point, Point>> arrow_pairs(const Cubespace& n, int i);
/// (f1, f2)_i as a vertex-indexed map on {0,1}^(n+i).
Cube arrow_cube(std::span<const Point> f1, std::span<const Point> f2, int i);

/// The structure on N pulled back along y -> (x, y) into the arrow space.
Cubespace derived_at(const Cubespace& n, Point x);

/// Cubes are images of cubes of `n` under the surjection `class_of`
/// (values 0..classes-1). Decided by exhaustive lift search.
Cubespace quotient_space(const Cubespace& n, std::vector<Point> class_of, std::vector<std::string> labels,
                         std::string name = {});

}  // namespace nilspace

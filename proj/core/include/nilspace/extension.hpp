#pragma once

#include "nilspace/cocycle.hpp"

namespace nilspace {

/// Degree-k extension M of N by A. Point (x, a) has id x |A| + a; a lift f
/// of a base cube is a cube iff every (k+1)-face of its fiber part has
/// weight rho(pi f restricted to that face).
struct ExtensionSpace {
  Cubespace total;
  Cubespace base;
  FinAbelianGroup fiber;
  int degree = 0;
  Cocycle cocycle;

  Point point(Point x, FinAbelianGroup::Element a) const {
    return x * static_cast<Point>(fiber.order()) + a;
  }
  Point project(Point m) const { return m / static_cast<Point>(fiber.order()); }
  FinAbelianGroup::Element fiber_coordinate(Point m) const { return m % static_cast<Point>(fiber.order()); }
  /// m + a for the free action of A on fibers.
  Point act(Point m, FinAbelianGroup::Element a) const {
    return point(project(m), fiber.add(fiber_coordinate(m), a));
  }
  std::vector<Point> projection() const;
};

/// Throws std::invalid_argument when rho fails the cocycle axioms.
ExtensionSpace extension_from_cocycle(const Cocycle& rho, std::string name = {});

}  // namespace nilspace

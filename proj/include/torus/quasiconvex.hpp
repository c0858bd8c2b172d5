#pragma once

#include <optional>

#include "torus/lattice.hpp"

namespace torus {

// The window A(E, m) = { phi : ||phi(e)|| <= 2^-(m+2) for all e in E }.
// Membership for a single character is always decidable exactly; when the
// points of E are rational with common denominator q the window is a union
// of residue classes mod q, which can be enumerated when q^dim (or the
// class count of a subgroup window) fits the budget.
struct CharWindow {
  std::vector<TorusPoint> E;
  std::size_t dim = 1;
  int m = 0;
  Rat tol;  // 2^-(m+2)

  Int q = 1;            // common denominator (rational E only)
  bool rational = true;

  // Residue description: representatives of the classes mod q making up the
  // window, sorted; present only when enumeration fit the budget.
  std::optional<std::vector<Character>> residues;

  bool contains(const Character& phi) const;  // direct test, exact
};

CharWindow char_window(const std::vector<TorusPoint>& E, std::size_t dim,
                       int m, std::size_t residue_budget = std::size_t(1)
                                                               << 21);

// The m-quasi-convex hull: points x with ||phi(x)|| <= 1/4 for every phi in
// the window. Equal to the subgroup generated by E when E is one; in
// general a finite subset of <E> computed by exact enumeration.
struct QuasiHull {
  std::vector<TorusPoint> E;
  int m = 0;
  std::vector<TorusPoint> hull;  // sorted by coordinates, contains E
  Int search_bound;              // the M of the coefficient box
  bool subgroup_fast_path = false;
};

QuasiHull quasi_hull(const std::vector<TorusPoint>& E, std::size_t dim, int m,
                     std::size_t residue_budget = std::size_t(1) << 21,
                     std::size_t candidate_budget = std::size_t(1) << 22);

}  // namespace torus

#pragma once

#include <memory>
#include <optional>

#include "torus/charset.hpp"
#include "torus/quasiconvex.hpp"

namespace torus {

// An increasing exhaustion E_0 <= E_1 <= ... of a countable subgroup by
// finite symmetric sets containing 0. Three shapes: word balls over a
// finite generator list, refinement schedules (stage n is the cyclic group
// generated by (1/b_i^(n+1))_i), and explicit stage lists.
struct Tower {
  enum class Kind { WordBall, Refinement, Explicit };
  Kind kind = Kind::Explicit;
  std::size_t dim = 1;
  Metric metric;

  std::vector<TorusPoint> generators;            // WordBall
  std::optional<IntMatrix> irrational_dependency;  // WordBall, if irrational
  std::vector<Int> bases;                        // Refinement, one per coord
  std::vector<std::vector<TorusPoint>> explicit_stages;
  std::optional<bool> declared_dense;            // Explicit only

  // Stage n, normalized: deduplicated, contains 0, closed under negation.
  std::vector<TorusPoint> stage(std::size_t n) const;

  // Largest stage index available (SIZE_MAX when unbounded).
  std::size_t max_stage() const;

  // Closure of the union of all stages.
  ClosedSubgroup union_closure() const;
};

Tower word_ball_tower(std::vector<TorusPoint> generators, std::size_t dim,
                      std::optional<IntMatrix> irrational_dependency =
                          std::nullopt,
                      Metric metric = Metric::sup());
Tower refinement_tower(std::vector<Int> bases, std::size_t dim,
                       Metric metric = Metric::sup());
Tower explicit_tower(std::vector<std::vector<TorusPoint>> stages,
                     std::size_t dim,
                     std::optional<bool> declared_dense = std::nullopt,
                     Metric metric = Metric::sup());

// eps_n = min(eps_{n-1}/2, delta(F_{n+1})/4) with eps_{-1} = 2 * eps0_cap;
// singleton hulls contribute no delta constraint. Strictly decreasing, with
// 2 eps_n < delta(F_{n+1}) whenever F_{n+1} has two points.
struct EpsilonSchedule {
  std::vector<Rat> eps;    // eps_0 .. eps_{L-1}
  std::vector<Rat> delta;  // delta(F_{n+1}), 0 when undefined (singleton)
};
EpsilonSchedule epsilons(const std::vector<std::vector<TorusPoint>>& hulls,
                         const Metric& metric, const Rat& eps0_cap = Rat(1, 8));

// One covering level: every x outside the eps-neighborhood of F satisfies
// ||phi(x)|| > 1/4 for some phi in B, and every phi in B lies in the stage
// window. Self-contained and exactly re-checkable.
struct ArcPiece {
  Rat lo, hi;  // open arc (lo, hi) inside the good region of phi
  Int phi;
};
struct CoverCell {
  Rat x0, x1, y0, y1;
  int kind = 0;         // 0: inside the eps-neighborhood; 1: cleared
  std::size_t ref = 0;  // index into F (kind 0) or B (kind 1)
};
struct CoveringCertificate {
  std::size_t dim = 1;
  std::size_t n = 0;  // level
  Metric metric;      // matters for the d = 2 neighborhood cells
  std::vector<TorusPoint> E;
  std::vector<TorusPoint> F;
  Rat eps;
  Rat tol;  // 2^-(n+2), the window tolerance
  std::optional<Rat> delta_next;
  std::vector<Character> B;
  std::vector<ArcPiece> arcs;    // d = 1
  std::vector<CoverCell> cells;  // d = 2
};

struct CoveringBudget {
  std::size_t max_candidates = 4096;
  std::size_t residue_budget = std::size_t(1) << 21;
  int cell_depth = 14;
};

// Greedy cover of T^d minus the eps-neighborhood of F by character good
// regions drawn from the window. Throws budget_exhausted (with the
// uncovered remainder described) if the candidate pool runs dry.
CoveringCertificate covering(const std::vector<TorusPoint>& E,
                             const std::vector<TorusPoint>& F, const Rat& eps,
                             std::size_t level, const CharWindow& window,
                             const CoveringBudget& budget = {},
                             const Metric& metric = Metric::sup());

// Exact re-verification; nullopt on success, else a description of the
// first failing check (naming the offending arc or cell).
std::optional<std::string> verify_covering(const CoveringCertificate& cert);

struct Characterization {
  enum class Mode { Dense, ClosedSubgroup, Lifted } mode = Mode::Dense;
  CharSet B;
  std::vector<CoveringCertificate> certs;       // Dense
  std::optional<ClosedSubgroup> subgroup;       // ClosedSubgroup and Lifted
  std::optional<IntMatrix> embedding;           // Lifted: T^k -> T^d columns
  std::unique_ptr<Characterization> inner;      // Lifted: the dense sub-run
  std::vector<TorusPoint> checked_points;       // ClosedSubgroup: stage gens
};

// The pipeline: dense towers run the hull/epsilon/covering loop per level;
// towers with closed (finite) union emit leveled annihilator shells; proper
// subtorus closures recurse and lift. Produces levels 0..levels-1.
Characterization characterize(const Tower& tower, std::size_t levels,
                              const CoveringBudget& budget = {},
                              const Rat& eps0_cap = Rat(1, 8));

// Lifts a characterizing set along N <= T^d: each character of the ambient
// torus restricting to a member of B, interleaved with the annihilator
// shells of N. B is given in the coordinates of N (its free coordinates
// listed first). N must be infinite.
CharSet lift_charset(const CharSet& b, const ClosedSubgroup& n);

// Leveled enumeration of the nonzero points of the annihilator lattice:
// level n holds the canonical-sign combinations with coefficient box
// exactly n+1.
std::vector<Character> annihilator_shell(const ClosedSubgroup& n,
                                         std::size_t level);

}  // namespace torus

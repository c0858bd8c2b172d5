#pragma once

#include <cstdint>

#include "torus/arcs.hpp"
#include "torus/characterizer.hpp"
#include "torus/charset.hpp"

namespace torus {

// One row of a membership profile: ||phi(x)|| with the exactness data
// needed to audit the verdict.
struct TailEntry {
  std::size_t index = 0;  // position in the flattened prefix
  std::size_t level = 0;  // level the character came from
  Character phi;
  Real value;            // ||phi(x)||
  Rat err;               // half-width of the enclosure; 0 when exact
  int vs_threshold = 0;  // +1 certified >= threshold, -1 certified below,
                         // 0 undecided (precision exhausted)
  bool exact_zero = false;
};

struct TailProfile {
  TorusPoint x;
  std::size_t prefix_len = 0;
  Rat threshold;
  std::vector<TailEntry> entries;
  std::vector<Rat> tail_max;  // suffix maxima of value upper bounds

  enum class Verdict { MemberSoFar, WitnessFound, Undetermined };
  Verdict verdict = Verdict::Undetermined;
  std::vector<std::size_t> witnesses;  // certified hits after the last zero
};

// Evaluates ||phi(x)|| along the first `prefix_len` characters of b.
// witness-found: at least `quota` certified values >= threshold with no
// exact zero after them. member-so-far: the profile ends in exact zeros.
// Entries whose comparison exhausts precision are marked, not guessed.
TailProfile tail_profile(const TorusPoint& x, const CharSet& b,
                         std::size_t prefix_len,
                         const Rat& threshold = Rat(1, 4),
                         std::size_t quota = 3);

// Exact Haar measure of {x in T : ||phi x|| <= delta for all phi in the
// prefix}, as a union of arcs with rational endpoints.
struct MeasureReport {
  std::size_t prefix_len = 0;
  Rat delta;
  Rat measure;
  ArcSet arcs;
};
MeasureReport sublevel_measure(const std::vector<Character>& prefix,
                               const Rat& delta);

// Reports after each level prefix of b (levels 0..levels-1, cumulative).
std::vector<MeasureReport> measure_by_levels(const CharSet& b,
                                             const Rat& delta,
                                             std::size_t levels);

// Monte-Carlo companion for the measures (and the only option for d >= 2):
// uniform samples on the 2^-53 grid, membership tested exactly.
struct MonteCarloEstimate {
  std::size_t samples = 0;
  std::size_t hits = 0;
  double estimate = 0;
  double std_error = 0;
  std::uint64_t seed = 0;
};
MonteCarloEstimate mc_sublevel_estimate(const std::vector<Character>& prefix,
                                        std::size_t dim, const Rat& delta,
                                        std::size_t samples,
                                        std::uint64_t seed);

// One stage of a separating sequence for x against a subgroup exhausted by
// a tower: ||u(x)|| > 1/4 while ||u(e)|| < 1/n on the whole stage n.
struct SeparationStep {
  std::size_t n = 1;
  Character u;
  Real value_at_x;
  Rat stage_bound;    // 1/n
  Real max_on_stage;  // max ||u(e)|| over stage n
};

// Builds steps n = 1..steps. x must avoid every inspected stage; searches
// the stage annihilator lattice first (where the bound is exactly 0), then
// all of Z^d shell by shell. Throws budget_exhausted when the shells run
// out, invalid_argument when x is found inside a stage.
std::vector<SeparationStep> separation_witness(const Tower& h,
                                               const TorusPoint& x,
                                               std::size_t steps,
                                               std::size_t shell_budget = 64);

// Witnesses u_n in F_n^perp with ||u_n(x)|| >= 1/4 for a finite chain of
// closed subgroups. Rejects x found inside any stage.
struct ChainStep {
  std::size_t n = 0;
  Character u;
  Real value;
};
std::vector<ChainStep> chain_witness_sequence(
    const std::vector<ClosedSubgroup>& chain, const TorusPoint& x,
    std::size_t shell_budget = 64);

}  // namespace torus

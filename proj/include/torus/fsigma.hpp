#pragma once

#include <optional>
#include <string>

#include "torus/charset.hpp"
#include "torus/lattice.hpp"

namespace torus {

// An increasing chain of closed subgroups F_0 <= F_1 <= ... inside a
// concrete ambient group: a finite torus, a truncated infinite product
// (coordinates beyond the truncation read as 0), or a finite product of
// cyclic groups embedded as <1/m_1> x ... x <1/m_k>. Stages are either
// generated by rational points or coordinate patterns T^k x {0}.
struct ChainSpec {
  enum class Ambient { Torus, TruncatedProduct, CyclicProduct };
  Ambient ambient = Ambient::Torus;
  std::size_t dim = 1;             // coordinates (the truncation length)
  std::vector<Int> cyclic_orders;  // CyclicProduct only, one per coordinate

  enum class StageKind { Generators, CoordinatePattern };
  struct Stage {
    StageKind kind = StageKind::Generators;
    std::vector<TorusPoint> generators;  // rational points
    std::size_t pattern_coords = 0;      // T^pattern_coords x {0}
  };
  std::vector<Stage> stages;
  bool strict = false;  // claim F_n < F_{n+1} strictly
};

// Validates monotonicity (and strictness when claimed); throws
// invalid_argument naming the failing stage.
void validate_chain(const ChainSpec& chain);

// True when phi annihilates stage n of the chain.
bool annihilates_stage(const Character& phi, const ChainSpec& chain,
                       std::size_t n);

// The index check behind the F-sigma characterization: a least stage m from
// which every index |F_{n+1} : F_n| is finite (the ambient groups here all
// have countable weight, so quotient metrizability is automatic). Refusal
// reports the first infinite index when the given prefix never stabilizes.
struct ConditionC {
  bool holds = false;
  std::size_t m = 0;
  std::optional<std::size_t> first_infinite;
  std::vector<std::optional<Int>> indices;  // per step; nullopt = infinite
  std::string reason;
};
ConditionC check_condition_c(const ChainSpec& chain);

// B_n = B intersect F_n^perp minus F_{n+1}^perp. The last bucket collects
// characters annihilating every given stage. Characters missing F_0^perp
// land in `violations`, and `non_annihilating[n]` counts the prefix
// characters that fail to annihilate F_n: growth of that counter across
// prefixes is the finite-exceptions violation signal.
struct BPartition {
  std::vector<std::vector<Character>> buckets;
  std::vector<Character> violations;
  std::vector<std::size_t> non_annihilating;
};
BPartition partition_B(const CharSet& b, const ChainSpec& chain);

// The adversarial point defeating a candidate characterization along a
// chain with infinite indices: y_n sits at the first coordinate outside
// F_n with the smallest denominator satisfying ||phi(y_n)|| <= 2^-(n+2)
// for phi in B_0..B_n and the contraction d(y_{n+1},0) <= d(y_n,F_n)/3,
// all in the weighted metric. x is the truncated sum.
struct RefutationWitness {
  std::size_t stages = 0;           // number of y_n emitted
  std::vector<std::size_t> coords;  // coordinate of y_n
  std::vector<Rat> t;               // value of y_n at its coordinate
  TorusPoint x;
  std::vector<Rat> y_dist;     // d(y_n, F_n), exact
  std::vector<Rat> tail_dist;  // d(x_n, F_n) for x_n = y_n + y_{n+1} + ...
};

RefutationWitness refutation_witness(const ChainSpec& chain, const CharSet& b,
                                     std::size_t stages,
                                     std::size_t denominator_budget =
                                         std::size_t(1) << 20);

// Re-checks every emitted inequality exactly: y_n outside F_n and inside
// F_{n+1}; ||phi(y_n)|| <= 2^-n for phi in B_0..B_n; the /3 contraction;
// d(x_n, F_n) >= d(y_n, F_n)/2 > 0; and ||phi(x)|| <= 2^(1-n) for phi in
// B_n. Returns nullopt on success, else the first failing check.
std::optional<std::string> verify_refutation(const RefutationWitness& w,
                                             const ChainSpec& chain,
                                             const CharSet& b);

}  // namespace torus

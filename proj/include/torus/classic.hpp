#pragma once

#include <optional>

#include "torus/charset.hpp"

namespace torus {

// Greedy base-factorial expansion x = sum_n c_n / (n+1)!, 0 <= c_n <= n,
// indexed from n = 1. Terminating (all-zero tail) iff x is rational; the
// greedy rule picks the terminating form when both exist.
struct FactorialDigits {
  CircleValue x;
  std::vector<Int> digits;  // c_1 .. c_N
  std::vector<Real> tails;  // y_1 .. y_N, y_n = frac((n-1)! ... ) state
  bool terminated = false;  // tail became exactly zero within depth

  // Partial sum through c_N as an exact rational.
  Rat partial_sum(std::size_t upto) const;
};

FactorialDigits factorial_expand(const CircleValue& x, std::size_t depth);

// The leveled set {k * n! : 0 < k <= n}, levels n = 1 .. n_max.
CharSet factorial_charset(std::size_t n_max);

// A witness that x escapes smallness at stage n: the first k in 1..n with
// ||k * n! * x|| >= 1/4, or nullopt when no multiple reaches 1/4. Existence
// is guaranteed whenever the digit c_n is neither 0 nor n. Returns (k, n)
// and the exact verified value.
struct WitnessPair {
  Int k;
  std::size_t n;
  Real value;  // ||k * n! * x||, exact
};
std::optional<WitnessPair> witness_pair(const FactorialDigits& d,
                                        std::size_t n);

// Levels {p^0}, {p^1}, ..., {p^(n_levels-1)} for prime p.
CharSet prufer_charset(const Int& p, std::size_t n_levels);

// Continued-fraction convergent denominators of a quadratic irrational as
// a leveled set (deduplicated, so repeated early denominators collapse).
CharSet cyclic_cf_charset(const QuadIrr& alpha, std::size_t k);

}  // namespace torus

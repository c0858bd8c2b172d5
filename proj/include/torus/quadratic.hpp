#pragma once

#include <optional>
#include <vector>

#include "torus/numbers.hpp"

namespace torus {

// (a + b*sqrt(d)) / c with b != 0, c >= 1, d >= 2 squarefree, gcd(a,b,c) = 1.
// Construction goes through normalize(), which may collapse to a rational
// (returned separately); every live QuadIrr is genuinely irrational.
struct QuadIrr {
  Int a, b, c, d;

  // Splits n = s^2 * f with f squarefree; returns {s, f}. Trial division,
  // fine for the radicands this library sees.
  static std::pair<Int, Int> squarefree_split(const Int& n);

  // Normalizes (a + b*sqrt(d))/c; returns a rational instead when the value
  // collapses (b = 0 after reduction, or d becomes a perfect square).
  static std::optional<QuadIrr> normalize(Int a, Int b, Int c, Int d,
                                          Rat* rational_out);

  int sign() const;               // exact
  int cmp_rat(const Rat& r) const;  // exact sign of *this - r
  Int floor() const;              // exact
  Interval enclosure(long prec) const;
  double to_double() const;

  bool operator==(const QuadIrr& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

struct Convergent {
  Int p, q;
};

// Continued fraction machinery for quadratic irrationals, exact via the
// standard P/Q recurrence on (P + sqrt(N))/Q with Q | N - P^2.
struct QuadCF {
  explicit QuadCF(const QuadIrr& x);

  Int next();  // next partial quotient

  // First k partial quotients a_0, a_1, ...
  static std::vector<Int> digits(const QuadIrr& x, std::size_t k);

  // First k convergents p_i/q_i; checks the classical gap bound
  // |x - p_i/q_i| < 1/(q_i q_{i+1}) along the way.
  static std::vector<Convergent> convergents(const QuadIrr& x, std::size_t k);

  // Eventual periodicity: head then repeating period, detected by the first
  // repeated (P, Q) state. cap bounds the number of steps explored.
  struct Periodic {
    std::vector<Int> head;
    std::vector<Int> period;
  };
  static Periodic periodic(const QuadIrr& x, std::size_t cap);

  Int P, Q, N;  // state: current value is (P + sqrt(N)) / Q
};

}  // namespace torus

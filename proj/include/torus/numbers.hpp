#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace torus {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when a semidecided comparison or reduction hits its refinement
// ceiling instead of guessing an answer.
struct precision_exhausted : std::runtime_error {
  explicit precision_exhausted(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when an enumeration or search exceeds its configured budget.
struct budget_exhausted : std::runtime_error {
  explicit budget_exhausted(const std::string& what)
      : std::runtime_error(what) {}
};

inline constexpr long kDefaultPrec = 128;   // bits, for interval promotions
inline constexpr long kPrecCap = 1L << 14;  // refinement ceiling, in bits

inline Rat make_rat(Int num, Int den) {
  if (sgn(den) == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

inline Rat rat_pow2(long e) {
  // 2^e as an exact rational, e may be negative.
  Rat r;
  if (e >= 0) {
    mpq_set_ui(r.get_mpq_t(), 1, 1);
    mpz_mul_2exp(mpq_numref(r.get_mpq_t()), mpq_numref(r.get_mpq_t()), e);
  } else {
    mpq_set_ui(r.get_mpq_t(), 1, 1);
    mpz_mul_2exp(mpq_denref(r.get_mpq_t()), mpq_denref(r.get_mpq_t()), -e);
  }
  return r;
}

inline Int rat_floor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Int rat_ceil(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

// x mod 1, result in [0, 1).
inline Rat rat_mod1(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return x - Rat(q);
}

// Distance from a rational to the nearest integer, in [0, 1/2].
inline Rat rat_norm(const Rat& x) {
  Rat f = rat_mod1(x);
  Rat g = 1 - f;
  return f <= g ? f : g;
}

inline Int int_lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Exact dyadic number mant * 2^exp, normalized so mant is odd or zero.
struct Dyadic {
  Int mant = 0;
  long exp = 0;

  Dyadic() = default;
  Dyadic(Int m, long e) : mant(std::move(m)), exp(e) { normalize(); }
  static Dyadic from_int(const Int& v) { return Dyadic(v, 0); }

  void normalize() {
    if (sgn(mant) == 0) {
      exp = 0;
      return;
    }
    unsigned long s = mpz_scan1(mant.get_mpz_t(), 0);
    if (s > 0) {
      mpz_fdiv_q_2exp(mant.get_mpz_t(), mant.get_mpz_t(), s);
      exp += static_cast<long>(s);
    }
  }

  bool is_zero() const { return sgn(mant) == 0; }

  Rat to_rat() const {
    Rat r(mant);
    if (exp >= 0) {
      mpz_mul_2exp(mpq_numref(r.get_mpq_t()), mpq_numref(r.get_mpq_t()), exp);
    } else {
      mpz_mul_2exp(mpq_denref(r.get_mpq_t()), mpq_denref(r.get_mpq_t()), -exp);
      r.canonicalize();
    }
    return r;
  }

  double to_double() const { return to_rat().get_d(); }
};

Dyadic dyadic_add(const Dyadic& a, const Dyadic& b);
Dyadic dyadic_sub(const Dyadic& a, const Dyadic& b);
Dyadic dyadic_neg(const Dyadic& a);
Dyadic dyadic_mul(const Dyadic& a, const Dyadic& b);
Dyadic dyadic_mul_int(const Dyadic& a, const Int& k);
int dyadic_cmp(const Dyadic& a, const Dyadic& b);
Int dyadic_floor(const Dyadic& a);

// Round a rational onto the grid 2^-prec, in the given direction.
Dyadic dyadic_from_rat_down(const Rat& r, long prec);
Dyadic dyadic_from_rat_up(const Rat& r, long prec);

// (a / c) rounded onto the grid 2^(a.exp - prec).
Dyadic dyadic_div_int_down(const Dyadic& a, const Int& c, long prec);
Dyadic dyadic_div_int_up(const Dyadic& a, const Int& c, long prec);

// Closed interval [lo, hi] with exact dyadic endpoints.
struct Interval {
  Dyadic lo, hi;

  Interval() = default;
  Interval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
    if (dyadic_cmp(lo, hi) > 0)
      throw std::invalid_argument("Interval: lo > hi");
  }
  static Interval point(const Dyadic& d) { return Interval(d, d); }

  Rat width() const { return hi.to_rat() - lo.to_rat(); }
  bool contains(const Rat& x) const {
    return lo.to_rat() <= x && x <= hi.to_rat();
  }
  bool contains(const Interval& o) const {
    return dyadic_cmp(lo, o.lo) <= 0 && dyadic_cmp(o.hi, hi) <= 0;
  }
};

Interval interval_add(const Interval& a, const Interval& b);
Interval interval_sub(const Interval& a, const Interval& b);
Interval interval_neg(const Interval& a);
Interval interval_mul_int(const Interval& a, const Int& k);
Interval interval_from_rat(const Rat& r, long prec);
Interval interval_mul_rat(const Interval& a, const Rat& r, long prec);
Interval interval_div_int(const Interval& a, const Int& c, long prec);

// Enclosure of sqrt(d) with width 2^-prec; d must be nonnegative.
Interval sqrt_int_enclosure(const Int& d, long prec);

}  // namespace torus

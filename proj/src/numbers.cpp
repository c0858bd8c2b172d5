#include "torus/numbers.hpp"

#include <algorithm>

namespace torus {

namespace {

// Shift m left by s bits (s >= 0).
Int shl(const Int& m, long s) {
  Int r;
  mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), s);
  return r;
}

}  // namespace

Dyadic dyadic_add(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  long e = std::min(a.exp, b.exp);
  return Dyadic(shl(a.mant, a.exp - e) + shl(b.mant, b.exp - e), e);
}

Dyadic dyadic_neg(const Dyadic& a) { return Dyadic(-a.mant, a.exp); }

Dyadic dyadic_sub(const Dyadic& a, const Dyadic& b) {
  return dyadic_add(a, dyadic_neg(b));
}

Dyadic dyadic_mul(const Dyadic& a, const Dyadic& b) {
  return Dyadic(a.mant * b.mant, a.exp + b.exp);
}

Dyadic dyadic_mul_int(const Dyadic& a, const Int& k) {
  return Dyadic(a.mant * k, a.exp);
}

int dyadic_cmp(const Dyadic& a, const Dyadic& b) {
  int sa = sgn(a.mant), sb = sgn(b.mant);
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  long e = std::min(a.exp, b.exp);
  Int ma = shl(a.mant, a.exp - e);
  Int mb = shl(b.mant, b.exp - e);
  return cmp(ma, mb) < 0 ? -1 : (cmp(ma, mb) > 0 ? 1 : 0);
}

Int dyadic_floor(const Dyadic& a) {
  Int r;
  if (a.exp >= 0) {
    mpz_mul_2exp(r.get_mpz_t(), a.mant.get_mpz_t(), a.exp);
  } else {
    mpz_fdiv_q_2exp(r.get_mpz_t(), a.mant.get_mpz_t(), -a.exp);
  }
  return r;
}

Dyadic dyadic_from_rat_down(const Rat& r, long prec) {
  Int num = r.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), prec);
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), r.get_den().get_mpz_t());
  return Dyadic(q, -prec);
}

Dyadic dyadic_from_rat_up(const Rat& r, long prec) {
  Int num = r.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), prec);
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), r.get_den().get_mpz_t());
  return Dyadic(q, -prec);
}

Dyadic dyadic_div_int_down(const Dyadic& a, const Int& c, long prec) {
  if (sgn(c) == 0) throw std::invalid_argument("dyadic division by zero");
  Int num;
  mpz_mul_2exp(num.get_mpz_t(), a.mant.get_mpz_t(), prec);
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), c.get_mpz_t());
  return Dyadic(q, a.exp - prec);
}

Dyadic dyadic_div_int_up(const Dyadic& a, const Int& c, long prec) {
  if (sgn(c) == 0) throw std::invalid_argument("dyadic division by zero");
  Int num;
  mpz_mul_2exp(num.get_mpz_t(), a.mant.get_mpz_t(), prec);
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), c.get_mpz_t());
  return Dyadic(q, a.exp - prec);
}

Interval interval_add(const Interval& a, const Interval& b) {
  return Interval(dyadic_add(a.lo, b.lo), dyadic_add(a.hi, b.hi));
}

Interval interval_neg(const Interval& a) {
  return Interval(dyadic_neg(a.hi), dyadic_neg(a.lo));
}

Interval interval_sub(const Interval& a, const Interval& b) {
  return interval_add(a, interval_neg(b));
}

Interval interval_mul_int(const Interval& a, const Int& k) {
  if (sgn(k) >= 0)
    return Interval(dyadic_mul_int(a.lo, k), dyadic_mul_int(a.hi, k));
  return Interval(dyadic_mul_int(a.hi, k), dyadic_mul_int(a.lo, k));
}

Interval interval_from_rat(const Rat& r, long prec) {
  return Interval(dyadic_from_rat_down(r, prec), dyadic_from_rat_up(r, prec));
}

Interval interval_mul_rat(const Interval& a, const Rat& r, long prec) {
  if (sgn(r) == 0) return Interval::point(Dyadic());
  Rat lo = a.lo.to_rat() * r;
  Rat hi = a.hi.to_rat() * r;
  if (lo > hi) std::swap(lo, hi);
  return Interval(dyadic_from_rat_down(lo, prec), dyadic_from_rat_up(hi, prec));
}

Interval interval_div_int(const Interval& a, const Int& c, long prec) {
  if (sgn(c) == 0) throw std::invalid_argument("interval division by zero");
  if (sgn(c) > 0)
    return Interval(dyadic_div_int_down(a.lo, c, prec),
                    dyadic_div_int_up(a.hi, c, prec));
  return Interval(dyadic_div_int_down(a.hi, c, prec),
                  dyadic_div_int_up(a.lo, c, prec));
}

Interval sqrt_int_enclosure(const Int& d, long prec) {
  if (sgn(d) < 0) throw std::invalid_argument("sqrt of negative integer");
  Int t;
  mpz_mul_2exp(t.get_mpz_t(), d.get_mpz_t(), 2 * prec);
  Int s;
  mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
  Dyadic lo(s, -prec);
  if (s * s == t) return Interval(lo, lo);
  return Interval(lo, Dyadic(s + 1, -prec));
}

}  // namespace torus

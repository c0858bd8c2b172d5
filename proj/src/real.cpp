#include "torus/real.hpp"

namespace torus {

Real Real::quadratic(Int a, Int b, Int c, Int d) {
  Rat collapsed;
  auto q = QuadIrr::normalize(std::move(a), std::move(b), std::move(c),
                              std::move(d), &collapsed);
  if (!q) return Real(collapsed);
  return Real(*q);
}

const Rat& Real::as_rat() const {
  if (!is_rational()) throw std::logic_error("Real: not rational");
  return std::get<Rat>(v_);
}

const QuadIrr& Real::as_quad() const {
  if (!is_quadratic()) throw std::logic_error("Real: not quadratic");
  return std::get<QuadIrr>(v_);
}

const Interval& Real::as_interval() const {
  if (!is_interval()) throw std::logic_error("Real: not an interval");
  return std::get<Interval>(v_);
}

Interval Real::enclosure(long prec) const {
  if (is_rational()) return interval_from_rat(as_rat(), prec);
  if (is_quadratic()) return as_quad().enclosure(prec);
  return as_interval();
}

double Real::to_double() const {
  if (is_rational()) return as_rat().get_d();
  if (is_quadratic()) return as_quad().to_double();
  const Interval& i = as_interval();
  return (i.lo.to_double() + i.hi.to_double()) / 2;
}

Real Real::add(const Real& o, long prec) const {
  if (is_rational() && o.is_rational())
    return Real(Rat(as_rat() + o.as_rat()));
  if (is_rational() && o.is_quadratic()) return o.add(*this, prec);
  if (is_quadratic() && o.is_rational()) {
    const QuadIrr& q = as_quad();
    const Rat& r = o.as_rat();
    // (a + b sqrt d)/c + p/s = ((a s + p c) + b s sqrt d)/(c s)
    return quadratic(q.a * r.get_den() + r.get_num() * q.c,
                     q.b * r.get_den(), q.c * r.get_den(), q.d);
  }
  if (is_quadratic() && o.is_quadratic()) {
    const QuadIrr& x = as_quad();
    const QuadIrr& y = o.as_quad();
    if (x.d == y.d) {
      return quadratic(x.a * y.c + y.a * x.c, x.b * y.c + y.b * x.c,
                       x.c * y.c, x.d);
    }
    // Different radicands: promote to a frozen enclosure.
    return interval(interval_add(enclosure(prec), o.enclosure(prec)));
  }
  return interval(interval_add(enclosure(prec), o.enclosure(prec)));
}

Real Real::neg() const {
  if (is_rational()) return Real(Rat(-as_rat()));
  if (is_quadratic()) {
    const QuadIrr& q = as_quad();
    return quadratic(-q.a, -q.b, q.c, q.d);
  }
  return interval(interval_neg(as_interval()));
}

Real Real::sub(const Real& o, long prec) const { return add(o.neg(), prec); }

Real Real::mul_int(const Int& k) const {
  if (is_rational()) return Real(Rat(as_rat() * k));
  if (is_quadratic()) {
    const QuadIrr& q = as_quad();
    return quadratic(q.a * k, q.b * k, q.c, q.d);
  }
  return interval(interval_mul_int(as_interval(), k));
}

Real Real::mul_rat(const Rat& r, long prec) const {
  if (is_rational()) return Real(Rat(as_rat() * r));
  if (is_quadratic()) {
    const QuadIrr& q = as_quad();
    return quadratic(q.a * r.get_num(), q.b * r.get_num(),
                     q.c * r.get_den(), q.d);
  }
  return interval(interval_mul_rat(as_interval(), r, prec));
}

Int Real::floor() const {
  if (is_rational()) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), as_rat().get_num().get_mpz_t(),
               as_rat().get_den().get_mpz_t());
    return q;
  }
  if (is_quadratic()) return as_quad().floor();
  const Interval& i = as_interval();
  Int flo = dyadic_floor(i.lo);
  Int fhi = dyadic_floor(i.hi);
  if (flo == fhi) return flo;
  // The upper endpoint may be exactly integral with the value open below it;
  // that is still ambiguous for a frozen enclosure.
  throw precision_exhausted("floor of interval straddling an integer");
}

int Real::sign() const {
  if (is_rational()) return sgn(as_rat());
  if (is_quadratic()) return as_quad().sign();
  const Interval& i = as_interval();
  if (sgn(i.lo.mant) > 0) return 1;
  if (sgn(i.hi.mant) < 0) return -1;
  if (i.lo.is_zero() && i.hi.is_zero()) return 0;
  throw precision_exhausted("sign of interval containing zero");
}

int Real::cmp(const Real& o, long prec_cap) const {
  // Rational and same-radicand pairs are decided directly.
  if (is_rational() && o.is_rational()) return ::cmp(as_rat(), o.as_rat());
  if (is_quadratic() && o.is_rational())
    return as_quad().cmp_rat(o.as_rat());
  if (is_rational() && o.is_quadratic())
    return -o.as_quad().cmp_rat(as_rat());
  if (is_quadratic() && o.is_quadratic()) {
    const QuadIrr& x = as_quad();
    const QuadIrr& y = o.as_quad();
    if (x.d == y.d) return sub(o).sign();
    // Distinct squarefree radicands never collide; refine until separated.
    for (long p = 64; p <= prec_cap; p *= 2) {
      Interval a = enclosure(p), b = o.enclosure(p);
      if (dyadic_cmp(a.hi, b.lo) < 0) return -1;
      if (dyadic_cmp(b.hi, a.lo) < 0) return 1;
    }
    throw precision_exhausted("comparison not separated within precision cap");
  }
  // At least one frozen interval: decide from the enclosures or give up.
  Interval a = enclosure(kDefaultPrec);
  Interval b = o.enclosure(kDefaultPrec);
  if (dyadic_cmp(a.hi, b.lo) < 0) return -1;
  if (dyadic_cmp(b.hi, a.lo) < 0) return 1;
  if (dyadic_cmp(a.lo, a.hi) == 0 && dyadic_cmp(b.lo, b.hi) == 0 &&
      dyadic_cmp(a.lo, b.lo) == 0)
    return 0;  // both degenerate and equal
  // If the non-interval side is exact we can refine it, but the frozen side
  // stays frozen: refine the exact side against the interval's endpoints.
  if (is_exact() || o.is_exact()) {
    const Real& exact = is_exact() ? *this : o;
    const Interval& frozen = is_exact() ? o.as_interval() : as_interval();
    int flip = is_exact() ? 1 : -1;
    for (long p = 64; p <= prec_cap; p *= 2) {
      Interval e = exact.enclosure(p);
      if (dyadic_cmp(e.hi, frozen.lo) < 0) return -flip;
      if (dyadic_cmp(frozen.hi, e.lo) < 0) return flip;
      if (e.width() == 0) break;  // exact side pinned, still inside: overlap
    }
  }
  throw precision_exhausted("interval comparison undecided");
}

Rat Real::err_bound() const {
  if (is_exact()) return Rat(0);
  return as_interval().width() / 2;
}

}  // namespace torus

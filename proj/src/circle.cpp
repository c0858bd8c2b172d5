#include "torus/circle.hpp"

namespace torus {

Real CircleValue::reduce(const Real& x) {
  if (x.is_rational()) return Real(rat_mod1(x.as_rat()));
  if (x.is_quadratic()) {
    Int k = x.floor();
    return x.sub(Real(k));
  }
  const Interval& i = x.as_interval();
  if (i.width() >= 1) {
    // Full circle: canonical wide representative.
    return Real::interval(
        Interval(Dyadic(0, 0), Dyadic(1, 0)));
  }
  Int k = dyadic_floor(i.lo);
  Dyadic shift = Dyadic::from_int(k);
  return Real::interval(
      Interval(dyadic_sub(i.lo, shift), dyadic_sub(i.hi, shift)));
}

bool CircleValue::eq(const CircleValue& o) const {
  return rep_.cmp(o.rep_) == 0;
}

Real norm(const CircleValue& z) {
  const Real& r = z.rep();
  if (r.is_rational()) return Real(rat_norm(r.as_rat()));
  if (r.is_quadratic()) {
    // Representative f in (0, 1), irrational: ||f|| = min(f, 1 - f).
    static const Rat half(1, 2);
    if (r.as_quad().cmp_rat(half) <= 0) return r;
    return Real(Rat(1)).sub(r);
  }
  const Interval& i = r.as_interval();
  Rat lo = i.lo.to_rat();
  Rat hi = i.hi.to_rat();
  if (hi - lo >= 1)
    throw precision_exhausted("norm of interval covering the whole circle");
  // g(t) = ||t|| rises on [0,1/2], falls on [1/2,1]; the representative arc
  // sits in [0, 2) with lo in [0, 1).
  auto g = [](const Rat& t) {
    Rat f = rat_mod1(t);
    Rat h = 1 - f;
    return f <= h ? f : h;
  };
  Rat glo = g(lo), ghi = g(hi);
  Rat mn = glo <= ghi ? glo : ghi;
  Rat mx = glo <= ghi ? ghi : glo;
  // Interior extrema: an integer inside pushes the min to 0; a half-integer
  // inside pushes the max to 1/2.
  auto interior_contains = [&](const Rat& v) { return lo < v && v < hi; };
  if (interior_contains(Rat(1)) || lo == 0) mn = 0;
  if (interior_contains(Rat(1, 2)) || interior_contains(Rat(3, 2))) mx = Rat(1, 2);
  long prec = 64;
  return Real::interval(Interval(dyadic_from_rat_down(mn, prec),
                                 dyadic_from_rat_up(mx, prec)));
}

bool Character::operator<(const Character& o) const {
  Int ma = max_abs(), mb = o.max_abs();
  if (ma != mb) return ma < mb;
  if (coeffs.size() != o.coeffs.size()) return coeffs.size() < o.coeffs.size();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    int c = cmp(coeffs[i], o.coeffs[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

Character Character::canonical_sign() const {
  for (const auto& c : coeffs) {
    if (sgn(c) > 0) return *this;
    if (sgn(c) < 0) return negated();
  }
  return *this;
}

CircleValue eval_char(const Character& phi, const TorusPoint& p, long prec) {
  if (phi.dim() != p.dim())
    throw std::invalid_argument("eval_char: dimension mismatch");
  Real acc{Rat(0)};
  for (std::size_t i = 0; i < phi.dim(); ++i) {
    if (sgn(phi.coeffs[i]) == 0) continue;
    acc = acc.add(CircleValue(p.x[i].rep().mul_int(phi.coeffs[i])).rep(), prec);
  }
  return CircleValue(acc);
}

Real metric_d(const TorusPoint& a, const TorusPoint& b, const Metric& m,
              long prec) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("metric_d: dimension mismatch");
  if (m.kind == Metric::Kind::Sup) {
    Real best{Rat(0)};
    bool any_interval = false;
    std::vector<Real> norms;
    norms.reserve(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
      Real n = norm(a.x[i].sub(b.x[i], prec));
      any_interval = any_interval || n.is_interval();
      norms.push_back(std::move(n));
    }
    if (!any_interval) {
      for (const auto& n : norms)
        if (n.cmp(best) > 0) best = n;
      return best;
    }
    // With interval terms, take the endpoint-wise max enclosure instead of
    // forcing possibly undecidable comparisons.
    Interval acc = norms.empty() ? Interval() : norms[0].enclosure(prec);
    for (std::size_t i = 1; i < norms.size(); ++i) {
      Interval e = norms[i].enclosure(prec);
      Dyadic lo = dyadic_cmp(acc.lo, e.lo) >= 0 ? acc.lo : e.lo;
      Dyadic hi = dyadic_cmp(acc.hi, e.hi) >= 0 ? acc.hi : e.hi;
      acc = Interval(lo, hi);
    }
    return Real::interval(acc);
  }
  // Weighted metric on truncations: sum_i 2^-i ||.||, weight 1 at
  // coordinate 0. Weights are dyadic so rational inputs stay exact.
  Real acc{Rat(0)};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Real n = norm(a.x[i].sub(b.x[i], prec));
    acc = acc.add(n.mul_rat(rat_pow2(-static_cast<long>(i)), prec), prec);
  }
  return acc;
}

std::vector<Convergent> cf_convergents(const QuadIrr& alpha, std::size_t k) {
  return QuadCF::convergents(alpha, k);
}

}  // namespace torus

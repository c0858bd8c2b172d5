#include "torus/quadratic.hpp"

#include <map>
#include <utility>

namespace torus {

std::pair<Int, Int> QuadIrr::squarefree_split(const Int& n) {
  if (sgn(n) <= 0) throw std::invalid_argument("radicand must be positive");
  Int s = 1, f = 1, m = n;
  for (Int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2) f *= p;
  }
  f *= m;
  return {s, f};
}

std::optional<QuadIrr> QuadIrr::normalize(Int a, Int b, Int c, Int d,
                                          Rat* rational_out) {
  if (sgn(c) == 0) throw std::invalid_argument("zero denominator");
  auto [s, f] = squarefree_split(d);
  b *= s;
  d = f;
  if (sgn(b) == 0 || d == 1) {
    if (rational_out) *rational_out = make_rat(a + b, c);  // d == 1: sqrt = 1
    return std::nullopt;
  }
  if (sgn(c) < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  Int g = int_gcd(int_gcd(a, b), c);
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
  }
  return QuadIrr{std::move(a), std::move(b), std::move(c), std::move(d)};
}

namespace {

// Sign of a + b*sqrt(d), exact.
int sign_linear(const Int& a, const Int& b, const Int& d) {
  int sa = sgn(a), sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa > 0 && sb > 0) return 1;
  if (sa < 0 && sb < 0) return -1;
  // Mixed signs: compare a^2 against b^2 d on the side of the larger term.
  Int lhs = a * a, rhs = b * b * d;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // cannot happen for squarefree d > 1, but harmless
  // |a| > |b|sqrt(d) ? sign follows a : sign follows b.
  return c > 0 ? sa : sb;
}

}  // namespace

int QuadIrr::sign() const { return sign_linear(a, b, d); }

int QuadIrr::cmp_rat(const Rat& r) const {
  // (a + b sqrt(d))/c - p/q has the sign of (aq - pc) + qb sqrt(d).
  const Int& p = r.get_num();
  const Int& q = r.get_den();
  return sign_linear(a * q - p * c, q * b, d);
}

Int QuadIrr::floor() const {
  Interval e = enclosure(32);
  Int k = dyadic_floor(e.lo);
  while (cmp_rat(Rat(k + 1)) >= 0) ++k;
  while (cmp_rat(Rat(k)) < 0) --k;
  return k;
}

Interval QuadIrr::enclosure(long prec) const {
  long guard = static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 2)) +
               static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)) + 4;
  Interval s = sqrt_int_enclosure(d, prec + guard);
  Interval num = interval_add(interval_mul_int(s, b),
                              Interval::point(Dyadic::from_int(a)));
  return interval_div_int(num, c, prec + guard);
}

double QuadIrr::to_double() const {
  Interval e = enclosure(64);
  return e.lo.to_double();
}

QuadCF::QuadCF(const QuadIrr& x) {
  // Bring x to (P + sqrt(N))/Q with b > 0 folded into N, then scale so
  // Q divides N - P^2.
  Int P0, Q0, N0;
  if (sgn(x.b) > 0) {
    P0 = x.a;
    N0 = x.b * x.b * x.d;
    Q0 = x.c;
  } else {
    P0 = -x.a;
    N0 = x.b * x.b * x.d;
    Q0 = -x.c;
  }
  Int rem = N0 - P0 * P0;
  if (rem % Q0 != 0) {
    Int f = abs(Q0);
    P0 *= f;
    N0 *= f * f;
    Q0 *= f;
  }
  P = P0;
  Q = Q0;
  N = N0;
}

Int QuadCF::next() {
  // Partial quotient floor((P + sqrt(N))/Q), exact either sign of Q.
  Int s;
  mpz_sqrt(s.get_mpz_t(), N.get_mpz_t());
  Int a;
  if (sgn(Q) > 0) {
    mpz_fdiv_q(a.get_mpz_t(), Int(P + s).get_mpz_t(), Q.get_mpz_t());
  } else {
    // floor(y) = -ceil(-y); the value is irrational so no boundary case.
    Int f;
    Int absQ = abs(Q);
    mpz_fdiv_q(f.get_mpz_t(), Int(P + s).get_mpz_t(), absQ.get_mpz_t());
    a = -(f + 1);
  }
  Int Pn = a * Q - P;
  Int Qn = (N - Pn * Pn) / Q;
  P = Pn;
  Q = Qn;
  return a;
}

std::vector<Int> QuadCF::digits(const QuadIrr& x, std::size_t k) {
  QuadCF st(x);
  std::vector<Int> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(st.next());
  return out;
}

std::vector<Convergent> QuadCF::convergents(const QuadIrr& x, std::size_t k) {
  std::vector<Int> a = digits(x, k);
  std::vector<Convergent> out;
  out.reserve(k);
  Int pm1 = 1, pm2 = 0;  // p_{-1}, p_{-2}
  Int qm1 = 0, qm2 = 1;  // q_{-1}, q_{-2}
  for (std::size_t i = 0; i < k; ++i) {
    Int p = a[i] * pm1 + pm2;
    Int q = a[i] * qm1 + qm2;
    out.push_back({p, q});
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  // Gap bound |x - p_i/q_i| < 1/(q_i q_{i+1}), checked exactly where the
  // next denominator is available.
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    const Int& q0 = out[i].q;
    const Int& q1 = out[i + 1].q;
    // |q0 x - p0| < 1/q1  <=>  |q0 (a + b sqrt d) - p0 c| < c/q1.
    Int A = out[i].q * x.a - out[i].p * x.c;
    Int B = out[i].q * x.b;
    // Compare (A + B sqrt d)^2 < (c/q1)^2 exactly:
    // A^2 + B^2 d + 2AB sqrt d < c^2/q1^2.
    // Move to integers: q1^2 (A^2 + B^2 d) - c^2 < -2 q1^2 A B sqrt d.
    Int lhs = q1 * q1 * (A * A + B * B * x.d) - x.c * x.c;
    Int rhs_lin = -2 * q1 * q1 * A * B;
    // lhs < rhs_lin * sqrt(d) ?
    int s = sign_linear(-lhs, rhs_lin, x.d);
    if (s <= 0)
      throw std::logic_error("convergent gap bound violated");
    if (cmp(q1, q0) < 0)
      throw std::logic_error("convergent denominators decreased");
  }
  return out;
}

QuadCF::Periodic QuadCF::periodic(const QuadIrr& x, std::size_t cap) {
  QuadCF st(x);
  std::map<std::pair<Int, Int>, std::size_t> seen;
  std::vector<Int> digits;
  for (std::size_t i = 0; i < cap; ++i) {
    auto key = std::make_pair(st.P, st.Q);
    auto it = seen.find(key);
    if (it != seen.end()) {
      Periodic r;
      r.head.assign(digits.begin(), digits.begin() + it->second);
      r.period.assign(digits.begin() + it->second, digits.end());
      return r;
    }
    seen.emplace(key, i);
    digits.push_back(st.next());
  }
  throw budget_exhausted("continued fraction period not found within cap");
}

}  // namespace torus

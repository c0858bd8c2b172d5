#include "torus/classic.hpp"

namespace torus {

Rat FactorialDigits::partial_sum(std::size_t upto) const {
  Rat acc(0);
  Int fact = 1;  // (n+1)!
  for (std::size_t n = 1; n <= upto && n <= digits.size(); ++n) {
    fact *= static_cast<long>(n + 1);
    acc += make_rat(digits[n - 1], fact);
  }
  return acc;
}

FactorialDigits factorial_expand(const CircleValue& x, std::size_t depth) {
  if (!x.rep().is_exact())
    throw precision_exhausted("expansion needs an exact input");
  FactorialDigits out;
  out.x = x;
  Real y = x.rep();  // y_1 = x, each y_n in [0, 1)
  for (std::size_t n = 1; n <= depth; ++n) {
    out.tails.push_back(y);
    if (y.is_rational() && sgn(y.as_rat()) == 0) {
      out.terminated = true;
      // Zero tail: all remaining digits are zero.
      for (std::size_t k = n; k <= depth; ++k) out.digits.push_back(Int(0));
      out.tails.resize(depth, Real(Rat(0)));
      break;
    }
    Real scaled = y.mul_int(Int(static_cast<long>(n + 1)));
    Int c = scaled.floor();
    if (c < 0 || c > static_cast<long>(n))
      throw std::logic_error("factorial digit out of range");
    out.digits.push_back(c);
    y = scaled.sub(Real(c));
  }
  if (!out.terminated && !out.tails.empty()) {
    // Check whether the state after the last digit is exactly zero.
    Real last = out.tails.back();
    Real scaled = last.mul_int(Int(static_cast<long>(out.tails.size() + 1)));
    Real rem = scaled.sub(Real(scaled.floor()));
    if (rem.is_rational() && sgn(rem.as_rat()) == 0) out.terminated = true;
  }
  return out;
}

CharSet factorial_charset(std::size_t n_max) {
  CharSet b(1);
  Int fact = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    fact *= static_cast<long>(n);
    std::vector<Character> level;
    level.reserve(n);
    for (std::size_t k = 1; k <= n; ++k)
      level.push_back(Character::one_dim(fact * static_cast<long>(k)));
    b.push_level(std::move(level));
  }
  return b;
}

std::optional<WitnessPair> witness_pair(const FactorialDigits& d,
                                        std::size_t n) {
  if (n == 0 || n > d.digits.size())
    throw std::invalid_argument("witness stage beyond expansion depth");
  const Real& y = d.tails[n - 1];
  Rat quarter(1, 4);
  for (Int k = 1; k <= static_cast<long>(n); ++k) {
    CircleValue z(y.mul_int(k));
    Real v = norm(z);
    if (v.cmp(Real(quarter)) >= 0) return WitnessPair{k, n, v};
  }
  // When the digit c_n avoids 0 and n, y_n = frac(n! x) lies in
  // [1/(n+1), (n+1-...)/(n+1)] and some multiple k <= n must clear 1/4.
  const Int& c = d.digits[n - 1];
  if (sgn(c) != 0 && c != static_cast<long>(n))
    throw std::logic_error("no witness multiple despite interior digit");
  return std::nullopt;
}

namespace {

bool is_prime(const Int& p) {
  return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

}  // namespace

CharSet prufer_charset(const Int& p, std::size_t n_levels) {
  if (!is_prime(p)) throw std::invalid_argument("base must be prime");
  CharSet b(1);
  Int pw = 1;
  for (std::size_t n = 0; n < n_levels; ++n) {
    b.push_level({Character::one_dim(pw)});
    pw *= p;
  }
  return b;
}

CharSet cyclic_cf_charset(const QuadIrr& alpha, std::size_t k) {
  auto conv = cf_convergents(alpha, k);
  CharSet b(1);
  for (const auto& c : conv) {
    Character ch = Character::one_dim(c.q);
    if (!b.contains(ch)) b.push_level({std::move(ch)});
  }
  return b;
}

}  // namespace torus

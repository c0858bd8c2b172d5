#pragma once

#include <vector>

#include "torus/real.hpp"

namespace torus {

// A point of R/Z held by its canonical representative in [0, 1). Interval
// representatives are reduced so the lower endpoint lies in [0, 1); the
// upper endpoint may reach past 1 (an arc crossing the seam).
class CircleValue {
 public:
  CircleValue() : rep_(Rat(0)) {}
  explicit CircleValue(const Real& x) : rep_(reduce(x)) {}
  explicit CircleValue(Rat r) : rep_(reduce(Real(std::move(r)))) {}

  static CircleValue zero() { return CircleValue(); }

  const Real& rep() const { return rep_; }
  bool is_exact() const { return rep_.is_exact(); }
  bool is_zero() const { return rep_.is_exact() && rep_.sign() == 0; }

  // Exact equality as circle points (exact tiers only; intervals compare
  // via their representatives and may throw precision_exhausted).
  bool eq(const CircleValue& o) const;

  CircleValue add(const CircleValue& o, long prec = kDefaultPrec) const {
    return CircleValue(rep_.add(o.rep_, prec));
  }
  CircleValue sub(const CircleValue& o, long prec = kDefaultPrec) const {
    return CircleValue(rep_.sub(o.rep_, prec));
  }
  CircleValue neg() const { return CircleValue(rep_.neg()); }
  CircleValue mul_int(const Int& k) const {
    return CircleValue(rep_.mul_int(k));
  }

 private:
  static Real reduce(const Real& x);
  Real rep_;
};

// Distance to the nearest integer, in [0, 1/2]. Exact tiers give an exact
// Real; interval representatives give an interval enclosure. Throws
// precision_exhausted when the representative is too wide to say anything
// (width >= 1).
Real norm(const CircleValue& z);

struct TorusPoint {
  std::vector<CircleValue> x;

  TorusPoint() = default;
  explicit TorusPoint(std::vector<CircleValue> v) : x(std::move(v)) {}
  std::size_t dim() const { return x.size(); }

  static TorusPoint zero(std::size_t d) {
    return TorusPoint(std::vector<CircleValue>(d));
  }
  bool is_zero() const {
    for (const auto& c : x)
      if (!c.is_zero()) return false;
    return true;
  }
  bool eq(const TorusPoint& o) const {
    if (dim() != o.dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!x[i].eq(o.x[i])) return false;
    return true;
  }
};

// A character of T^d: an integer coefficient vector acting by the dot
// product mod 1. For truncated infinite products the vector length is the
// truncation and the support is wherever the entries are nonzero.
struct Character {
  std::vector<Int> coeffs;

  Character() = default;
  explicit Character(std::vector<Int> c) : coeffs(std::move(c)) {}
  static Character one_dim(Int k) { return Character({std::move(k)}); }

  std::size_t dim() const { return coeffs.size(); }
  bool is_zero() const {
    for (const auto& c : coeffs)
      if (sgn(c) != 0) return false;
    return true;
  }
  Int max_abs() const {
    Int m = 0;
    for (const auto& c : coeffs) {
      Int a = abs(c);
      if (a > m) m = a;
    }
    return m;
  }
  bool operator==(const Character& o) const { return coeffs == o.coeffs; }
  bool operator<(const Character& o) const;  // (max_abs, lex) canonical order

  Character negated() const {
    std::vector<Int> c;
    c.reserve(coeffs.size());
    for (const auto& v : coeffs) c.push_back(-v);
    return Character(std::move(c));
  }
  // Canonical sign: first nonzero entry positive.
  Character canonical_sign() const;
};

CircleValue eval_char(const Character& phi, const TorusPoint& p,
                      long prec = kDefaultPrec);

struct Metric {
  enum class Kind { Sup, OmegaWeighted } kind = Kind::Sup;

  static Metric sup() { return Metric{Kind::Sup}; }
  static Metric omega() { return Metric{Kind::OmegaWeighted}; }
};

// Translation-invariant distance. Sup: max_i ||x_i - y_i||. OmegaWeighted:
// sum_i 2^-i ||x_i - y_i|| on truncations of the infinite product
// (coordinate 0 carries weight 1).
Real metric_d(const TorusPoint& a, const TorusPoint& b, const Metric& m,
              long prec = kDefaultPrec);

// Convergents p_i/q_i of a quadratic irrational, the denominators being the
// classical rational-approximation character sequence.
std::vector<Convergent> cf_convergents(const QuadIrr& alpha, std::size_t k);

}  // namespace torus

#pragma once

#include <variant>

#include "torus/quadratic.hpp"

namespace torus {

// Exact real in one of three tiers: rational, quadratic irrational, or a
// frozen dyadic enclosure. Arithmetic stays in the exact tiers whenever the
// result is representable there (same radicand, rational scaling); anything
// else promotes to an interval at the operation's precision. Comparisons on
// exact operands are decided exactly (refining enclosures as needed);
// comparisons against or between intervals are semidecided and throw
// precision_exhausted when the enclosures overlap.
class Real {
 public:
  Real() : v_(Rat(0)) {}
  explicit Real(Rat r) : v_(std::move(r)) {}
  explicit Real(const Int& n) : v_(Rat(n)) {}

  static Real rational(Rat r) { return Real(std::move(r)); }
  static Real quadratic(Int a, Int b, Int c, Int d);
  static Real interval(Interval i) { return Real(std::move(i)); }
  static Real sqrt_of(const Int& d) { return quadratic(0, 1, 1, d); }

  bool is_rational() const { return std::holds_alternative<Rat>(v_); }
  bool is_quadratic() const { return std::holds_alternative<QuadIrr>(v_); }
  bool is_interval() const { return std::holds_alternative<Interval>(v_); }
  bool is_exact() const { return !is_interval(); }

  const Rat& as_rat() const;
  const QuadIrr& as_quad() const;
  const Interval& as_interval() const;

  Interval enclosure(long prec) const;
  double to_double() const;

  Real add(const Real& o, long prec = kDefaultPrec) const;
  Real sub(const Real& o, long prec = kDefaultPrec) const;
  Real neg() const;
  Real mul_int(const Int& k) const;
  Real mul_rat(const Rat& r, long prec = kDefaultPrec) const;

  Int floor() const;  // exact tiers always; interval only when unambiguous

  // Exact sign for exact tiers; for intervals, decided only when the
  // enclosure excludes zero, else precision_exhausted.
  int sign() const;

  // Three-way comparison. Exact-vs-exact is always decided (refining to
  // prec_cap when the operands live over different radicands, which in fact
  // always separates); interval operands are frozen, so overlap throws.
  int cmp(const Real& o, long prec_cap = kPrecCap) const;

  bool eq(const Real& o, long prec_cap = kPrecCap) const {
    return cmp(o, prec_cap) == 0;
  }

  // Error radius of the stored representation; exact tiers report zero.
  // Used for display and CSV "err" columns.
  Rat err_bound() const;

 private:
  explicit Real(QuadIrr q) : v_(std::move(q)) {}
  explicit Real(Interval i) : v_(std::move(i)) {}

  std::variant<Rat, QuadIrr, Interval> v_;
};

}  // namespace torus

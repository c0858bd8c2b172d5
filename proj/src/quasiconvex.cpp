#include "torus/quasiconvex.hpp"

#include <algorithm>
#include <set>

namespace torus {

namespace {

bool norm_at_most(const Character& phi, const TorusPoint& e, const Rat& tol) {
  CircleValue v = eval_char(phi, e);
  if (v.rep().is_rational()) return rat_norm(v.rep().as_rat()) <= tol;
  return norm(v).cmp(Real(tol)) <= 0;
}

std::vector<Int> point_numerators(const TorusPoint& p, const Int& q) {
  std::vector<Int> v(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) {
    const Rat& r = p.x[j].rep().as_rat();
    v[j] = r.get_num() * (q / r.get_den());
  }
  return v;
}

// All elements of the subgroup of (Z/q)^d generated by the given vectors,
// as numerator vectors in [0, q)^d. Breadth-first closure, budget-capped.
std::set<std::vector<Int>> span_mod_q(const std::vector<std::vector<Int>>& gens,
                                      std::size_t dim, const Int& q,
                                      std::size_t budget) {
  std::set<std::vector<Int>> seen;
  std::vector<std::vector<Int>> frontier;
  std::vector<Int> zero(dim, 0);
  seen.insert(zero);
  frontier.push_back(zero);
  while (!frontier.empty()) {
    std::vector<std::vector<Int>> next;
    for (const auto& v : frontier) {
      for (const auto& g : gens) {
        std::vector<Int> w(dim);
        for (std::size_t j = 0; j < dim; ++j) {
          w[j] = v[j] + g[j];
          mpz_fdiv_r(w[j].get_mpz_t(), w[j].get_mpz_t(), q.get_mpz_t());
        }
        if (seen.insert(w).second) {
          if (seen.size() > budget)
            throw budget_exhausted("generated subgroup exceeds budget");
          next.push_back(std::move(w));
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

bool rat_point_less(const TorusPoint& a, const TorusPoint& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    int c = cmp(a.x[i].rep().as_rat(), b.x[i].rep().as_rat());
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace

bool CharWindow::contains(const Character& phi) const {
  if (phi.dim() != dim)
    throw std::invalid_argument("window membership: dimension mismatch");
  for (const auto& e : E)
    if (!norm_at_most(phi, e, tol)) return false;
  return true;
}

CharWindow char_window(const std::vector<TorusPoint>& E, std::size_t dim,
                       int m, std::size_t residue_budget) {
  if (m < 0) throw std::invalid_argument("window level must be nonnegative");
  CharWindow w;
  w.E = E;
  w.dim = dim;
  w.m = m;
  w.tol = rat_pow2(-(m + 2));
  for (const auto& e : E) {
    if (e.dim() != dim) throw std::invalid_argument("window point dimension");
    for (const auto& c : e.x) w.rational = w.rational && c.rep().is_rational();
  }
  if (!w.rational) return w;  // per-character test only
  w.q = common_denominator(E);

  // Subgroup windows are exactly the annihilator lattice: a nontrivial
  // finite subgroup of the circle always contains a point of norm >= 1/3,
  // which is already past the 2^-(m+2) <= 1/4 tolerance.
  std::vector<TorusPoint> distinct = E;
  std::sort(distinct.begin(), distinct.end(), rat_point_less);
  distinct.erase(
      std::unique(distinct.begin(), distinct.end(),
                  [](const TorusPoint& a, const TorusPoint& b) {
                    return a.eq(b);
                  }),
      distinct.end());
  ClosedSubgroup cl = closure(distinct, dim);
  bool is_subgroup =
      cl.is_finite() && cl.order.value() == Int(distinct.size());

  if (is_subgroup) {
    IntMatrix basis = annihilator(distinct, dim);
    std::vector<std::vector<Int>> gens;
    for (std::size_t j = 0; j < basis.cols; ++j) {
      std::vector<Int> g(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        g[i] = basis.at(i, j);
        mpz_fdiv_r(g[i].get_mpz_t(), g[i].get_mpz_t(), w.q.get_mpz_t());
      }
      gens.push_back(std::move(g));
    }
    try {
      auto classes = span_mod_q(gens, dim, w.q, residue_budget);
      std::vector<Character> reps;
      reps.reserve(classes.size());
      for (const auto& v : classes) reps.push_back(Character(v));
      w.residues = std::move(reps);
    } catch (const budget_exhausted&) {
      // No residue table; membership stays available per character.
    }
    return w;
  }

  // General rational window: exhaustive residue scan when q^dim fits.
  Int total = 1;
  bool fits = true;
  for (std::size_t i = 0; i < dim && fits; ++i) {
    total *= w.q;
    if (total > static_cast<unsigned long>(residue_budget)) fits = false;
  }
  if (!fits) return w;
  std::vector<Character> reps;
  std::vector<Int> r(dim, 0);
  while (true) {
    Character phi{std::vector<Int>(r)};
    if (w.contains(phi)) reps.push_back(std::move(phi));
    std::size_t i = 0;
    for (; i < dim; ++i) {
      ++r[i];
      if (r[i] < w.q) break;
      r[i] = 0;
    }
    if (i == dim) break;
  }
  std::sort(reps.begin(), reps.end());
  w.residues = std::move(reps);
  return w;
}

QuasiHull quasi_hull(const std::vector<TorusPoint>& E, std::size_t dim, int m,
                     std::size_t residue_budget, std::size_t candidate_budget) {
  if (m < 0) throw std::invalid_argument("hull level must be nonnegative");
  QuasiHull out;
  out.E = E;
  out.m = m;
  for (const auto& e : E) {
    if (e.dim() != dim) throw std::invalid_argument("hull point dimension");
    for (const auto& c : e.x)
      if (!c.rep().is_rational())
        throw std::invalid_argument("hull requires rational points");
  }
  std::vector<TorusPoint> distinct = E;
  std::sort(distinct.begin(), distinct.end(), rat_point_less);
  distinct.erase(
      std::unique(distinct.begin(), distinct.end(),
                  [](const TorusPoint& a, const TorusPoint& b) {
                    return a.eq(b);
                  }),
      distinct.end());
  if (distinct.empty()) distinct.push_back(TorusPoint::zero(dim));

  Int q = common_denominator(distinct);
  ClosedSubgroup cl = closure(distinct, dim);

  // Cyclic structure of <E>: append q*I to the numerator columns and read
  // the orders off the Smith diagonal; the hull search bound is the largest
  // order (minimal residues keep every coefficient within it).
  IntMatrix cm(dim, distinct.size() + dim);
  for (std::size_t j = 0; j < distinct.size(); ++j) {
    auto v = point_numerators(distinct[j], q);
    for (std::size_t i = 0; i < dim; ++i) cm.at(i, j) = v[i];
  }
  for (std::size_t i = 0; i < dim; ++i) cm.at(i, distinct.size() + i) = q;
  // Reduce to a column-lattice basis first; the invariant factors agree and
  // snf's transforms stay dim x dim instead of point-count sized.
  SmithResult s = snf(hnf_rows(cm.transpose()).transpose());
  Int M = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    Int o = q / s.diag[i];
    if (o > M) M = o;
  }
  out.search_bound = M;

  bool is_subgroup =
      cl.is_finite() && cl.order.value() == Int(distinct.size());
  if (is_subgroup) {
    out.subgroup_fast_path = true;
    out.hull = distinct;
    std::sort(out.hull.begin(), out.hull.end(), rat_point_less);
    return out;
  }

  CharWindow w = char_window(distinct, dim, m, residue_budget);
  if (!w.residues)
    throw budget_exhausted("window residue enumeration exceeds budget");

  std::vector<std::vector<Int>> gens;
  gens.reserve(distinct.size());
  for (const auto& e : distinct) gens.push_back(point_numerators(e, q));
  auto candidates = span_mod_q(gens, dim, q, candidate_budget);

  Rat quarter(1, 4);
  for (const auto& v : candidates) {
    bool in_e = false;
    for (const auto& g : gens) in_e = in_e || g == v;
    bool ok = true;
    if (!in_e && !(std::all_of(v.begin(), v.end(),
                               [](const Int& x) { return sgn(x) == 0; }))) {
      for (const auto& r : *w.residues) {
        Int dot = 0;
        for (std::size_t i = 0; i < dim; ++i) dot += r.coeffs[i] * v[i];
        if (rat_norm(make_rat(dot, q)) > quarter) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      std::vector<CircleValue> coords(dim);
      for (std::size_t i = 0; i < dim; ++i)
        coords[i] = CircleValue(make_rat(v[i], q));
      out.hull.emplace_back(std::move(coords));
    }
  }
  std::sort(out.hull.begin(), out.hull.end(), rat_point_less);
  return out;
}

}  // namespace torus

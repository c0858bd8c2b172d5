#include "torus/characterizer.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "torus/arcs.hpp"

namespace torus {

namespace {

bool point_exact_eq(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!a.x[i].is_exact() || !b.x[i].is_exact()) return false;
  return a.eq(b);
}

void push_unique(std::vector<TorusPoint>& pts, const TorusPoint& p) {
  for (const auto& q : pts)
    if (point_exact_eq(q, p)) return;
  pts.push_back(p);
}

TorusPoint negate(const TorusPoint& p) {
  std::vector<CircleValue> c;
  c.reserve(p.dim());
  for (const auto& v : p.x) c.push_back(v.neg());
  return TorusPoint(std::move(c));
}

std::vector<TorusPoint> normalize_stage(std::vector<TorusPoint> pts,
                                        std::size_t dim) {
  std::vector<TorusPoint> out;
  out.push_back(TorusPoint::zero(dim));
  for (const auto& p : pts) {
    if (p.dim() != dim)
      throw std::invalid_argument("tower stage: dimension mismatch");
    push_unique(out, p);
    push_unique(out, negate(p));
  }
  return out;
}

bool all_rational(const std::vector<TorusPoint>& pts) {
  for (const auto& p : pts)
    for (const auto& c : p.x)
      if (!c.rep().is_rational()) return false;
  return true;
}

Rat rat_coord(const CircleValue& c) {
  if (!c.rep().is_rational())
    throw std::invalid_argument("rational coordinate required");
  return c.rep().as_rat();
}

}  // namespace

std::vector<TorusPoint> Tower::stage(std::size_t n) const {
  switch (kind) {
    case Kind::WordBall: {
      // Words of length <= n: all sums of generators with total coefficient
      // mass at most n.
      std::vector<TorusPoint> pts;
      pts.push_back(TorusPoint::zero(dim));
      std::vector<TorusPoint> frontier = pts;
      for (std::size_t step = 0; step < n; ++step) {
        std::vector<TorusPoint> next;
        for (const auto& p : frontier) {
          for (const auto& g : generators) {
            for (int s = -1; s <= 1; s += 2) {
              TorusPoint q = p;
              for (std::size_t i = 0; i < dim; ++i)
                q.x[i] = s > 0 ? q.x[i].add(g.x[i]) : q.x[i].sub(g.x[i]);
              bool fresh = true;
              for (const auto& seen : pts)
                if (point_exact_eq(seen, q)) {
                  fresh = false;
                  break;
                }
              if (fresh) {
                pts.push_back(q);
                next.push_back(q);
              }
            }
          }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
      }
      return pts;
    }
    case Kind::Refinement: {
      std::vector<CircleValue> g;
      Int order = 1;
      for (const auto& b : bases) {
        Int bn = 1;
        for (std::size_t i = 0; i <= n; ++i) bn *= b;
        g.push_back(CircleValue(make_rat(1, bn)));
        order = int_lcm(order, bn);
      }
      if (order > Int(1) << 22)
        throw budget_exhausted("refinement stage too large to materialize");
      std::vector<TorusPoint> pts;
      long ord = static_cast<long>(order.get_si());
      pts.reserve(ord);
      for (long k = 0; k < ord; ++k) {
        std::vector<CircleValue> c;
        c.reserve(dim);
        for (const auto& gi : g) c.push_back(gi.mul_int(k));
        pts.push_back(TorusPoint(std::move(c)));
      }
      return pts;
    }
    case Kind::Explicit:
      return explicit_stages.at(n);
  }
  throw std::logic_error("tower kind");
}

std::size_t Tower::max_stage() const {
  if (kind == Kind::Explicit) return explicit_stages.size() - 1;
  return SIZE_MAX;
}

ClosedSubgroup Tower::union_closure() const {
  switch (kind) {
    case Kind::WordBall: {
      std::vector<TorusPoint> rational;
      bool irrational = false;
      for (const auto& g : generators) {
        bool r = true;
        for (const auto& c : g.x)
          if (!c.rep().is_rational()) r = false;
        if (r)
          rational.push_back(g);
        else
          irrational = true;
      }
      if (irrational && !irrational_dependency)
        throw std::invalid_argument(
            "irrational generators need a declared dependency lattice");
      return closure(rational, dim, irrational_dependency);
    }
    case Kind::Refinement: {
      std::size_t trivial = 0;
      for (const auto& b : bases)
        if (b == 1) ++trivial;
      IntMatrix cols(dim, trivial);
      std::size_t j = 0;
      for (std::size_t i = 0; i < dim; ++i)
        if (bases[i] == 1) cols.at(i, j++) = 1;
      return subgroup_from_annihilator(cols, dim);
    }
    case Kind::Explicit: {
      if (declared_dense && *declared_dense)
        return subgroup_from_annihilator(IntMatrix(dim, 0), dim);
      const auto& last = explicit_stages.back();
      if (!all_rational(last))
        throw std::invalid_argument(
            "closure of an irrational explicit tower needs declared_dense");
      return closure(last, dim);
    }
  }
  throw std::logic_error("tower kind");
}

Tower word_ball_tower(std::vector<TorusPoint> generators, std::size_t dim,
                      std::optional<IntMatrix> irrational_dependency,
                      Metric metric) {
  Tower t;
  t.kind = Tower::Kind::WordBall;
  t.dim = dim;
  t.metric = metric;
  for (const auto& g : generators)
    if (g.dim() != dim)
      throw std::invalid_argument("generator dimension mismatch");
  t.generators = std::move(generators);
  t.irrational_dependency = std::move(irrational_dependency);
  return t;
}

Tower refinement_tower(std::vector<Int> bases, std::size_t dim,
                       Metric metric) {
  if (bases.size() != dim)
    throw std::invalid_argument("one base per coordinate");
  for (const auto& b : bases)
    if (b < 1) throw std::invalid_argument("bases must be positive");
  Tower t;
  t.kind = Tower::Kind::Refinement;
  t.dim = dim;
  t.metric = metric;
  t.bases = std::move(bases);
  return t;
}

Tower explicit_tower(std::vector<std::vector<TorusPoint>> stages,
                     std::size_t dim, std::optional<bool> declared_dense,
                     Metric metric) {
  if (stages.empty()) throw std::invalid_argument("no stages");
  Tower t;
  t.kind = Tower::Kind::Explicit;
  t.dim = dim;
  t.metric = metric;
  t.declared_dense = declared_dense;
  for (auto& s : stages)
    t.explicit_stages.push_back(normalize_stage(std::move(s), dim));
  // Stages must be increasing.
  for (std::size_t n = 0; n + 1 < t.explicit_stages.size(); ++n)
    for (const auto& p : t.explicit_stages[n]) {
      bool found = false;
      for (const auto& q : t.explicit_stages[n + 1])
        if (point_exact_eq(p, q)) {
          found = true;
          break;
        }
      if (!found) throw std::invalid_argument("tower stages must be nested");
    }
  return t;
}

EpsilonSchedule epsilons(const std::vector<std::vector<TorusPoint>>& hulls,
                         const Metric& metric, const Rat& eps0_cap) {
  if (hulls.size() < 2)
    throw std::invalid_argument("need hulls F_0..F_L with L >= 1");
  if (eps0_cap <= 0 || eps0_cap > Rat(1, 8))
    throw std::invalid_argument("eps0_cap must lie in (0, 1/8]");
  EpsilonSchedule s;
  Rat prev = 2 * eps0_cap;
  for (std::size_t n = 0; n + 1 < hulls.size(); ++n) {
    const auto& next_hull = hulls[n + 1];
    Rat delta(0);
    bool circle_rational = true;
    for (const auto& p : next_hull)
      circle_rational = circle_rational && p.dim() == 1 &&
                        p.x[0].rep().is_rational();
    if (circle_rational && next_hull.size() >= 2) {
      // On the circle the smallest pairwise distance is the smallest gap
      // between sorted neighbors (both arcs around any pair contain a full
      // gap), so sorting beats the all-pairs scan.
      std::vector<Rat> v;
      v.reserve(next_hull.size());
      for (const auto& p : next_hull) v.push_back(p.x[0].rep().as_rat());
      std::sort(v.begin(), v.end());
      for (std::size_t i = 0; i < v.size(); ++i) {
        Rat g = i + 1 < v.size() ? Rat(v[i + 1] - v[i])
                                 : Rat(v[0] + 1 - v.back());
        if (g == 0) throw std::invalid_argument("duplicate hull point");
        if (delta == 0 || g < delta) delta = g;
      }
    } else {
      for (std::size_t i = 0; i < next_hull.size(); ++i)
        for (std::size_t j = i + 1; j < next_hull.size(); ++j) {
          Real dist = metric_d(next_hull[i], next_hull[j], metric);
          if (!dist.is_rational())
            throw std::invalid_argument("hull distances must be rational");
          Rat d = dist.as_rat();
          if (d == 0) throw std::invalid_argument("duplicate hull point");
          if (delta == 0 || d < delta) delta = d;
        }
    }
    Rat e = prev / 2;
    if (next_hull.size() >= 2 && delta / 4 < e) e = delta / 4;
    s.eps.push_back(e);
    s.delta.push_back(delta);
    prev = e;
  }
  return s;
}

namespace {

// Complement of the open eps-neighborhood of F in T, as closed arcs inside
// [0, 1]. F is sorted, distinct, inside [0, 1).
std::vector<Arc> complement_arcs(const std::vector<Rat>& f, const Rat& eps) {
  std::vector<Arc> out;
  std::size_t k = f.size();
  for (std::size_t i = 0; i < k; ++i) {
    Rat a = f[i] + eps;
    Rat b = (i + 1 < k ? f[i + 1] : f[0] + 1) - eps;
    if (a > b) continue;
    if (b <= 1) {
      out.push_back(Arc{a, b});
    } else if (a >= 1) {
      out.push_back(Arc{a - 1, b - 1});
    } else {
      out.push_back(Arc{a, Rat(1)});
      out.insert(out.begin(), Arc{Rat(0), b - 1});
    }
  }
  return out;
}

// Ascending supply of window characters, enumerated by coefficient shells.
struct CandidateStream {
  const CharWindow* w;
  std::size_t dim;
  bool has_residues = false;
  std::set<std::vector<Int>> residue_set;
  Int q = 1;

  Int r = 0;
  std::vector<Character> shell;
  std::size_t shell_pos = 0;
  std::size_t admitted = 0, attempts = 0;
  std::size_t max_candidates;
  static constexpr std::size_t kAttemptCap = std::size_t(1) << 24;

  CandidateStream(const CharWindow& win, std::size_t max_c)
      : w(&win), dim(win.dim), max_candidates(max_c) {
    if (win.residues) {
      has_residues = true;
      q = win.q;
      for (const auto& rchar : *win.residues) {
        std::vector<Int> v(dim);
        for (std::size_t i = 0; i < dim; ++i)
          mpz_fdiv_r(v[i].get_mpz_t(), rchar.coeffs[i].get_mpz_t(),
                     q.get_mpz_t());
        residue_set.insert(std::move(v));
      }
    }
  }

  bool admit(const std::vector<Int>& v) {
    if (has_residues) {
      std::vector<Int> red(dim);
      for (std::size_t i = 0; i < dim; ++i)
        mpz_fdiv_r(red[i].get_mpz_t(), v[i].get_mpz_t(), q.get_mpz_t());
      return residue_set.count(red) > 0;
    }
    return w->contains(Character(v));
  }

  void fill_shell() {
    shell.clear();
    shell_pos = 0;
    ++r;
    if (has_residues && dim == 1) {
      // The shell is {+r} after the sign normalization; test its class
      // directly instead of walking the whole [-r, r] segment, which gets
      // quadratic once q is in the thousands.
      std::vector<Int> v(1);
      mpz_fdiv_r(v[0].get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
      ++attempts;
      if (residue_set.count(v)) shell.push_back(Character({r}));
      return;
    }
    std::vector<Int> v(dim);
    // Lex walk over [-r, r]^dim keeping max == r and canonical sign.
    walk(v, 0, false);
  }

  void walk(std::vector<Int>& v, std::size_t i, bool hit_r) {
    if (i == dim) {
      if (!hit_r) return;
      std::size_t first = 0;
      while (first < dim && sgn(v[first]) == 0) ++first;
      if (first == dim || sgn(v[first]) < 0) return;
      ++attempts;
      if (attempts > kAttemptCap) return;
      if (admit(v)) shell.push_back(Character(v));
      return;
    }
    for (Int val = -r; val <= r; ++val) {
      v[i] = val;
      walk(v, i + 1, hit_r || abs(val) == r);
    }
  }

  std::optional<Character> next() {
    if (admitted >= max_candidates) return std::nullopt;
    while (shell_pos >= shell.size()) {
      if (attempts > kAttemptCap) return std::nullopt;
      fill_shell();
    }
    ++admitted;
    return shell[shell_pos++];
  }
};

struct Gain {
  Rat measure{0};
  std::size_t points = 0;
  bool better_than(const Gain& o) const {
    if (measure != o.measure) return measure > o.measure;
    return points > o.points;
  }
  bool zero() const { return measure == 0 && points == 0; }
};

// Open good arcs of phi overlapping [lo, hi]: ((j+1/4)/p, (j+3/4)/p).
template <typename Fn>
void good_arcs_over(const Int& p, const Rat& lo, const Rat& hi, Fn&& fn) {
  Rat ap = lo * Rat(p), bp = hi * Rat(p);
  Int jmin = rat_floor(ap - Rat(3, 4)) + 1;
  Int jmax = rat_ceil(bp - Rat(1, 4)) - 1;
  for (Int j = jmin; j <= jmax; ++j)
    fn(make_rat(4 * j + 1, 4 * p), make_rat(4 * j + 3, 4 * p));
}

Gain gain_of(const Int& p, const ArcSet& uncovered) {
  Gain g;
  for (const auto& arc : uncovered.arcs()) {
    if (arc.degenerate()) {
      Rat f = rat_mod1(arc.lo * Rat(p));
      if (f > Rat(1, 4) && f < Rat(3, 4)) ++g.points;
      continue;
    }
    good_arcs_over(p, arc.lo, arc.hi, [&](const Rat& lo, const Rat& hi) {
      Rat s = std::max(arc.lo, lo), e = std::min(arc.hi, hi);
      if (e > s) g.measure += e - s;
    });
  }
  return g;
}

CoveringCertificate covering_d1(const std::vector<TorusPoint>& E,
                                const std::vector<TorusPoint>& F,
                                const Rat& eps, std::size_t level,
                                const CharWindow& window,
                                const CoveringBudget& budget) {
  std::vector<Rat> f;
  for (const auto& pt : F) f.push_back(rat_coord(pt.x[0]));
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  if (f.empty()) throw std::invalid_argument("empty hull");

  std::vector<Arc> complement = complement_arcs(f, eps);
  ArcSet uncovered;
  for (const auto& a : complement) uncovered.add(a.lo, a.hi);

  CandidateStream stream(window, budget.max_candidates);
  std::vector<Int> pool;
  std::vector<bool> chosen_flag;
  auto grow_pool = [&](std::size_t target) {
    while (pool.size() < target) {
      auto c = stream.next();
      if (!c) return false;
      pool.push_back(c->coeffs[0]);
      chosen_flag.push_back(false);
    }
    return true;
  };
  grow_pool(8);

  std::vector<Int> chosen;
  while (!uncovered.empty()) {
    std::size_t best = SIZE_MAX;
    Gain best_gain;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (chosen_flag[i]) continue;
      Gain g = gain_of(pool[i], uncovered);
      if (best == SIZE_MAX ? !g.zero() : g.better_than(best_gain)) {
        best = i;
        best_gain = g;
      }
    }
    if (best == SIZE_MAX) {
      std::size_t before = pool.size();
      grow_pool(before < 8 ? 8 : before * 2);
      if (pool.size() == before) {
        std::ostringstream msg;
        msg << "covering level " << level << ": " << uncovered.measure()
            << " measure and " << uncovered.point_count()
            << " points uncovered with the candidate budget spent";
        throw budget_exhausted(msg.str());
      }
      continue;
    }
    chosen.push_back(pool[best]);
    chosen_flag[best] = true;
    std::vector<std::pair<Rat, Rat>> segs;
    for (const auto& arc : uncovered.arcs())
      good_arcs_over(pool[best], arc.lo, arc.hi,
                     [&](const Rat& lo, const Rat& hi) {
                       segs.emplace_back(lo, hi);
                     });
    uncovered.subtract_open_many(std::move(segs));
  }

  // Assemble the checkable pieces: per complement arc, a greedy sweep over
  // the good arcs of the chosen characters.
  CoveringCertificate cert;
  cert.dim = 1;
  cert.n = level;
  cert.E = E;
  cert.F = F;
  cert.eps = eps;
  cert.tol = window.tol;
  for (const auto& p : chosen) cert.B.push_back(Character::one_dim(p));

  std::set<std::tuple<Rat, Rat, Int>> seen;
  for (const auto& arc : complement) {
    struct Piece {
      Rat lo, hi;
      Int phi;
    };
    std::vector<Piece> pieces;
    for (const auto& p : chosen)
      good_arcs_over(p, arc.lo, arc.hi, [&](const Rat& lo, const Rat& hi) {
        pieces.push_back(Piece{lo, hi, p});
      });
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) {
                if (a.lo != b.lo) return a.lo < b.lo;
                if (a.hi != b.hi) return a.hi > b.hi;
                return a.phi < b.phi;
              });
    Rat cur = arc.lo;
    std::size_t i = 0, guard = 0;
    Rat reach = cur;
    std::size_t reach_idx = SIZE_MAX;
    while (true) {
      while (i < pieces.size() && pieces[i].lo < cur) {
        if (reach_idx == SIZE_MAX || pieces[i].hi > reach) {
          reach = pieces[i].hi;
          reach_idx = i;
        }
        ++i;
      }
      if (reach_idx == SIZE_MAX || reach <= cur)
        throw std::logic_error("covering sweep lost a point it had covered");
      const Piece& used = pieces[reach_idx];
      auto key = std::make_tuple(used.lo, used.hi, used.phi);
      if (!seen.count(key)) {
        seen.insert(key);
        cert.arcs.push_back(ArcPiece{used.lo, used.hi, used.phi});
      }
      cur = reach;
      reach_idx = SIZE_MAX;
      if (cur > arc.hi) break;
      if (++guard > pieces.size() + 2)
        throw std::logic_error("covering sweep did not terminate");
    }
  }
  return cert;
}

// Largest circle distance from a point of [u0, u1] to c; exact, attained at
// an endpoint or at the antipode of c.
Rat segment_circle_maxdist(const Rat& u0, const Rat& u1, const Rat& c) {
  Rat m = std::max(rat_norm(u0 - c), rat_norm(u1 - c));
  Rat t0 = u0 - c - Rat(1, 2), t1 = u1 - c - Rat(1, 2);
  if (rat_floor(t1) >= rat_ceil(t0)) m = Rat(1, 2);
  return m;
}

struct Box {
  Rat x0, x1, y0, y1;
  int depth = 0;
};

bool box_inside_ball(const Box& cell, const TorusPoint& f, const Rat& eps,
                     const Metric& metric) {
  Rat dx = segment_circle_maxdist(cell.x0, cell.x1, rat_coord(f.x[0]));
  Rat dy = segment_circle_maxdist(cell.y0, cell.y1, rat_coord(f.x[1]));
  if (metric.kind == Metric::Kind::Sup) return std::max(dx, dy) < eps;
  return dx + dy / 2 < eps;
}

bool box_cleared(const Box& cell, const Character& phi) {
  const Int& p1 = phi.coeffs[0];
  const Int& p2 = phi.coeffs[1];
  Rat lo = Rat(p1) * (sgn(p1) >= 0 ? cell.x0 : cell.x1) +
           Rat(p2) * (sgn(p2) >= 0 ? cell.y0 : cell.y1);
  Rat hi = Rat(p1) * (sgn(p1) >= 0 ? cell.x1 : cell.x0) +
           Rat(p2) * (sgn(p2) >= 0 ? cell.y1 : cell.y0);
  Int j = rat_floor(lo - Rat(1, 4));
  return lo > Rat(j) + Rat(1, 4) && hi < Rat(j) + Rat(3, 4);
}

CoveringCertificate covering_d2(const std::vector<TorusPoint>& E,
                                const std::vector<TorusPoint>& F,
                                const Rat& eps, std::size_t level,
                                const CharWindow& window,
                                const CoveringBudget& budget,
                                const Metric& metric) {
  CoveringCertificate cert;
  cert.dim = 2;
  cert.n = level;
  cert.metric = metric;
  cert.E = E;
  cert.F = F;
  cert.eps = eps;
  cert.tol = window.tol;

  CandidateStream stream(window, budget.max_candidates);
  std::vector<Character> pool;
  auto grow_pool = [&](std::size_t target) {
    while (pool.size() < target) {
      auto c = stream.next();
      if (!c) return false;
      pool.push_back(*c);
    }
    return true;
  };

  const std::size_t cell_cap = std::size_t(1) << 18;
  std::vector<Character> chosen;
  std::vector<Box> active = {Box{Rat(0), Rat(1), Rat(0), Rat(1), 0}};

  while (!active.empty()) {
    std::vector<Box> stubborn;
    for (const auto& cell : active) {
      bool done = false;
      for (std::size_t i = 0; i < F.size() && !done; ++i)
        if (box_inside_ball(cell, F[i], eps, metric)) {
          cert.cells.push_back(
              CoverCell{cell.x0, cell.x1, cell.y0, cell.y1, 0, i});
          done = true;
        }
      for (std::size_t i = 0; i < chosen.size() && !done; ++i)
        if (box_cleared(cell, chosen[i])) {
          cert.cells.push_back(
              CoverCell{cell.x0, cell.x1, cell.y0, cell.y1, 1, i});
          done = true;
        }
      if (!done) stubborn.push_back(cell);
    }
    if (stubborn.empty()) break;

    grow_pool(8);
    std::size_t best = SIZE_MAX, best_gain = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      std::size_t gain = 0;
      for (const auto& cell : stubborn)
        if (box_cleared(cell, pool[i])) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best != SIZE_MAX) {
      chosen.push_back(pool[best]);
      pool.erase(pool.begin() + best);
      active = std::move(stubborn);
      continue;
    }

    std::vector<Box> splittable, stuck;
    for (auto& cell : stubborn)
      (cell.depth < budget.cell_depth ? splittable : stuck).push_back(cell);
    if (!splittable.empty() &&
        cert.cells.size() + stuck.size() + 4 * splittable.size() <= cell_cap) {
      std::vector<Box> next = std::move(stuck);
      for (const auto& c : splittable) {
        Rat mx = (c.x0 + c.x1) / 2, my = (c.y0 + c.y1) / 2;
        next.push_back(Box{c.x0, mx, c.y0, my, c.depth + 1});
        next.push_back(Box{mx, c.x1, c.y0, my, c.depth + 1});
        next.push_back(Box{c.x0, mx, my, c.y1, c.depth + 1});
        next.push_back(Box{mx, c.x1, my, c.y1, c.depth + 1});
      }
      active = std::move(next);
      continue;
    }
    std::size_t before = pool.size();
    grow_pool(before * 2 + 8);
    if (pool.size() > before) {
      active = std::move(stubborn);
      continue;
    }
    std::ostringstream msg;
    msg << "covering level " << level << ": " << stubborn.size()
        << " cells neither inside the hull neighborhood nor cleared, with "
        << "the depth and candidate budgets spent";
    throw budget_exhausted(msg.str());
  }
  cert.B = std::move(chosen);
  return cert;
}

}  // namespace

CoveringCertificate covering(const std::vector<TorusPoint>& E,
                             const std::vector<TorusPoint>& F, const Rat& eps,
                             std::size_t level, const CharWindow& window,
                             const CoveringBudget& budget,
                             const Metric& metric) {
  if (eps <= 0 || eps > Rat(1, 8))
    throw std::invalid_argument("eps must lie in (0, 1/8]");
  if (F.empty()) throw std::invalid_argument("empty hull");
  std::size_t dim = F[0].dim();
  if (!all_rational(E) || !all_rational(F))
    throw std::invalid_argument("covering needs rational stage points");
  if (dim == 1) return covering_d1(E, F, eps, level, window, budget);
  if (dim == 2) return covering_d2(E, F, eps, level, window, budget, metric);
  throw std::invalid_argument("coverings are implemented for T^1 and T^2");
}

std::optional<std::string> verify_covering(const CoveringCertificate& cert) {
  auto fail = [](const std::string& s) { return std::optional<std::string>(s); };
  if (cert.eps <= 0 || cert.eps > Rat(1, 8)) return fail("eps out of range");
  if (cert.tol != rat_pow2(-(static_cast<long>(cert.n) + 2)))
    return fail("tolerance does not match the level");
  if (cert.delta_next && !(2 * cert.eps < *cert.delta_next))
    return fail("2 eps >= min distance of the next hull");

  // Window membership of every chosen character, directly.
  for (const auto& phi : cert.B) {
    if (phi.dim() != cert.dim) return fail("character dimension mismatch");
    if (phi.is_zero()) return fail("zero character cannot clear anything");
    for (const auto& e : cert.E) {
      Real v = norm(eval_char(phi, e));
      if (!v.is_rational()) return fail("window check needs rational points");
      if (v.as_rat() > cert.tol) return fail("a chosen character leaves the window");
    }
  }

  if (cert.dim == 1) {
    std::vector<Rat> f;
    for (const auto& pt : cert.F) {
      if (pt.dim() != 1) return fail("hull dimension mismatch");
      f.push_back(rat_coord(pt.x[0]));
    }
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end())
      return fail("duplicate hull point");

    std::set<Int> bset;
    for (const auto& phi : cert.B) bset.insert(phi.coeffs[0]);
    for (const auto& piece : cert.arcs) {
      if (!bset.count(piece.phi)) return fail("piece cites a character outside B");
      if (!(0 <= piece.lo && piece.lo < piece.hi && piece.hi <= 1))
        return fail("piece endpoints out of order");
      Rat lp = piece.lo * Rat(piece.phi);
      Int j = rat_floor(lp - Rat(1, 4));
      if (!(lp >= Rat(j) + Rat(1, 4) &&
            piece.hi * Rat(piece.phi) <= Rat(j) + Rat(3, 4)))
        return fail("piece is not inside a good arc of its character");
    }

    // Sorted sweep: the best reach from any position is the prefix maximum
    // of piece ends over pieces starting strictly before it.
    std::vector<std::pair<Rat, Rat>> sweep;
    sweep.reserve(cert.arcs.size());
    for (const auto& piece : cert.arcs) sweep.emplace_back(piece.lo, piece.hi);
    std::sort(sweep.begin(), sweep.end(),
              [](const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) {
                return a.first < b.first;
              });
    std::vector<Rat> best_hi(sweep.size());
    for (std::size_t i = 0; i < sweep.size(); ++i)
      best_hi[i] =
          i ? std::max(best_hi[i - 1], sweep[i].second) : sweep[i].second;

    for (const auto& arc : complement_arcs(f, cert.eps)) {
      Rat cur = arc.lo;
      std::size_t guard = 0;
      while (true) {
        std::size_t k =
            std::lower_bound(sweep.begin(), sweep.end(), cur,
                             [](const std::pair<Rat, Rat>& p, const Rat& c) {
                               return p.first < c;
                             }) -
            sweep.begin();
        if (k == 0 || best_hi[k - 1] <= cur) {
          std::ostringstream msg;
          msg << "level " << cert.n << ": point " << cur
              << " of the complement is uncovered";
          return fail(msg.str());
        }
        cur = best_hi[k - 1];
        if (cur > arc.hi) break;
        if (++guard > cert.arcs.size() + 2)
          return fail("coverage sweep does not progress");
      }
    }
    return std::nullopt;
  }

  if (cert.dim != 2) return fail("unsupported dimension");
  Rat area(0);
  for (const auto& cell : cert.cells) {
    if (!(0 <= cell.x0 && cell.x0 < cell.x1 && cell.x1 <= 1 &&
          0 <= cell.y0 && cell.y0 < cell.y1 && cell.y1 <= 1))
      return fail("cell out of the unit square");
    area += (cell.x1 - cell.x0) * (cell.y1 - cell.y0);
    Box box{cell.x0, cell.x1, cell.y0, cell.y1, 0};
    if (cell.kind == 0) {
      if (cell.ref >= cert.F.size()) return fail("cell cites a missing hull point");
      if (!box_inside_ball(box, cert.F[cell.ref], cert.eps, cert.metric))
        return fail("cell is not inside its claimed neighborhood");
    } else if (cell.kind == 1) {
      if (cell.ref >= cert.B.size()) return fail("cell cites a missing character");
      if (!box_cleared(box, cert.B[cell.ref]))
        return fail("cell is not cleared by its claimed character");
    } else {
      return fail("unknown cell kind");
    }
  }
  if (area != 1) return fail("cells do not tile the unit square");
  for (std::size_t i = 0; i < cert.cells.size(); ++i)
    for (std::size_t j = i + 1; j < cert.cells.size(); ++j) {
      const auto& a = cert.cells[i];
      const auto& b = cert.cells[j];
      if (std::min(a.x1, b.x1) > std::max(a.x0, b.x0) &&
          std::min(a.y1, b.y1) > std::max(a.y0, b.y0))
        return fail("two cells overlap");
    }
  return std::nullopt;
}

namespace {

IntMatrix unimodular_inverse(const IntMatrix& w) {
  SmithResult s = snf(w);
  for (const auto& d : s.diag)
    if (d != 1) throw std::logic_error("matrix is not unimodular");
  return s.V.mul(s.U);
}

}  // namespace

std::vector<Character> annihilator_shell(const ClosedSubgroup& n,
                                         std::size_t level) {
  if (n.is_full()) throw std::invalid_argument("the full torus has no shells");
  std::size_t r = n.ann.rows;
  Int radius = Int(level) + 1;
  std::vector<Character> out;
  std::vector<Int> c(r);
  // Odometer over coefficient vectors with box exactly `radius`, canonical
  // sign (first nonzero positive).
  auto emit = [&]() {
    std::vector<Int> phi(n.dim, 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n.dim; ++j) phi[j] += c[i] * n.ann.at(i, j);
    out.push_back(Character(std::move(phi)).canonical_sign());
  };
  std::function<void(std::size_t, bool, bool)> walk =
      [&](std::size_t i, bool hit, bool lead_zero_ok) {
        if (i == r) {
          if (hit) emit();
          return;
        }
        Int start = lead_zero_ok ? Int(0) : -radius;
        for (Int v = start; v <= radius; ++v) {
          c[i] = v;
          bool still_leading = lead_zero_ok && sgn(v) == 0;
          walk(i + 1, hit || abs(v) == radius, still_leading);
        }
      };
  walk(0, false, true);
  std::sort(out.begin(), out.end());
  return out;
}

CharSet lift_charset(const CharSet& b, const ClosedSubgroup& n) {
  if (n.is_finite()) throw std::invalid_argument("lifting needs an infinite subgroup");
  if (!n.inv_factors.empty())
    throw std::invalid_argument("lifting needs a pure subtorus");
  if (b.dim() != n.rank)
    throw std::invalid_argument("inner set dimension must match the rank");
  IntMatrix winv = unimodular_inverse(n.coords);
  std::vector<std::size_t> free_coords;
  for (std::size_t j = 0; j < n.dim; ++j)
    if (n.full_diag[j] == 0) free_coords.push_back(j);

  CharSet out(n.dim);
  for (std::size_t lvl = 0; lvl < b.level_count(); ++lvl) {
    std::vector<Character> level;
    for (const auto& phi : b.level(lvl)) {
      std::vector<Int> lifted(n.dim, 0);
      for (std::size_t t = 0; t < free_coords.size(); ++t) {
        std::size_t j = free_coords[t];
        for (std::size_t i = 0; i < n.dim; ++i)
          lifted[i] += winv.at(j, i) * phi.coeffs[t];
      }
      level.push_back(Character(std::move(lifted)));
    }
    for (auto& shell : annihilator_shell(n, lvl)) level.push_back(shell);
    out.push_level(std::move(level));
  }
  return out;
}

Characterization characterize(const Tower& tower, std::size_t levels,
                              const CoveringBudget& budget,
                              const Rat& eps0_cap) {
  if (levels == 0) throw std::invalid_argument("need at least one level");
  if (tower.max_stage() < levels)
    throw std::invalid_argument("tower too short: need stages 0..levels");

  Characterization result;
  result.B = CharSet(tower.dim);
  ClosedSubgroup n = tower.union_closure();

  if (n.is_full()) {
    result.mode = Characterization::Mode::Dense;
    std::vector<std::vector<TorusPoint>> stages, hulls;
    for (std::size_t lvl = 0; lvl <= levels; ++lvl) {
      stages.push_back(tower.stage(lvl));
      if (!all_rational(stages.back()))
        throw std::invalid_argument(
            "the covering pipeline needs rational stage points");
      hulls.push_back(quasi_hull(stages.back(), tower.dim,
                                 static_cast<int>(lvl),
                                 budget.residue_budget)
                          .hull);
    }
    EpsilonSchedule sched = epsilons(hulls, tower.metric, eps0_cap);
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
      CharWindow window = char_window(stages[lvl], tower.dim,
                                      static_cast<int>(lvl),
                                      budget.residue_budget);
      CoveringCertificate cert =
          covering(stages[lvl], hulls[lvl], sched.eps[lvl], lvl, window,
                   budget, tower.metric);
      if (sched.delta[lvl] != 0) cert.delta_next = sched.delta[lvl];
      result.B.push_level(cert.B);
      result.certs.push_back(std::move(cert));
    }
    return result;
  }

  if (n.is_finite()) {
    result.mode = Characterization::Mode::ClosedSubgroup;
    for (std::size_t lvl = 0; lvl < levels; ++lvl)
      result.B.push_level(annihilator_shell(n, lvl));
    result.checked_points =
        tower.stage(std::min(levels, tower.max_stage()));
    result.subgroup = std::move(n);
    return result;
  }

  if (!n.inv_factors.empty())
    throw std::invalid_argument(
        "closure mixes a finite part with a subtorus; split it first");

  // Proper subtorus: push the tower down to T^rank, characterize there,
  // lift the result and interleave the annihilator shells.
  result.mode = Characterization::Mode::Lifted;
  IntMatrix winv = unimodular_inverse(n.coords);
  std::vector<std::size_t> free_coords;
  for (std::size_t j = 0; j < n.dim; ++j)
    if (n.full_diag[j] == 0) free_coords.push_back(j);

  std::vector<std::vector<TorusPoint>> projected;
  for (std::size_t lvl = 0; lvl <= levels; ++lvl) {
    std::vector<TorusPoint> stage;
    for (const auto& p : tower.stage(lvl)) {
      std::vector<CircleValue> y(n.dim);
      for (std::size_t j = 0; j < n.dim; ++j) {
        std::vector<Int> row(n.dim);
        for (std::size_t i = 0; i < n.dim; ++i) row[i] = winv.at(j, i);
        y[j] = eval_char(Character(std::move(row)), p);
      }
      for (std::size_t j = 0; j < n.dim; ++j)
        if (n.full_diag[j] != 0 && !y[j].is_zero())
          throw std::logic_error("stage point escapes the union closure");
      std::vector<CircleValue> inner_coords;
      for (auto j : free_coords) inner_coords.push_back(y[j]);
      stage.push_back(TorusPoint(std::move(inner_coords)));
    }
    projected.push_back(std::move(stage));
  }
  Tower inner_tower =
      explicit_tower(std::move(projected), n.rank, true, tower.metric);
  Characterization inner =
      characterize(inner_tower, levels, budget, eps0_cap);

  result.B = lift_charset(inner.B, n);
  IntMatrix emb(n.dim, free_coords.size());
  for (std::size_t t = 0; t < free_coords.size(); ++t)
    for (std::size_t i = 0; i < n.dim; ++i)
      emb.at(i, t) = n.coords.at(i, free_coords[t]);
  result.embedding = std::move(emb);
  result.inner = std::make_unique<Characterization>(std::move(inner));
  result.subgroup = std::move(n);
  return result;
}

}  // namespace torus

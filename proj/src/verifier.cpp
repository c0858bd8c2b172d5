#include "torus/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace torus {

namespace {

// Upper bound of a value as a rational (exact when rational).
Rat value_upper(const Real& v) {
  if (v.is_rational()) return v.as_rat();
  Interval enc = v.enclosure(kDefaultPrec);
  return enc.hi.to_rat();
}

}  // namespace

TailProfile tail_profile(const TorusPoint& x, const CharSet& b,
                         std::size_t prefix_len, const Rat& threshold,
                         std::size_t quota) {
  TailProfile p;
  p.x = x;
  p.threshold = threshold;

  bool x_rational = true;
  for (const auto& c : x.x)
    x_rational = x_rational && c.rep().is_rational();

  p.entries.reserve(std::min(prefix_len, b.total()));
  std::size_t index = 0;
  for (std::size_t lvl = 0; lvl < b.level_count() && index < prefix_len;
       ++lvl) {
    for (const auto& phi : b.level(lvl)) {
      if (index >= prefix_len) break;
      TailEntry e;
      e.index = index++;
      e.level = lvl;
      e.phi = phi;
      if (x_rational) {
        // Exact and allocation-light; the general path below reduces mod 1
        // three times per entry, which dominates long rational profiles.
        Rat nv;
        if (phi.dim() == 1) {
          const Rat& xr = x.x[0].rep().as_rat();
          Int t = phi.coeffs[0] * xr.get_num();
          mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(),
                     xr.get_den().get_mpz_t());
          Int other = xr.get_den() - t;
          nv = make_rat(t <= other ? t : other, xr.get_den());
        } else {
          Rat dot(0);
          for (std::size_t i = 0; i < phi.dim(); ++i)
            if (sgn(phi.coeffs[i]) != 0)
              dot += Rat(phi.coeffs[i]) * x.x[i].rep().as_rat();
          nv = rat_norm(dot);
        }
        e.exact_zero = sgn(nv) == 0;
        e.vs_threshold = nv >= threshold ? 1 : -1;
        e.value = Real(std::move(nv));
      } else {
        e.value = norm(eval_char(phi, x));
        e.err = e.value.err_bound();
        e.exact_zero = e.value.is_exact() && e.value.sign() == 0;
        try {
          e.vs_threshold = e.value.cmp(Real(threshold)) >= 0 ? 1 : -1;
        } catch (const precision_exhausted&) {
          e.vs_threshold = 0;
        }
      }
      p.entries.push_back(std::move(e));
    }
  }
  p.prefix_len = p.entries.size();

  p.tail_max.resize(p.entries.size());
  Rat running(0);
  for (std::size_t i = p.entries.size(); i-- > 0;) {
    const Real& val = p.entries[i].value;
    if (val.is_rational()) {
      const Rat& up = val.as_rat();
      if (i + 1 == p.entries.size() || up > running) running = up;
    } else {
      Rat up = value_upper(val);
      if (i + 1 == p.entries.size() || up > running) running = std::move(up);
    }
    p.tail_max[i] = running;
  }

  std::size_t last_zero = SIZE_MAX;
  for (std::size_t i = 0; i < p.entries.size(); ++i)
    if (p.entries[i].exact_zero) last_zero = i;
  for (std::size_t i = 0; i < p.entries.size(); ++i)
    if (p.entries[i].vs_threshold > 0 &&
        (last_zero == SIZE_MAX || i > last_zero))
      p.witnesses.push_back(i);

  if (p.witnesses.size() >= quota) {
    p.verdict = TailProfile::Verdict::WitnessFound;
  } else if (!p.entries.empty() && p.entries.back().exact_zero) {
    p.verdict = TailProfile::Verdict::MemberSoFar;
  } else {
    p.verdict = TailProfile::Verdict::Undetermined;
  }
  return p;
}

namespace {

// Cuts cur down to {x : ||phi x|| <= delta}. The band arcs come out in
// ascending order, so building them and intersecting is linear.
void intersect_char_band(ArcSet& cur, const Character& phi,
                         const Rat& delta) {
  if (phi.dim() != 1)
    throw std::invalid_argument("exact measures are for T^1 only");
  Int p = abs(phi.coeffs[0]);
  if (sgn(p) == 0) return;  // zero character constrains nothing
  Rat step = delta / Rat(p);
  ArcSet band;
  for (Int j = 0; j <= p; ++j) {
    Rat mid = make_rat(j, p);
    Rat lo = mid - step;
    Rat hi = mid + step;
    if (lo < 0) lo = 0;
    if (hi > 1) hi = 1;
    if (lo <= hi) band.add(std::move(lo), std::move(hi));
  }
  cur = cur.intersect(band);
}

}  // namespace

MeasureReport sublevel_measure(const std::vector<Character>& prefix,
                               const Rat& delta) {
  if (!(delta > 0 && delta < Rat(1, 2)))
    throw std::invalid_argument("delta must lie in (0, 1/2)");
  MeasureReport r;
  r.prefix_len = prefix.size();
  r.delta = delta;
  ArcSet cur = ArcSet::unit();
  for (const auto& phi : prefix) {
    intersect_char_band(cur, phi, delta);
    if (cur.empty()) break;
  }
  r.arcs = cur;
  r.measure = cur.measure();
  return r;
}

std::vector<MeasureReport> measure_by_levels(const CharSet& b,
                                             const Rat& delta,
                                             std::size_t levels) {
  if (levels > b.level_count())
    throw std::invalid_argument("not enough levels in the set");
  if (!(delta > 0 && delta < Rat(1, 2)))
    throw std::invalid_argument("delta must lie in (0, 1/2)");
  // One running intersection; earlier prefixes are snapshots of it.
  std::vector<MeasureReport> out;
  ArcSet cur = ArcSet::unit();
  std::size_t prefix_len = 0;
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    for (const auto& phi : b.level(lvl)) {
      ++prefix_len;
      if (!cur.empty()) intersect_char_band(cur, phi, delta);
    }
    MeasureReport r;
    r.prefix_len = prefix_len;
    r.delta = delta;
    r.arcs = cur;
    r.measure = cur.measure();
    out.push_back(std::move(r));
  }
  return out;
}

MonteCarloEstimate mc_sublevel_estimate(const std::vector<Character>& prefix,
                                        std::size_t dim, const Rat& delta,
                                        std::size_t samples,
                                        std::uint64_t seed) {
  MonteCarloEstimate est;
  est.samples = samples;
  est.seed = seed;
  std::mt19937_64 rng(seed);
  const std::uint64_t grid = std::uint64_t(1) << 53;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Rat> x;
    x.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      std::uint64_t k = rng() & (grid - 1);
      x.push_back(make_rat(Int(static_cast<unsigned long>(k)),
                           Int(static_cast<unsigned long>(grid))));
    }
    bool inside = true;
    for (const auto& phi : prefix) {
      Rat dot(0);
      for (std::size_t i = 0; i < dim; ++i)
        dot += Rat(phi.coeffs.at(i)) * x[i];
      if (rat_norm(dot) > delta) {
        inside = false;
        break;
      }
    }
    if (inside) ++est.hits;
  }
  double p = samples ? double(est.hits) / double(samples) : 0.0;
  est.estimate = p;
  est.std_error =
      samples ? std::sqrt(p * (1.0 - p) / double(samples)) : 0.0;
  return est;
}

namespace {

bool point_in_list(const TorusPoint& x, const std::vector<TorusPoint>& pts) {
  for (const auto& p : pts) {
    bool exact = true;
    for (std::size_t i = 0; i < p.dim() && exact; ++i)
      if (!p.x[i].is_exact() || !x.x[i].is_exact()) exact = false;
    if (exact && x.eq(p)) return true;
  }
  return false;
}

// First character of the subgroup's annihilator shells with ||u(x)||
// related to 1/4 as asked (strictly above, or at least).
std::optional<Character> search_annihilator(const ClosedSubgroup& g,
                                            const TorusPoint& x, bool strict,
                                            std::size_t shell_budget) {
  if (g.is_full()) return std::nullopt;
  for (std::size_t lvl = 0; lvl < shell_budget; ++lvl) {
    for (const auto& u : annihilator_shell(g, lvl)) {
      Real v = norm(eval_char(u, x));
      int c = v.cmp(Real(Rat(1, 4)));
      if (strict ? c > 0 : c >= 0) return u;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<SeparationStep> separation_witness(const Tower& h,
                                               const TorusPoint& x,
                                               std::size_t steps,
                                               std::size_t shell_budget) {
  if (x.dim() != h.dim) throw std::invalid_argument("dimension mismatch");
  std::vector<SeparationStep> out;
  for (std::size_t n = 1; n <= steps; ++n) {
    std::vector<TorusPoint> stage = h.stage(n);
    if (point_in_list(x, stage)) {
      std::ostringstream msg;
      msg << "x lies in stage " << n << " of the tower";
      throw std::invalid_argument(msg.str());
    }
    Rat bound = make_rat(1, Int(n));
    std::optional<Character> found;

    if (std::all_of(stage.begin(), stage.end(), [](const TorusPoint& p) {
          for (const auto& c : p.x)
            if (!c.rep().is_rational()) return false;
          return true;
        })) {
      ClosedSubgroup g = closure(stage, h.dim);
      found = search_annihilator(g, x, /*strict=*/true, shell_budget);
    }
    if (!found) {
      // Full-lattice fallback: both conditions checked per candidate.
      ClosedSubgroup trivial =
          subgroup_from_annihilator(IntMatrix::identity(h.dim), h.dim);
      for (std::size_t lvl = 0; lvl < shell_budget && !found; ++lvl) {
        for (const auto& u : annihilator_shell(trivial, lvl)) {
          Real v = norm(eval_char(u, x));
          if (v.cmp(Real(Rat(1, 4))) <= 0) continue;
          bool small = true;
          for (const auto& e : stage) {
            Real w = norm(eval_char(u, e));
            if (w.cmp(Real(bound)) >= 0) {
              small = false;
              break;
            }
          }
          if (small) {
            found = u;
            break;
          }
        }
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "separation search at stage " << n << " spent its shell budget";
      throw budget_exhausted(msg.str());
    }

    SeparationStep step;
    step.n = n;
    step.u = *found;
    step.value_at_x = norm(eval_char(*found, x));
    step.stage_bound = bound;
    Real worst = Real(Rat(0));
    for (const auto& e : stage) {
      Real w = norm(eval_char(*found, e));
      if (w.cmp(worst) > 0) worst = w;
    }
    step.max_on_stage = worst;
    out.push_back(std::move(step));
  }
  return out;
}

std::vector<ChainStep> chain_witness_sequence(
    const std::vector<ClosedSubgroup>& chain, const TorusPoint& x,
    std::size_t shell_budget) {
  std::vector<ChainStep> out;
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const ClosedSubgroup& f = chain[n];
    if (f.dim != x.dim()) throw std::invalid_argument("dimension mismatch");
    if (f.contains(x)) {
      std::ostringstream msg;
      msg << "x lies in stage " << n << " of the chain";
      throw std::invalid_argument(msg.str());
    }
    auto u = search_annihilator(f, x, /*strict=*/false, shell_budget);
    if (!u) {
      std::ostringstream msg;
      msg << "witness search at stage " << n << " spent its shell budget";
      throw budget_exhausted(msg.str());
    }
    ChainStep step;
    step.n = n;
    step.u = *u;
    step.value = norm(eval_char(*u, x));
    out.push_back(std::move(step));
  }
  return out;
}

}  // namespace torus

// Acceptance gate: one line per criterion, exit code = number of failures.
// Tolerances and budgets are pinned here on purpose; nothing is sampled
// where an exact check is feasible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "torus/characterizer.hpp"
#include "torus/classic.hpp"
#include "torus/fsigma.hpp"
#include "torus/verifier.hpp"

using namespace torus;

namespace {

using Clock = std::chrono::steady_clock;

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

TorusPoint pt1(const Rat& r) { return TorusPoint({CircleValue(r)}); }

std::string rstr(const Rat& r) { return r.get_str(); }

struct Check {
  int fails = 0;
  std::string first;

  void req(bool ok, const std::string& what) {
    if (ok) return;
    if (fails == 0) first = what;
    ++fails;
  }
};

int report(int id, const Check& c, const std::string& detail) {
  if (c.fails == 0) {
    std::printf("criterion %d: pass — %s\n", id, detail.c_str());
    return 0;
  }
  std::printf("criterion %d: FAIL — %d check(s), first: %s\n", id, c.fails,
              c.first.c_str());
  return 1;
}

// ---------------------------------------------------------------- 1

int criterion1() {
  Check c;

  // Every p/q with q <= 50 profiles to trailing exact zeros from level q on.
  auto t0 = Clock::now();
  CharSet fac = factorial_charset(50);
  std::size_t points = 0;
  for (long q = 1; q <= 50; ++q) {
    for (long p = (q == 1 ? 0 : 1); p < std::max(1L, q); ++p) {
      if (int_gcd(Int(p), Int(q)) != 1) continue;
      ++points;
      TailProfile prof = tail_profile(pt1(make_rat(p, q)), fac, fac.total());
      c.req(prof.verdict == TailProfile::Verdict::MemberSoFar,
            "verdict for " + std::to_string(p) + "/" + std::to_string(q) +
                " is not member-so-far");
      for (const auto& e : prof.entries) {
        // CharSet level index i holds the stage-(i+1) characters.
        if (static_cast<long>(e.level) + 1 >= q)
          c.req(e.exact_zero, "nonzero entry at stage >= q for " +
                                  std::to_string(p) + "/" + std::to_string(q));
      }
    }
  }
  double ta = secs(t0);
  c.req(ta < 1.0, "rational profiles took " + std::to_string(ta) + " s");

  // Three quadratic irrationals each yield >= 10 witnesses ||k n! x|| >= 1/4
  // with n <= 30, every value re-verified through an interval enclosure.
  auto t1 = Clock::now();
  struct Target {
    const char* name;
    Real x;
  };
  const Target targets[] = {
      {"sqrt2-1", Real::quadratic(Int(-1), Int(1), Int(1), Int(2))},
      {"(sqrt5-1)/2", Real::quadratic(Int(-1), Int(1), Int(2), Int(5))},
      {"sqrt3-1", Real::quadratic(Int(-1), Int(1), Int(1), Int(3))},
  };
  const Rat quarter(1, 4);
  std::string counts;
  for (const auto& t : targets) {
    FactorialDigits dg = factorial_expand(CircleValue(t.x), 30);
    int found = 0;
    for (std::size_t n = 1; n <= 30; ++n) {
      auto w = witness_pair(dg, n);
      if (!w) continue;
      c.req(w->value.cmp(Real(quarter)) >= 0,
            std::string(t.name) + ": witness value below 1/4");
      bool separated = false;
      for (long prec = 64; prec <= 4096; prec *= 2) {
        Interval en = w->value.enclosure(prec);
        if (en.lo.to_rat() >= quarter) {
          separated = true;
          break;
        }
      }
      c.req(separated, std::string(t.name) + ": enclosure never cleared 1/4");
      ++found;
    }
    c.req(found >= 10, std::string(t.name) + ": only " +
                           std::to_string(found) + " witnesses");
    counts += (counts.empty() ? "" : "/") + std::to_string(found);
  }
  double tb = secs(t1);
  c.req(tb < 5.0, "quadratic witnesses took " + std::to_string(tb) + " s");

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu rational profiles end in zeros from stage q (%.2f s); "
                "quadratic witnesses %s of 30 stages (%.2f s)",
                points, ta, counts.c_str(), tb);
  return report(1, c, buf);
}

// ---------------------------------------------------------------- 2

namespace c2 {

// Residue-class oracle: window membership and hull membership over (1/q)Z
// are class functions mod q, so brute force over residues decides both.
std::vector<Rat> oracle_hull(const std::vector<long>& elems, long q, int m) {
  Rat tol = rat_pow2(-(m + 2));
  std::vector<long> window;
  for (long r = 0; r < q; ++r) {
    bool in = true;
    for (long a : elems)
      if (rat_norm(make_rat(r * a, q)) > tol) {
        in = false;
        break;
      }
    if (in) window.push_back(r);
  }
  std::vector<Rat> hull;
  for (long x = 0; x < q; ++x) {
    bool in = true;
    for (long r : window)
      if (rat_norm(make_rat(r * x, q)) > Rat(1, 4)) {
        in = false;
        break;
      }
    if (in) hull.push_back(make_rat(x, q));
  }
  std::sort(hull.begin(), hull.end());
  return hull;
}

std::vector<Rat> lib_hull(const std::vector<long>& elems, long q, int m) {
  std::vector<TorusPoint> E;
  for (long a : elems) E.push_back(pt1(make_rat(a, q)));
  QuasiHull h = quasi_hull(E, 1, m);
  std::vector<Rat> out;
  for (const auto& p : h.hull) out.push_back(p.x[0].rep().as_rat());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace c2

int criterion2() {
  Check c;
  auto t0 = Clock::now();
  std::size_t cases = 0;

  auto compare = [&](const std::vector<long>& elems, long q, int m) {
    ++cases;
    if (c2::lib_hull(elems, q, m) != c2::oracle_hull(elems, q, m)) {
      std::string ids;
      for (long a : elems) ids += std::to_string(a) + ",";
      c.req(false, "hull mismatch q=" + std::to_string(q) +
                       " m=" + std::to_string(m) + " E={" + ids + "}/q");
    }
  };

  // Exhaustive over all nonempty subsets of (1/q)Z for small q.
  for (long q = 2; q <= 10; ++q)
    for (long mask = 1; mask < (1L << q); ++mask) {
      std::vector<long> elems;
      for (long a = 0; a < q; ++a)
        if (mask & (1L << a)) elems.push_back(a);
      for (int m = 0; m <= 3; ++m) compare(elems, q, m);
    }

  // Larger q: singletons, all divisor subgroups, seeded random subsets.
  std::mt19937_64 rng(0x20260819u);
  for (long q = 11; q <= 30; ++q) {
    for (int m = 0; m <= 3; ++m) {
      for (long a = 1; a < q; ++a) compare({a}, q, m);
      for (int s = 0; s < 5; ++s) {
        std::set<long> pick;
        std::size_t size = 2 + rng() % 5;
        while (pick.size() < size) pick.insert(rng() % q);
        compare(std::vector<long>(pick.begin(), pick.end()), q, m);
      }
    }
  }

  // Subgroups are their own hulls at every m.
  for (long q = 2; q <= 30; ++q)
    for (long d = 1; d <= q; ++d) {
      if (q % d != 0) continue;
      std::vector<long> elems;
      std::set<Rat> expect;
      for (long j = 0; j * d < q; ++j) {
        elems.push_back(j * d);
        expect.insert(make_rat(j * d, q));
      }
      for (int m = 0; m <= 3; ++m) {
        ++cases;
        std::vector<Rat> got = c2::lib_hull(elems, q, m);
        c.req(std::set<Rat>(got.begin(), got.end()) == expect,
              "subgroup <" + std::to_string(d) + "/" + std::to_string(q) +
                  "> not fixed at m=" + std::to_string(m));
      }
    }

  // Pinned: the hull of {1/5} at m = 0.
  std::vector<Rat> one5 = c2::lib_hull({1}, 5, 0);
  c.req(one5 == std::vector<Rat>({Rat(0), Rat(1, 5), Rat(4, 5)}),
        "hull of {1/5} at m=0 is not {0, 1/5, 4/5}");

  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu hulls match the residue oracle (%.1f s)",
                cases, secs(t0));
  return report(2, c, buf);
}

// ---------------------------------------------------------------- 3

int criterion3() {
  Check c;
  auto t0 = Clock::now();
  Characterization res = characterize(refinement_tower({Int(2)}, 1), 12);
  c.req(res.mode == Characterization::Mode::Dense, "dyadic run not dense");
  c.req(res.certs.size() == 12, "expected 12 certificates");

  for (std::size_t n = 0; n < res.certs.size(); ++n) {
    auto bad = verify_covering(res.certs[n]);
    c.req(!bad, "certificate " + std::to_string(n) +
                    " failed: " + (bad ? *bad : ""));
    c.req(res.certs[n].tol == rat_pow2(-static_cast<long>(n) - 2),
          "tolerance drift at level " + std::to_string(n));
  }

  // Non-dyadic rationals accrue witnesses across the emitted characters.
  std::vector<Character> B = res.B.flatten();
  int min_wit = 1 << 30;
  std::size_t outsiders = 0;
  for (long q = 3; q <= 99; ++q) {
    long odd = q;
    while (odd % 2 == 0) odd /= 2;
    if (odd == 1) continue;
    for (long p = 1; p < q; ++p) {
      if (int_gcd(Int(p), Int(q)) != 1) continue;
      ++outsiders;
      int wit = 0;
      Rat x = make_rat(p, q);
      for (const auto& phi : B)
        if (rat_norm(Rat(phi.coeffs[0]) * x) > Rat(1, 4)) ++wit;
      min_wit = std::min(min_wit, wit);
      c.req(wit >= 5, std::to_string(p) + "/" + std::to_string(q) +
                          " got only " + std::to_string(wit) + " witnesses");
    }
  }

  // Every dyadic of level <= 10 stays inside the window bound at all later
  // levels; exact, point by point.
  std::size_t members = 0;
  for (long j = 0; j <= 11; ++j) {
    long den = 1L << j;
    for (long a = (j == 0 ? 0 : 1); a < std::max(1L, den); a += 2) {
      std::size_t lvl = (j == 0 ? 0 : static_cast<std::size_t>(j - 1));
      if (lvl > 10) continue;
      ++members;
      Rat x = make_rat(a, den);
      for (std::size_t n = lvl; n < res.certs.size(); ++n)
        for (const auto& phi : res.certs[n].B)
          c.req(rat_norm(Rat(phi.coeffs[0]) * x) <= res.certs[n].tol,
                rstr(x) + " escapes the level-" + std::to_string(n) +
                    " window");
    }
  }

  double t = secs(t0);
  c.req(t < 60.0, "runtime " + std::to_string(t) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "12 certificates re-verify; %zu non-dyadics all have >= 5 "
                "witnesses (min %d); %zu dyadics window-bounded (%.1f s)",
                outsiders, min_wit, members, t);
  return report(3, c, buf);
}

// ---------------------------------------------------------------- 4

int criterion4() {
  Check c;
  auto t0 = Clock::now();
  Characterization res = characterize(refinement_tower({Int(5)}, 1), 6);
  c.req(res.certs.size() == 6, "expected 6 certificates");

  // The decision rule below rests on eps_n * 5^(n+1) = 1/20 at every level:
  // a point is outside the level-n neighborhood iff ||5^(n+1) x|| > 1/20,
  // and the covering then guarantees a witness in B_n.
  Int pw = 1;
  for (std::size_t n = 0; n < res.certs.size(); ++n) {
    pw *= 5;
    c.req(res.certs[n].eps * Rat(pw) == Rat(1, 20),
          "eps schedule drift at level " + std::to_string(n));
    auto bad = verify_covering(res.certs[n]);
    c.req(!bad, "certificate " + std::to_string(n) +
                    " failed: " + (bad ? *bad : ""));
  }

  // Pipeline verdict from the last two levels vs the {5^n} profile verdict.
  CharSet pruefer = prufer_charset(Int(5), 13);
  std::size_t points = 0, members = 0;
  for (long q = 1; q <= 60; ++q) {
    for (long p = (q == 1 ? 0 : 1); p < std::max(1L, q); ++p) {
      if (int_gcd(Int(p), Int(q)) != 1) continue;
      ++points;
      Rat x = make_rat(p, q);

      bool pipeline_member = true;
      for (std::size_t n = 4; n <= 5; ++n)
        for (const auto& phi : res.certs[n].B)
          if (rat_norm(Rat(phi.coeffs[0]) * x) > Rat(1, 4))
            pipeline_member = false;

      TailProfile prof =
          tail_profile(pt1(x), pruefer, pruefer.total());
      bool pruefer_member =
          prof.verdict == TailProfile::Verdict::MemberSoFar;

      long five_part = q;
      while (five_part % 5 == 0) five_part /= 5;
      bool truth = five_part == 1;

      c.req(pipeline_member == pruefer_member,
            "verdicts disagree at " + rstr(x));
      c.req(pipeline_member == truth, "verdict wrong at " + rstr(x));
      if (truth) ++members;
    }
  }

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "verdicts agree on %zu rationals (%zu members) over 6 "
                "levels (%.1f s)",
                points, members, secs(t0));
  return report(4, c, buf);
}

// ---------------------------------------------------------------- 5

int criterion5() {
  Check c;
  auto t0 = Clock::now();
  CharSet fac = factorial_charset(8);
  std::vector<MeasureReport> reports = measure_by_levels(fac, Rat(1, 8), 8);
  c.req(reports.size() == 8, "expected 8 level reports");
  for (std::size_t i = 0; i + 1 < reports.size(); ++i)
    c.req(reports[i].measure > reports[i + 1].measure,
          "measure not strictly decreasing at prefix " + std::to_string(i));
  c.req(reports.back().measure > 0, "full-prefix sublevel set is null");

  // Each prefix level gets its own million-sample estimate; one seed, so
  // the sample streams are identical and the hit counts nest.
  std::vector<Character> prefix;
  std::size_t last_hits = 0;
  double last_exact = 0;
  for (std::size_t lvl = 0; lvl < reports.size(); ++lvl) {
    for (const auto& phi : fac.level(lvl)) prefix.push_back(phi);
    MonteCarloEstimate mc =
        mc_sublevel_estimate(prefix, 1, Rat(1, 8), 1000000, 20260819);
    c.req(mc.hits > 0,
          "no hits at prefix level " + std::to_string(lvl + 1));
    double exact = mpq_get_d(reports[lvl].measure.get_mpq_t());
    double gap = std::fabs(mc.estimate - exact);
    c.req(gap <= 3.0 * mc.std_error,
          "MC off by " + std::to_string(gap) + " > 3 SE at prefix level " +
              std::to_string(lvl + 1));
    last_hits = mc.hits;
    last_exact = exact;
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "8 exact measures strictly decreasing, last %.3g; 8 MC runs "
                "of 1e6 samples all within 3 SE, last %zu hit(s) (%.1f s)",
                last_exact, last_hits, secs(t0));
  return report(5, c, buf);
}

// ---------------------------------------------------------------- 6

namespace c6 {

void check_separation(Check& c, const Tower& h, const TorusPoint& x,
                      std::size_t steps, const std::string& tag) {
  std::vector<SeparationStep> seq = separation_witness(h, x, steps);
  if (seq.size() != steps) {
    c.req(false, tag + ": expected " + std::to_string(steps) + " steps");
    return;
  }
  for (const auto& s : seq) {
    Real at_x = norm(eval_char(s.u, x));
    c.req(at_x.cmp(Real(Rat(1, 4))) > 0, tag + ": step value not > 1/4");
    c.req(at_x.eq(s.value_at_x), tag + ": recorded value drifts");
    c.req(s.stage_bound == make_rat(1, static_cast<long>(s.n)),
          tag + ": stage bound is not 1/n");
    Real worst(Rat(0));
    for (const auto& e : h.stage(s.n)) {
      Real v = norm(eval_char(s.u, e));
      if (v.cmp(worst) > 0) worst = v;
    }
    c.req(worst.cmp(Real(s.stage_bound)) < 0,
          tag + ": stage max reaches the 1/n bound");
    c.req(worst.eq(s.max_on_stage), tag + ": recorded stage max drifts");
  }
}

void check_chain(Check& c, const std::vector<ClosedSubgroup>& chain,
                 const TorusPoint& x, const std::string& tag) {
  std::vector<ChainStep> seq = chain_witness_sequence(chain, x);
  if (seq.size() != chain.size()) {
    c.req(false, tag + ": missing chain steps");
    return;
  }
  for (std::size_t n = 0; n < seq.size(); ++n) {
    Real at_x = norm(eval_char(seq[n].u, x));
    c.req(at_x.cmp(Real(Rat(1, 4))) >= 0, tag + ": step value below 1/4");
    c.req(at_x.eq(seq[n].value), tag + ": recorded value drifts");
    for (const auto& g : chain[n].torsion_generators())
      c.req(norm(eval_char(seq[n].u, g)).sign() == 0,
            tag + ": witness does not annihilate stage " + std::to_string(n));
  }
}

}  // namespace c6

int criterion6() {
  Check c;
  auto t0 = Clock::now();

  // Worked pair: <1/3> against 1/7, then the dyadic chain against 1/3.
  c6::check_separation(c, word_ball_tower({pt1(Rat(1, 3))}, 1),
                       pt1(Rat(1, 7)), 4, "<1/3> vs 1/7");
  {
    std::vector<ClosedSubgroup> dyadic;
    for (long n = 0; n <= 5; ++n)
      dyadic.push_back(closure({pt1(rat_pow2(-n))}, 1));
    c6::check_chain(c, dyadic, pt1(Rat(1, 3)), "<1/2^n> vs 1/3");
  }

  std::mt19937_64 rng(0x6a09e667u);
  auto rnd = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(
                                      hi - lo + 1));
  };

  std::size_t done = 0;
  for (int i = 0; i < 50; ++i) {  // separation instances
    long b = rnd(2, 40);
    long a = rnd(1, b - 1);
    ClosedSubgroup h = closure({pt1(make_rat(a, b))}, 1);
    Rat x;
    do {
      long q = rnd(2, 40);
      x = make_rat(rnd(1, q - 1), q);
    } while (h.contains(pt1(x)));
    c6::check_separation(c, word_ball_tower({pt1(make_rat(a, b))}, 1),
                         pt1(x), 3,
                         "random <" + std::to_string(a) + "/" +
                             std::to_string(b) + "> vs " + rstr(x));
    ++done;
  }
  for (int i = 0; i < 50; ++i) {  // chain instances
    std::vector<long> dens{rnd(1, 5)};
    while (dens.size() < 4) {
      long next = dens.back() * rnd(2, 3);
      if (next > 40) break;
      dens.push_back(next);
    }
    std::vector<ClosedSubgroup> chain;
    for (long d : dens) chain.push_back(closure({pt1(make_rat(1, d))}, 1));
    Rat x;
    do {
      long q = rnd(2, 40);
      x = make_rat(rnd(1, q - 1), q);
    } while (chain.back().contains(pt1(x)));
    c6::check_chain(c, chain, pt1(x), "random chain");
    ++done;
  }

  char buf[96];
  std::snprintf(buf, sizeof buf,
                "2 worked examples + %zu random instances verified (%.1f s)",
                done, secs(t0));
  return report(6, c, buf);
}

// ---------------------------------------------------------------- 7

namespace c7 {

ChainSpec pattern_chain(std::size_t dim, std::size_t stages) {
  ChainSpec spec;
  spec.ambient = ChainSpec::Ambient::TruncatedProduct;
  spec.dim = dim;
  for (std::size_t n = 0; n < stages; ++n) {
    ChainSpec::Stage st;
    st.kind = ChainSpec::StageKind::CoordinatePattern;
    st.pattern_coords = n;
    spec.stages.push_back(st);
  }
  return spec;
}

Character coord_char(std::size_t dim, std::size_t at, long coeff) {
  std::vector<Int> v(dim, Int(0));
  v[at] = coeff;
  return Character(std::move(v));
}

}  // namespace c7

int criterion7() {
  Check c;
  auto t0 = Clock::now();

  // Finite-index rational chains are accepted, with the reported indices
  // equal to the order ratios of the stages.
  std::mt19937_64 rng(0xbb67ae85u);
  auto rnd = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(
                                      hi - lo + 1));
  };
  std::size_t accepted = 0;
  for (int i = 0; i < 30; ++i) {
    std::size_t dim = 1 + rng() % 2;
    std::size_t steps = 3 + rng() % 2;
    ChainSpec spec;
    spec.dim = dim;
    std::vector<TorusPoint> gens;
    std::vector<Int> orders;
    for (std::size_t k = 0; k < steps; ++k) {
      std::vector<CircleValue> coords;
      for (std::size_t j = 0; j < dim; ++j)
        coords.emplace_back(make_rat(rnd(0, 11), rnd(1, 12)));
      gens.push_back(TorusPoint(coords));
      ChainSpec::Stage st;
      st.generators = gens;
      spec.stages.push_back(st);
      orders.push_back(*closure(gens, dim).order);
    }
    ConditionC res = check_condition_c(spec);
    c.req(res.holds, "finite-index chain rejected");
    c.req(res.m == 0, "finite-index chain stabilizes late");
    c.req(!res.first_infinite, "finite-index chain flagged infinite");
    for (std::size_t k = 0; k + 1 < steps; ++k) {
      c.req(res.indices[k].has_value() &&
                *res.indices[k] * orders[k] == orders[k + 1],
            "index " + std::to_string(k) + " is not the order ratio");
    }
    ++accepted;
  }

  // The coordinate-pattern chain T^n x {0} is refused at the first step.
  ConditionC bad = check_condition_c(c7::pattern_chain(6, 6));
  c.req(!bad.holds, "pattern chain accepted");
  c.req(bad.first_infinite && *bad.first_infinite == 0,
        "first infinite index not at step 0");
  c.req(!bad.indices.empty() && !bad.indices[0].has_value(),
        "step-0 index not reported infinite");
  c.req(!bad.reason.empty(), "refusal carries no reason");

  // Refutation certificates for leveled candidate sets over the pattern
  // chain: the fixed staircase, then random coefficients, then two-character
  // levels. All three re-verify exactly.
  ChainSpec chain = c7::pattern_chain(11, 11);
  std::size_t families = 0;
  {
    CharSet b(11);
    for (std::size_t n = 0; n < 10; ++n)
      b.push_level({c7::coord_char(11, n, static_cast<long>(n) + 1)});
    RefutationWitness w = refutation_witness(chain, b, 10);
    c.req(w.stages == 10, "staircase: short witness");
    c.req(w.t.size() >= 2 && w.t[0] == Rat(1, 4) && w.t[1] == Rat(1, 16),
          "staircase: leading denominators moved");
    auto bad_w = verify_refutation(w, chain, b);
    c.req(!bad_w, "staircase: " + (bad_w ? *bad_w : ""));
    ++families;
  }
  {
    CharSet b(11);
    for (std::size_t n = 0; n < 10; ++n)
      b.push_level({c7::coord_char(11, n, rnd(1, 100))});
    RefutationWitness w = refutation_witness(chain, b, 10);
    auto bad_w = verify_refutation(w, chain, b);
    c.req(!bad_w, "random coefficients: " + (bad_w ? *bad_w : ""));
    ++families;
  }
  {
    CharSet b(11);
    for (std::size_t n = 0; n < 10; ++n) {
      Character two = c7::coord_char(11, n, rnd(1, 20));
      two.coeffs[n + 1] = rnd(1, 20);
      b.push_level({c7::coord_char(11, n, rnd(1, 20)), two});
    }
    RefutationWitness w = refutation_witness(chain, b, 10);
    auto bad_w = verify_refutation(w, chain, b);
    c.req(!bad_w, "two-character levels: " + (bad_w ? *bad_w : ""));
    ++families;
  }

  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%zu finite-index chains accepted, pattern chain refused at "
                "step 0, %zu refutation families re-verify (%.1f s)",
                accepted, families, secs(t0));
  return report(7, c, buf);
}

// ---------------------------------------------------------------- 8

int criterion8() {
  Check c;
  auto t0 = Clock::now();
  std::mt19937_64 rng(0x3c6ef372u);
  auto rnd = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(
                                      hi - lo + 1));
  };
  auto rrat = [&](long den_cap) {
    long d = rnd(1, den_cap);
    return make_rat(rnd(-den_cap, den_cap), d);
  };

  // Norm and metric axioms, checked against the one-line rational model.
  for (int i = 0; i < 1000; ++i) {
    Rat x = rrat(1000000), y = rrat(1000000);
    Rat nx = rat_norm(x), ny = rat_norm(y);
    c.req(nx >= 0 && nx <= Rat(1, 2), "norm out of range");
    c.req(nx == rat_norm(-x), "norm not even");
    c.req(rat_norm(x + y) <= nx + ny, "norm not subadditive");
    c.req((nx == 0) == (rat_mod1(x) == 0), "norm kernel is not Z");
    c.req(norm(CircleValue(x)).as_rat() == nx, "library norm drifts");

    std::size_t dim = 1 + rng() % 3;
    std::vector<CircleValue> av, bv, cv, tv;
    for (std::size_t j = 0; j < dim; ++j) {
      av.emplace_back(rrat(500));
      bv.emplace_back(rrat(500));
      cv.emplace_back(rrat(500));
      tv.emplace_back(rrat(500));
    }
    TorusPoint a{av}, b{bv}, d{cv};
    Metric sup = Metric::sup();
    Rat dab = metric_d(a, b, sup).as_rat();
    Rat model(0);
    for (std::size_t j = 0; j < dim; ++j)
      model = std::max(
          model, rat_norm(av[j].rep().as_rat() - bv[j].rep().as_rat()));
    c.req(dab == model, "sup metric drifts from the model");
    c.req(dab == metric_d(b, a, sup).as_rat(), "metric not symmetric");
    c.req(metric_d(a, a, sup).as_rat() == 0, "d(a,a) != 0");
    c.req(dab <= metric_d(a, d, sup).as_rat() +
                    metric_d(d, b, sup).as_rat(),
          "triangle inequality fails");
    std::vector<CircleValue> at, bt;
    for (std::size_t j = 0; j < dim; ++j) {
      at.push_back(av[j].add(tv[j]));
      bt.push_back(bv[j].add(tv[j]));
    }
    c.req(metric_d(TorusPoint{at}, TorusPoint{bt}, sup).as_rat() == dab,
          "metric not translation invariant");
  }

  // Smith form contracts on random small matrices.
  for (int i = 0; i < 1000; ++i) {
    std::size_t r = 1 + rng() % 5, cl = 1 + rng() % 5;
    IntMatrix m(r, cl);
    for (auto& v : m.a) v = rnd(-20, 20);
    SmithResult s = snf(m);
    c.req(s.U.mul(m).mul(s.V) == s.D, "U M V != D");
    c.req(abs(s.U.det()) == 1 && abs(s.V.det()) == 1,
          "transform not unimodular");
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < s.diag.size(); ++j) {
      c.req(sgn(s.diag[j]) >= 0, "negative invariant factor");
      if (sgn(s.diag[j]) != 0) ++nonzero;
      if (j + 1 < s.diag.size() && sgn(s.diag[j + 1]) != 0)
        c.req(sgn(s.diag[j]) != 0 && s.diag[j + 1] % s.diag[j] == 0,
              "diagonal not a divisibility chain");
    }
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t bcol = 0; bcol < cl; ++bcol)
        if (a != bcol)
          c.req(sgn(s.D.at(a, bcol)) == 0, "D not diagonal");
    c.req(s.rank == nonzero, "rank disagrees with the diagonal");

    IntMatrix h = hnf_rows(m);
    for (std::size_t a = 0; a < r; ++a) {
      std::vector<Int> row(cl);
      for (std::size_t bcol = 0; bcol < cl; ++bcol) row[bcol] = m.at(a, bcol);
      c.req(hnf_row_member(h, row), "matrix row escapes its HNF lattice");
    }
    IntMatrix k = kernel_basis(m);
    IntMatrix prod = m.mul(k);
    for (const auto& v : prod.a)
      c.req(sgn(v) == 0, "kernel basis not annihilated");
    c.req(k.cols == cl - s.rank, "kernel dimension off");
  }

  // Subadditivity transfer: profiles of x, y, x + y against a common
  // prefix satisfy the pointwise triangle bound, exactly.
  CharSet fac = factorial_charset(10);
  for (int i = 0; i < 1000; ++i) {
    Rat x = rrat(200), y = rrat(200);
    TailProfile px = tail_profile(pt1(x), fac, fac.total());
    TailProfile py = tail_profile(pt1(y), fac, fac.total());
    TailProfile ps = tail_profile(pt1(x + y), fac, fac.total());
    for (std::size_t k = 0; k < ps.entries.size(); ++k)
      c.req(ps.entries[k].value.as_rat() <= px.entries[k].value.as_rat() +
                                                py.entries[k].value.as_rat(),
            "profile subadditivity fails at entry " + std::to_string(k));
  }

  // Refinement-tower window escape: every nonzero character exits the
  // level-n window as soon as b^(n+1) stops dividing it, witnessed by an
  // explicit stage point with ||phi(e)|| >= 1/3 > 2^-(n+2).
  for (int i = 0; i < 1000; ++i) {
    long base = rnd(2, 9);
    Int phi = rnd(1, 1000000) * (rnd(0, 1) ? 1 : -1);
    if (rnd(0, 1)) {
      long e = rnd(1, 6);
      for (long j = 0; j < e; ++j) phi *= base;
    }
    Int P = base;
    std::size_t n = 0;
    while (phi % P == 0) {
      P *= base;
      ++n;
    }
    Int pm;
    mpz_fdiv_r(pm.get_mpz_t(), phi.get_mpz_t(), P.get_mpz_t());
    Int g = int_gcd(pm, P);
    Int M = P / g;
    Int inv;
    mpz_invert(inv.get_mpz_t(), Int(pm / g).get_mpz_t(), M.get_mpz_t());
    Int j = (Int(M / 2) * inv) % M;
    c.req(sgn(j) > 0 && j < P, "witness point escapes the stage");
    Rat v = norm(eval_char(Character::one_dim(phi), pt1(make_rat(j, P))))
                .as_rat();
    c.req(v >= Rat(1, 3), "escape value below 1/3");
    c.req(v > rat_pow2(-static_cast<long>(n) - 2),
          "character fails to exit the level-" + std::to_string(n) +
              " window");
  }

  char buf[96];
  std::snprintf(buf, sizeof buf, "4 property suites x 1000 cases (%.1f s)",
                secs(t0));
  return report(8, c, buf);
}

}  // namespace

int main() {
  int failures = 0;
  failures += criterion1();
  failures += criterion2();
  failures += criterion3();
  failures += criterion4();
  failures += criterion5();
  failures += criterion6();
  failures += criterion7();
  failures += criterion8();
  return failures;
}

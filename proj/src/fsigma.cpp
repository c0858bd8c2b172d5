#include "torus/fsigma.hpp"

#include <sstream>
#include <stdexcept>

namespace torus {

namespace {

struct StageInfo {
  bool is_pattern = false;
  bool infinite = false;  // pattern with full-circle factors
  std::size_t k = 0;      // pattern coordinates
  std::optional<ClosedSubgroup> group;  // finite stages only
  std::vector<TorusPoint> gens;         // generating set of finite stages
  Int order = 1;
};

Rat rat_coord(const CircleValue& c) {
  if (!c.rep().is_rational())
    throw std::invalid_argument("chain stages must be rational");
  return c.rep().as_rat();
}

StageInfo stage_info(const ChainSpec& chain, std::size_t n) {
  const auto& st = chain.stages.at(n);
  StageInfo info;
  if (st.kind == ChainSpec::StageKind::CoordinatePattern) {
    info.is_pattern = true;
    info.k = st.pattern_coords;
    if (info.k > chain.dim)
      throw std::invalid_argument("pattern wider than the ambient group");
    if (chain.ambient == ChainSpec::Ambient::CyclicProduct) {
      // Finite: the first k cyclic factors in full.
      for (std::size_t i = 0; i < info.k; ++i) {
        std::vector<CircleValue> c(chain.dim);
        c[i] = CircleValue(make_rat(1, chain.cyclic_orders[i]));
        info.gens.push_back(TorusPoint(std::move(c)));
      }
    } else {
      info.infinite = info.k > 0;
      if (!info.infinite) info.gens.clear();  // the trivial subgroup
    }
  } else {
    info.gens = st.generators;
    for (const auto& g : info.gens) {
      if (g.dim() != chain.dim)
        throw std::invalid_argument("stage generator dimension mismatch");
      for (std::size_t i = 0; i < g.dim(); ++i) {
        Rat v = rat_coord(g.x[i]);
        if (chain.ambient == ChainSpec::Ambient::CyclicProduct) {
          Int rem;
          mpz_fdiv_r(rem.get_mpz_t(), chain.cyclic_orders[i].get_mpz_t(),
                     v.get_den().get_mpz_t());
          if (sgn(rem) != 0)
            throw std::invalid_argument(
                "generator leaves the cyclic product");
        }
      }
    }
  }
  if (!info.infinite) {
    info.group = closure(info.gens, chain.dim);
    if (!info.group->is_finite())
      throw std::logic_error("rational stage closed up infinite");
    info.order = *info.group->order;
  }
  return info;
}

bool stage_includes(const StageInfo& small, const StageInfo& big) {
  if (!small.infinite && !big.infinite) {
    for (const auto& g : small.gens)
      if (!big.group->contains(g)) return false;
    return true;
  }
  if (!small.infinite && big.infinite) {
    for (const auto& g : small.gens)
      for (std::size_t i = big.k; i < g.dim(); ++i)
        if (!g.x[i].is_zero()) return false;
    return true;
  }
  if (small.infinite && big.infinite) return small.k <= big.k;
  return false;  // infinite inside finite
}

bool stages_equal(const StageInfo& a, const StageInfo& b) {
  if (a.infinite != b.infinite) return false;
  if (a.infinite) return a.k == b.k;
  return a.order == b.order && stage_includes(a, b);
}

std::optional<Int> step_index(const StageInfo& cur, const StageInfo& next) {
  if (!cur.infinite && !next.infinite) {
    if (next.order % cur.order != 0)
      throw std::logic_error("subgroup order does not divide");
    return next.order / cur.order;
  }
  if (!cur.infinite && next.infinite) return std::nullopt;
  if (cur.infinite && next.infinite)
    return next.k > cur.k ? std::optional<Int>() : std::optional<Int>(1);
  throw std::logic_error("chain decreases");
}

std::size_t pattern_of(const ChainSpec& chain, std::size_t n) {
  const auto& st = chain.stages.at(n);
  if (st.kind != ChainSpec::StageKind::CoordinatePattern)
    throw std::invalid_argument(
        "refutation is implemented for coordinate-pattern chains");
  return st.pattern_coords;
}

}  // namespace

void validate_chain(const ChainSpec& chain) {
  if (chain.stages.empty()) throw std::invalid_argument("empty chain");
  if (chain.dim == 0) throw std::invalid_argument("ambient dimension zero");
  if (chain.ambient == ChainSpec::Ambient::CyclicProduct) {
    if (chain.cyclic_orders.size() != chain.dim)
      throw std::invalid_argument("one cyclic order per coordinate");
    for (const auto& m : chain.cyclic_orders)
      if (m < 1) throw std::invalid_argument("cyclic orders must be positive");
  }
  std::vector<StageInfo> infos;
  for (std::size_t n = 0; n < chain.stages.size(); ++n)
    infos.push_back(stage_info(chain, n));
  for (std::size_t n = 0; n + 1 < infos.size(); ++n) {
    if (!stage_includes(infos[n], infos[n + 1])) {
      std::ostringstream msg;
      msg << "stage " << n << " is not contained in stage " << n + 1;
      throw std::invalid_argument(msg.str());
    }
    if (chain.strict && stages_equal(infos[n], infos[n + 1])) {
      std::ostringstream msg;
      msg << "stages " << n << " and " << n + 1
          << " are equal, violating the strictness claim";
      throw std::invalid_argument(msg.str());
    }
  }
}

bool annihilates_stage(const Character& phi, const ChainSpec& chain,
                       std::size_t n) {
  if (phi.dim() != chain.dim)
    throw std::invalid_argument("character dimension mismatch");
  const auto& st = chain.stages.at(n);
  if (st.kind == ChainSpec::StageKind::CoordinatePattern &&
      chain.ambient != ChainSpec::Ambient::CyclicProduct) {
    for (std::size_t i = 0; i < st.pattern_coords; ++i)
      if (sgn(phi.coeffs[i]) != 0) return false;
    return true;
  }
  StageInfo info = stage_info(chain, n);
  for (const auto& g : info.gens)
    if (!eval_char(phi, g).is_zero()) return false;
  return true;
}

ConditionC check_condition_c(const ChainSpec& chain) {
  validate_chain(chain);
  ConditionC out;
  std::vector<StageInfo> infos;
  for (std::size_t n = 0; n < chain.stages.size(); ++n)
    infos.push_back(stage_info(chain, n));

  std::optional<std::size_t> last_infinite;
  for (std::size_t n = 0; n + 1 < infos.size(); ++n) {
    auto idx = step_index(infos[n], infos[n + 1]);
    out.indices.push_back(idx);
    if (!idx) {
      if (!out.first_infinite) out.first_infinite = n;
      last_infinite = n;
    }
  }
  if (last_infinite && *last_infinite + 2 == infos.size()) {
    out.holds = false;
    std::ostringstream msg;
    msg << "index |F_" << *out.first_infinite + 1 << " : F_"
        << *out.first_infinite
        << "| is infinite and the indices never stabilize on this prefix";
    out.reason = msg.str();
    return out;
  }
  out.holds = true;
  out.m = last_infinite ? *last_infinite + 1 : 0;
  out.reason = "all indices finite from the reported stage on; the ambient "
               "group has countable weight, so quotients are metrizable";
  return out;
}

BPartition partition_B(const CharSet& b, const ChainSpec& chain) {
  validate_chain(chain);
  if (b.dim() != chain.dim)
    throw std::invalid_argument("character set dimension mismatch");
  std::size_t s = chain.stages.size();
  BPartition out;
  out.buckets.resize(s);
  out.non_annihilating.assign(s, 0);
  for (const auto& phi : b.flatten()) {
    std::size_t level = 0;
    bool kills_first = annihilates_stage(phi, chain, 0);
    if (!kills_first) out.non_annihilating[0]++;
    for (std::size_t n = 1; n < s; ++n)
      if (!annihilates_stage(phi, chain, n)) out.non_annihilating[n]++;
    if (!kills_first) {
      out.violations.push_back(phi);
      continue;
    }
    while (level + 1 < s && annihilates_stage(phi, chain, level + 1)) ++level;
    out.buckets[level].push_back(phi);
  }
  return out;
}

RefutationWitness refutation_witness(const ChainSpec& chain, const CharSet& b,
                                     std::size_t stages,
                                     std::size_t denominator_budget) {
  validate_chain(chain);
  ConditionC cond = check_condition_c(chain);
  if (cond.holds)
    throw std::invalid_argument(
        "the chain satisfies the finite-index condition (see "
        "check_condition_c); nothing to refute");
  if (stages + 1 > chain.stages.size())
    throw std::invalid_argument("not enough chain stages for that many steps");
  if (b.dim() != chain.dim)
    throw std::invalid_argument("character set dimension mismatch");

  std::vector<std::size_t> a(stages + 1);
  for (std::size_t n = 0; n <= stages; ++n) a[n] = pattern_of(chain, n);
  for (std::size_t n = 0; n < stages; ++n)
    if (a[n] >= a[n + 1])
      throw std::invalid_argument(
          "refutation needs strictly growing coordinate patterns");
  if (a[stages - 1] >= chain.dim)
    throw std::invalid_argument("pattern exceeds the truncation length");

  for (std::size_t n = 0; n < stages && n < b.level_count(); ++n)
    for (const auto& phi : b.level(n))
      if (!annihilates_stage(phi, chain, n))
        throw std::invalid_argument("B is not partitioned along the chain");

  RefutationWitness w;
  w.stages = stages;
  Int prev_d = 0;
  for (std::size_t n = 0; n < stages; ++n) {
    Rat bound = rat_pow2(-(static_cast<long>(n) + 2));
    Int d_min = 2;
    if (n > 0) {
      // 2^-a_n / D_n <= 2^-a_{n-1} / (3 D_{n-1})
      Int num = 3 * prev_d;
      Int den = Int(1) << static_cast<unsigned long>(a[n] - a[n - 1]);
      Int q;
      mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      if (q > d_min) d_min = q;
    }
    Int chosen = 0;
    for (Int d = d_min; d <= Int(static_cast<unsigned long>(denominator_budget));
         ++d) {
      bool ok = true;
      for (std::size_t k = 0; k <= n && ok && k < b.level_count(); ++k)
        for (const auto& phi : b.level(k)) {
          if (rat_norm(make_rat(phi.coeffs[a[n]], d)) > bound) {
            ok = false;
            break;
          }
        }
      if (ok) {
        chosen = d;
        break;
      }
    }
    if (sgn(chosen) == 0)
      throw budget_exhausted("no admissible denominator within the budget");
    w.coords.push_back(a[n]);
    w.t.push_back(make_rat(1, chosen));
    prev_d = chosen;
  }

  std::vector<CircleValue> coords(chain.dim);
  for (std::size_t n = 0; n < stages; ++n)
    coords[w.coords[n]] = CircleValue(w.t[n]);
  w.x = TorusPoint(std::move(coords));

  for (std::size_t n = 0; n < stages; ++n)
    w.y_dist.push_back(rat_pow2(-static_cast<long>(w.coords[n])) * w.t[n]);
  for (std::size_t n = 0; n < stages; ++n) {
    Rat tail(0);
    for (std::size_t k = n; k < stages; ++k) tail += w.y_dist[k];
    w.tail_dist.push_back(tail);
  }
  return w;
}

std::optional<std::string> verify_refutation(const RefutationWitness& w,
                                             const ChainSpec& chain,
                                             const CharSet& b) {
  auto fail = [](const std::string& s) { return std::optional<std::string>(s); };
  validate_chain(chain);
  if (w.stages == 0) return fail("empty witness");
  if (w.coords.size() != w.stages || w.t.size() != w.stages ||
      w.y_dist.size() != w.stages || w.tail_dist.size() != w.stages)
    return fail("ragged witness fields");
  if (w.x.dim() != chain.dim) return fail("witness dimension mismatch");
  if (w.stages + 1 > chain.stages.size()) return fail("chain too short");

  for (std::size_t n = 0; n < w.stages; ++n) {
    std::size_t below = pattern_of(chain, n);
    std::size_t above = pattern_of(chain, n + 1);
    if (w.coords[n] < below || w.coords[n] >= above)
      return fail("y_n is not in the new block of its stage");
    if (w.coords[n] >= chain.dim) return fail("coordinate out of range");
    if (!(w.t[n] > 0 && w.t[n] <= Rat(1, 2)))
      return fail("t_n outside (0, 1/2]");
    if (n > 0 && w.coords[n] <= w.coords[n - 1])
      return fail("coordinates must increase");
  }

  // x is exactly the sum of the y_n.
  for (std::size_t i = 0; i < chain.dim; ++i) {
    Rat expect(0);
    for (std::size_t n = 0; n < w.stages; ++n)
      if (w.coords[n] == i) expect = w.t[n];
    if (!w.x.x[i].rep().is_rational()) return fail("x must be rational");
    if (rat_mod1(w.x.x[i].rep().as_rat()) != expect)
      return fail("x does not match the emitted y_n");
  }

  for (std::size_t n = 0; n < w.stages; ++n) {
    Rat expected = rat_pow2(-static_cast<long>(w.coords[n])) * w.t[n];
    if (w.y_dist[n] != expected) return fail("wrong d(y_n, F_n)");
    if (n > 0) {
      // d(y_n, 0) <= d(y_{n-1}, F_{n-1}) / 3
      if (!(w.y_dist[n] * 3 <= w.y_dist[n - 1]))
        return fail("contraction d(y_{n+1},0) <= d(y_n,F_n)/3 fails");
    }
    Rat tail(0);
    for (std::size_t k = n; k < w.stages; ++k) tail += w.y_dist[k];
    if (w.tail_dist[n] != tail) return fail("wrong d(x_n, F_n)");
    if (!(2 * w.tail_dist[n] >= w.y_dist[n]) || !(w.tail_dist[n] > 0))
      return fail("d(x_n, F_n) >= d(y_n, F_n)/2 > 0 fails");
  }

  for (std::size_t n = 0; n < w.stages && n < b.level_count(); ++n) {
    Rat level_bound = rat_pow2(-static_cast<long>(n));
    for (std::size_t k = 0; k <= n; ++k)
      for (const auto& phi : b.level(k)) {
        if (phi.dim() != chain.dim) return fail("character dimension mismatch");
        if (rat_norm(Rat(phi.coeffs[w.coords[n]]) * w.t[n]) > level_bound)
          return fail("||phi(y_n)|| <= 2^-n fails");
      }
    Rat x_bound = rat_pow2(1 - static_cast<long>(n));
    for (const auto& phi : b.level(n)) {
      Rat dot(0);
      for (std::size_t k = 0; k < w.stages; ++k)
        dot += Rat(phi.coeffs[w.coords[k]]) * w.t[k];
      if (rat_norm(dot) > x_bound)
        return fail("||phi(x)|| <= 2^(1-n) fails");
    }
  }
  return std::nullopt;
}

}  // namespace torus

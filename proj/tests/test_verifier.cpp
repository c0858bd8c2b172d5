#include <set>
#include <stdexcept>

#include "doctest.h"
#include "torus/classic.hpp"
#include "torus/verifier.hpp"

using namespace torus;

namespace {
TorusPoint pt1(const Rat& x) { return TorusPoint({CircleValue(x)}); }
}

TEST_CASE("tail profile finds witnesses for a point outside the group") {
  // ||2^n / 3|| = 1/3 at every level, so every entry clears 1/4.
  CharSet p2 = prufer_charset(Int(2), 6);
  TailProfile prof = tail_profile(pt1(Rat(1, 3)), p2, p2.total());
  CHECK(prof.prefix_len == 6);
  CHECK(prof.verdict == TailProfile::Verdict::WitnessFound);
  CHECK(prof.witnesses.size() == 6);
  for (const auto& e : prof.entries) {
    CHECK(e.value.as_rat() == Rat(1, 3));
    CHECK(e.err == 0);
    CHECK(e.vs_threshold == 1);
  }
  for (const auto& m : prof.tail_max) CHECK(m == Rat(1, 3));
}

TEST_CASE("tail profile ends in exact zeros for a member") {
  // 1/8 is a dyadic rational: from 2^3 on, every character kills it.
  CharSet p2 = prufer_charset(Int(2), 6);
  TailProfile prof = tail_profile(pt1(Rat(1, 8)), p2, p2.total());
  CHECK(prof.verdict == TailProfile::Verdict::MemberSoFar);
  CHECK(prof.witnesses.empty());  // hits at 2 and 4 precede the zeros
  CHECK(prof.entries[0].value.as_rat() == Rat(1, 8));
  CHECK(prof.entries[0].vs_threshold == -1);
  CHECK(prof.entries[1].value.as_rat() == Rat(1, 4));
  CHECK(prof.entries[1].vs_threshold == 1);  // threshold is inclusive
  for (std::size_t i = 3; i < prof.entries.size(); ++i) {
    CHECK(prof.entries[i].exact_zero);
    CHECK(prof.tail_max[i] == 0);
  }
  CHECK(prof.tail_max[0] == Rat(1, 2));

  // Too short a prefix decides nothing: one hit, no trailing zero.
  TailProfile shrt = tail_profile(pt1(Rat(1, 8)), p2, 2);
  CHECK(shrt.verdict == TailProfile::Verdict::Undetermined);
  CHECK(shrt.witnesses.size() == 1);
}

TEST_CASE("tail profile against the factorial set") {
  // p/q is killed by the whole level n once q divides n!.
  CharSet f = factorial_charset(6);
  TailProfile prof = tail_profile(pt1(Rat(2, 5)), f, f.total());
  CHECK(prof.verdict == TailProfile::Verdict::MemberSoFar);
  for (const auto& e : prof.entries) {
    if (e.level >= 4) CHECK(e.exact_zero);  // level index 4 is n = 5
  }

  // An irrational point keeps producing certified hits instead.
  Real r2 = Real::sqrt_of(2);
  TorusPoint x({CircleValue(r2)});
  TailProfile irr = tail_profile(x, f, f.total());
  CHECK(irr.verdict == TailProfile::Verdict::WitnessFound);
  CHECK(irr.witnesses.size() >= 3);
  for (const auto& e : irr.entries) CHECK(!e.exact_zero);
}

TEST_CASE("exact sublevel measures") {
  auto one = sublevel_measure({Character::one_dim(Int(1))}, Rat(1, 4));
  CHECK(one.measure == Rat(1, 2));
  CHECK(one.arcs.contains(Rat(1, 8)));
  CHECK(!one.arcs.contains(Rat(1, 2)));

  auto two = sublevel_measure(
      {Character::one_dim(Int(1)), Character::one_dim(Int(2))}, Rat(1, 8));
  CHECK(two.measure == Rat(1, 8));
  CHECK(two.arcs.contains(Rat(1, 16)));
  CHECK(!two.arcs.contains(Rat(1, 10)));

  auto empty = sublevel_measure({}, Rat(1, 8));
  CHECK(empty.measure == 1);

  // The zero character never constrains.
  auto zero = sublevel_measure({Character::one_dim(Int(0))}, Rat(1, 8));
  CHECK(zero.measure == 1);

  CHECK_THROWS_AS(sublevel_measure({Character::one_dim(Int(1))}, Rat(1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sublevel_measure({Character::one_dim(Int(1))}, Rat(0)),
                  std::invalid_argument);
}

TEST_CASE("measures shrink level by level") {
  CharSet f = factorial_charset(6);
  auto reports = measure_by_levels(f, Rat(1, 8), 6);
  REQUIRE(reports.size() == 6);
  CHECK(reports[0].measure == Rat(1, 4));  // just phi = 1
  for (std::size_t i = 1; i < reports.size(); ++i)
    CHECK(reports[i].measure < reports[i - 1].measure);
  for (const auto& r : reports) CHECK(r.measure > 0);
  CHECK_THROWS_AS(measure_by_levels(f, Rat(1, 8), 7), std::invalid_argument);
}

TEST_CASE("monte carlo estimates agree with the exact measure") {
  std::vector<Character> prefix = {Character::one_dim(Int(1))};
  auto est = mc_sublevel_estimate(prefix, 1, Rat(1, 4), 4096, 12345);
  CHECK(est.samples == 4096);
  CHECK(est.seed == 12345);
  // True measure is 1/2; allow five standard errors.
  CHECK(est.estimate > 0.5 - 5 * est.std_error);
  CHECK(est.estimate < 0.5 + 5 * est.std_error);

  // Same seed, same stream, same count.
  auto again = mc_sublevel_estimate(prefix, 1, Rat(1, 4), 4096, 12345);
  CHECK(again.hits == est.hits);
  auto other = mc_sublevel_estimate(prefix, 1, Rat(1, 4), 4096, 54321);
  CHECK(other.hits != est.hits);  // astronomically unlikely to collide

  // Everything is within 1/2 of an integer: every sample hits.
  auto all = mc_sublevel_estimate(prefix, 1, make_rat(Int(2251799813685247),
                                                      Int(4503599627370496)),
                                  256, 7);
  CHECK(all.hits == 256);

  // Two dimensions: ||x_1|| <= 1/4 alone still cuts measure 1/2.
  std::vector<Character> proj = {Character({Int(1), Int(0)})};
  auto d2 = mc_sublevel_estimate(proj, 2, Rat(1, 4), 4096, 99);
  CHECK(d2.estimate > 0.5 - 5 * d2.std_error);
  CHECK(d2.estimate < 0.5 + 5 * d2.std_error);
}

TEST_CASE("separation witnesses against a constant tower") {
  // Stage n is always <1/3>; the annihilator multiples separate 1/7.
  std::vector<TorusPoint> third = {pt1(Rat(0)), pt1(Rat(1, 3)),
                                   pt1(Rat(2, 3))};
  Tower t = explicit_tower({third, third, third, third}, 1, false);
  auto steps = separation_witness(t, pt1(Rat(1, 7)), 3);
  REQUIRE(steps.size() == 3);
  for (const auto& s : steps) {
    CHECK(s.u.coeffs[0] % 3 == 0);
    CHECK(s.max_on_stage.sign() == 0);  // annihilator: exactly zero
    CHECK(s.value_at_x.as_rat() > Rat(1, 4));
    CHECK(s.stage_bound == make_rat(1, Int(s.n)));
  }
  CHECK(steps[0].u == Character::one_dim(Int(3)));  // ||3/7|| = 3/7

  std::vector<TorusPoint> half = {pt1(Rat(0)), pt1(Rat(1, 2))};
  Tower h = explicit_tower({half, half, half}, 1, false);
  auto hs = separation_witness(h, pt1(Rat(1, 3)), 2);
  CHECK(hs[0].u == Character::one_dim(Int(2)));  // ||2/3|| = 1/3 > 1/4

  // A point inside a stage cannot be separated from it.
  CHECK_THROWS_AS(separation_witness(t, pt1(Rat(1, 3)), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(separation_witness(t, pt1(Rat(2, 3)), 2),
                  std::invalid_argument);
}

TEST_CASE("separation climbs a growing tower") {
  // Dyadic stages: stage n has denominator 2^n; annihilators shrink but
  // every step still clears 1/4 at x = 1/3.
  Tower dyadic = refinement_tower({Int(2)}, 1);
  auto steps = separation_witness(dyadic, pt1(Rat(1, 3)), 4);
  REQUIRE(steps.size() == 4);
  for (const auto& s : steps) {
    CHECK(s.max_on_stage.sign() == 0);
    CHECK(s.value_at_x.as_rat() == Rat(1, 3));
    // Stage n is killed only by multiples of 2^n.
    Int q = Int(1) << s.n;
    CHECK(s.u.coeffs[0] % q == 0);
  }
}

TEST_CASE("chain witness sequences") {
  std::vector<ClosedSubgroup> dyadic;
  for (int n = 1; n <= 4; ++n)
    dyadic.push_back(closure({pt1(make_rat(1, Int(1) << n))}, 1));
  auto steps = chain_witness_sequence(dyadic, pt1(Rat(1, 3)));
  REQUIRE(steps.size() == 4);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(steps[i].n == i);
    CHECK(steps[i].u == Character::one_dim(Int(1) << (i + 1)));
    CHECK(steps[i].value.as_rat() == Rat(1, 3));
  }

  std::vector<ClosedSubgroup> triadic;
  Int q = 3;
  for (int n = 0; n < 3; ++n, q *= 3)
    triadic.push_back(closure({pt1(make_rat(1, q))}, 1));
  auto ts = chain_witness_sequence(triadic, pt1(Rat(1, 2)));
  Int expect = 3;
  for (std::size_t i = 0; i < ts.size(); ++i, expect *= 3) {
    CHECK(ts[i].u == Character::one_dim(expect));
    CHECK(ts[i].value.as_rat() == Rat(1, 2));
  }

  // Membership in any stage is rejected with its index.
  std::vector<ClosedSubgroup> with_member = {closure({pt1(Rat(1, 2))}, 1),
                                             closure({pt1(Rat(1, 6))}, 1)};
  CHECK_THROWS_WITH_AS(chain_witness_sequence(with_member, pt1(Rat(1, 6))),
                       "x lies in stage 1 of the chain",
                       std::invalid_argument);
}

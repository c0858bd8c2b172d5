#include "doctest.h"
#include "torus/characterizer.hpp"
#include "torus/quasiconvex.hpp"

using namespace torus;

namespace {
TorusPoint pt1(const Rat& x) { return TorusPoint({CircleValue(x)}); }
TorusPoint pt2(const Rat& x, const Rat& y) {
  return TorusPoint({CircleValue(x), CircleValue(y)});
}
}

TEST_CASE("towers produce normalized stages") {
  Tower dyadic = refinement_tower({Int(2)}, 1);
  auto s0 = dyadic.stage(0);
  REQUIRE(s0.size() == 2);  // {0, 1/2}
  CHECK(s0[0].is_zero());
  auto s1 = dyadic.stage(1);
  CHECK(s1.size() == 4);
  CHECK(dyadic.union_closure().is_full());

  Tower words = word_ball_tower({pt1(Rat(1, 5))}, 1);
  auto w1 = words.stage(1);
  CHECK(w1.size() == 3);  // 0, 1/5, 4/5
  auto w2 = words.stage(2);
  CHECK(w2.size() == 5);
  ClosedSubgroup cl = words.union_closure();
  CHECK(cl.is_finite());
  CHECK(cl.order.value() == 5);

  Tower expl = explicit_tower({{pt1(Rat(1, 3))}}, 1, true);
  auto e0 = expl.stage(0);
  CHECK(e0.size() == 3);  // 0 and +-1/3 after normalization
  CHECK(expl.max_stage() == 0);
  CHECK(expl.union_closure().is_full());

  CHECK_THROWS_AS(explicit_tower({{pt1(Rat(1, 3))}, {pt1(Rat(1, 5))}}, 1),
                  std::invalid_argument);  // not nested
}

TEST_CASE("epsilon schedules") {
  // eps_n pairs with F_{n+1}: halve the previous value, then cap by
  // delta(F_{n+1}) / 4 so that 2 eps_n < delta(F_{n+1}).
  auto sched = epsilons({{pt1(Rat(0))},
                         {pt1(Rat(0)), pt1(Rat(1, 5)), pt1(Rat(4, 5))}},
                        Metric::sup());
  REQUIRE(sched.eps.size() == 1);
  CHECK(sched.eps[0] == Rat(1, 20));
  CHECK(sched.delta[0] == Rat(1, 5));

  auto two = epsilons({{pt1(Rat(0))}, {pt1(Rat(0)), pt1(Rat(1, 2))}},
                      Metric::sup());
  CHECK(two.eps[0] == Rat(1, 8));
  CHECK(two.delta[0] == Rat(1, 2));

  auto singletons = epsilons(
      {{pt1(Rat(0))}, {pt1(Rat(0))}, {pt1(Rat(0))}, {pt1(Rat(0))}},
      Metric::sup());
  REQUIRE(singletons.eps.size() == 3);
  CHECK(singletons.eps[0] == Rat(1, 8));
  CHECK(singletons.eps[1] == Rat(1, 16));
  CHECK(singletons.eps[2] == Rat(1, 32));
  CHECK(singletons.delta[1] == 0);  // no pair to separate

  // Strictly decreasing and compatible with the next-level separation.
  auto chain = epsilons({{pt1(Rat(0))},
                         {pt1(Rat(0)), pt1(Rat(1, 2))},
                         {pt1(Rat(0)), pt1(Rat(1, 4)), pt1(Rat(1, 2)),
                          pt1(Rat(3, 4))}},
                        Metric::sup());
  REQUIRE(chain.eps.size() == 2);
  CHECK(chain.eps[1] < chain.eps[0]);
  CHECK(2 * chain.eps[1] < chain.delta[1]);

  auto capped = epsilons({{pt1(Rat(0))}, {pt1(Rat(0))}}, Metric::sup(),
                         Rat(1, 16));
  CHECK(capped.eps[0] == Rat(1, 16));

  CHECK_THROWS_AS(
      epsilons({{pt1(Rat(0))}, {pt1(Rat(0)), pt1(Rat(0))}}, Metric::sup()),
      std::invalid_argument);  // duplicate hull point
  CHECK_THROWS_AS(epsilons({{pt1(Rat(0))}}, Metric::sup()),
                  std::invalid_argument);  // need the next hull for delta
}

TEST_CASE("covering a punctured circle") {
  CharWindow all = char_window({TorusPoint::zero(1)}, 1, 0);
  CoveringCertificate cert =
      covering({TorusPoint::zero(1)}, {TorusPoint::zero(1)}, Rat(1, 8), 0,
               all);
  REQUIRE(cert.B.size() == 3);
  CHECK(cert.B[0] == Character::one_dim(Int(1)));
  CHECK(cert.B[1] == Character::one_dim(Int(2)));
  CHECK(cert.B[2] == Character::one_dim(Int(3)));
  REQUIRE(cert.arcs.size() == 5);
  CHECK(cert.arcs[0].lo == Rat(1, 12));
  CHECK(cert.arcs[0].hi == Rat(1, 4));
  CHECK(cert.arcs[0].phi == 3);
  CHECK(cert.arcs[2].lo == Rat(1, 4));
  CHECK(cert.arcs[2].hi == Rat(3, 4));
  CHECK(cert.arcs[2].phi == 1);
  CHECK(verify_covering(cert) == std::nullopt);

  // Two points and an even window: 6 would need ||6x|| > 1/4 at x = 1/8,
  // which fails at exactly 1/4, so the cover needs 2 and 4.
  CharWindow even = char_window({pt1(Rat(1, 2))}, 1, 0);
  CoveringCertificate cert2 =
      covering({pt1(Rat(1, 2))}, {pt1(Rat(0)), pt1(Rat(1, 2))}, Rat(1, 8), 0,
               even);
  REQUIRE(cert2.B.size() == 2);
  CHECK(cert2.B[0] == Character::one_dim(Int(2)));
  CHECK(cert2.B[1] == Character::one_dim(Int(4)));
  CHECK(verify_covering(cert2) == std::nullopt);
}

TEST_CASE("certificate tampering is caught") {
  CharWindow all = char_window({TorusPoint::zero(1)}, 1, 0);
  CoveringCertificate good =
      covering({TorusPoint::zero(1)}, {TorusPoint::zero(1)}, Rat(1, 8), 0,
               all);

  CoveringCertificate bad = good;
  bad.eps = Rat(1, 4);  // claims a wider covered neighborhood
  CHECK(verify_covering(bad).has_value());

  bad = good;
  bad.arcs.erase(bad.arcs.begin() + 2);  // drop the big arc of phi = 1
  CHECK(verify_covering(bad).has_value());

  bad = good;
  // Shrink it instead. Stopping at 1/2 opens the gap (1/2, 5/8) that no
  // other good arc reaches; 7/10 would still be bridged by (5/8, 7/8).
  bad.arcs[2].hi = Rat(1, 2);
  CHECK(verify_covering(bad).has_value());

  bad = good;
  bad.arcs[2].phi = 2;  // wrong owner: (1/4,3/4) is not good for 2
  CHECK(verify_covering(bad).has_value());

  bad = good;
  bad.tol = Rat(1, 2);  // tolerance must be 2^-(n+2)
  CHECK(verify_covering(bad).has_value());

  bad = good;
  bad.B.push_back(Character::one_dim(Int(0)));  // zero character forbidden
  CHECK(verify_covering(bad).has_value());

  bad = good;
  bad.delta_next = Rat(1, 8);  // needs 2 eps < delta_next
  CHECK(verify_covering(bad).has_value());

  // A window violation: characters must stay within tol on E.
  CharWindow even = char_window({pt1(Rat(1, 2))}, 1, 0);
  CoveringCertificate c2 =
      covering({pt1(Rat(1, 2))}, {pt1(Rat(0)), pt1(Rat(1, 2))}, Rat(1, 8), 0,
               even);
  bad = c2;
  bad.B.push_back(Character::one_dim(Int(5)));  // ||5/2|| = 1/2 > 1/4
  CHECK(verify_covering(bad).has_value());
}

TEST_CASE("dense characterization of the dyadic tower") {
  Tower dyadic = refinement_tower({Int(2)}, 1);
  Characterization res = characterize(dyadic, 3);
  CHECK(res.mode == Characterization::Mode::Dense);
  REQUIRE(res.certs.size() == 3);

  // Level 0: F = {0, 1/2}, eps = 1/16, per-gap pattern {1,2,3} * 2.
  const auto& c0 = res.certs[0];
  CHECK(c0.eps == Rat(1, 16));
  REQUIRE(c0.B.size() == 3);
  CHECK(c0.B[0] == Character::one_dim(Int(2)));
  CHECK(c0.B[1] == Character::one_dim(Int(4)));
  CHECK(c0.B[2] == Character::one_dim(Int(6)));
  CHECK(verify_covering(c0) == std::nullopt);

  const auto& c1 = res.certs[1];
  CHECK(c1.eps == Rat(1, 32));
  REQUIRE(c1.B.size() == 3);
  CHECK(c1.B[0] == Character::one_dim(Int(4)));
  CHECK(c1.B[1] == Character::one_dim(Int(8)));
  CHECK(c1.B[2] == Character::one_dim(Int(12)));
  CHECK(verify_covering(c1) == std::nullopt);

  const auto& c2 = res.certs[2];
  REQUIRE(c2.B.size() == 3);
  CHECK(c2.B[0] == Character::one_dim(Int(8)));
  CHECK(verify_covering(c2) == std::nullopt);

  // The leveled set deduplicates the overlap between consecutive levels.
  CHECK(res.B.level(0).size() == 3);
  CHECK(res.B.level(1).size() == 2);  // 4 already appeared
  CHECK(res.B.contains(Character::one_dim(Int(12))));

  // delta_next links the levels: 2 eps_n < delta(F_{n+1}).
  REQUIRE(c0.delta_next.has_value());
  CHECK(2 * c0.eps < *c0.delta_next);
}

TEST_CASE("finite towers get annihilator shells") {
  Tower words = word_ball_tower({pt1(Rat(1, 3))}, 1);
  Characterization res = characterize(words, 3);
  CHECK(res.mode == Characterization::Mode::ClosedSubgroup);
  REQUIRE(res.subgroup.has_value());
  CHECK(res.subgroup->order.value() == 3);
  REQUIRE(res.B.level_count() == 3);
  CHECK(res.B.level(0)[0] == Character::one_dim(Int(3)));
  CHECK(res.B.level(1)[0] == Character::one_dim(Int(6)));
  CHECK(res.B.level(2)[0] == Character::one_dim(Int(9)));
  CHECK(!res.checked_points.empty());

  // Every emitted character annihilates the subgroup.
  for (const auto& lvl : res.B.levels())
    for (const auto& phi : lvl)
      CHECK(eval_char(phi, pt1(Rat(1, 3))).is_zero());
}

TEST_CASE("subtorus closures lift through the embedding") {
  // Coordinate 0 pinned to zero, coordinate 1 dyadically refined:
  // the union closes up to {0} x T.
  Tower t = refinement_tower({Int(1), Int(2)}, 2);
  Characterization res = characterize(t, 2);
  CHECK(res.mode == Characterization::Mode::Lifted);
  REQUIRE(res.subgroup.has_value());
  CHECK(res.subgroup->rank == 1);
  REQUIRE(res.inner != nullptr);
  CHECK(res.inner->mode == Characterization::Mode::Dense);

  // Lifted characters restrict to the inner ones; shells pin coordinate 0.
  CHECK(res.B.dim() == 2);
  bool saw_shell = false, saw_lift = false;
  for (const auto& phi : res.B.level(0)) {
    if (phi.coeffs[1] == 0) saw_shell = true;
    if (phi.coeffs[0] == 0 && phi.coeffs[1] != 0) saw_lift = true;
    // Characters of level 0 either annihilate {0} x T or restrict to a
    // dyadic-level character; all evaluate on the subgroup through coords.
  }
  CHECK(saw_shell);
  CHECK(saw_lift);

  // Membership semantics: points of {0} x T are annihilated by the shell
  // characters, detected by the lifted ones exactly as in the inner run.
  TorusPoint inside = pt2(Rat(0), Rat(1, 2));
  for (const auto& phi : res.B.level(0))
    if (phi.coeffs[1] == 0) CHECK(eval_char(phi, inside).is_zero());
}

TEST_CASE("two dimensional covering cells") {
  // The 3-division subgroup of T^2 as a dense one-stage tower.
  std::vector<TorusPoint> grid;
  for (long a = 0; a < 3; ++a)
    for (long b = 0; b < 3; ++b) grid.push_back(pt2(Rat(a, 3), Rat(b, 3)));
  Tower t = explicit_tower({grid, grid}, 2, true);
  Characterization res = characterize(t, 1);
  CHECK(res.mode == Characterization::Mode::Dense);
  REQUIRE(res.certs.size() == 1);
  const auto& cert = res.certs[0];
  CHECK(cert.dim == 2);
  CHECK(!cert.cells.empty());
  CHECK(cert.arcs.empty());
  for (const auto& phi : cert.B) {
    CHECK(phi.coeffs[0] % 3 == 0);
    CHECK(phi.coeffs[1] % 3 == 0);
  }
  CHECK(verify_covering(cert) == std::nullopt);

  // Tampering with a cell breaks the area partition.
  CoveringCertificate bad = cert;
  bad.cells.pop_back();
  CHECK(verify_covering(bad).has_value());
}

TEST_CASE("annihilator shells and budget behavior") {
  ClosedSubgroup n = closure({pt1(Rat(1, 3))}, 1);
  auto s0 = annihilator_shell(n, 0);
  REQUIRE(s0.size() == 1);
  CHECK(s0[0] == Character::one_dim(Int(3)));
  auto s2 = annihilator_shell(n, 2);
  CHECK(s2[0] == Character::one_dim(Int(9)));

  ClosedSubgroup full = subgroup_from_annihilator(IntMatrix(0, 0), 1);
  CHECK_THROWS_AS(annihilator_shell(full, 0), std::invalid_argument);

  // Raising levels past the tower's max stage is refused.
  Tower expl = explicit_tower({{pt1(Rat(1, 3))}}, 1, true);
  CHECK_THROWS_AS(characterize(expl, 2), std::invalid_argument);
}

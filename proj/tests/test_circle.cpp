#include "doctest.h"
#include "torus/arcs.hpp"
#include "torus/circle.hpp"
#include "torus/io.hpp"

using namespace torus;

TEST_CASE("circle values reduce to [0,1)") {
  CHECK(CircleValue(Rat(7, 2)).rep().as_rat() == Rat(1, 2));
  CHECK(CircleValue(Rat(-1, 3)).rep().as_rat() == Rat(2, 3));
  CHECK(CircleValue(Rat(5)).is_zero());
  CHECK(CircleValue(Rat(5, 4)).eq(CircleValue(Rat(1, 4))));

  CircleValue root2(Real::sqrt_of(Int(2)));
  CHECK(root2.is_exact());
  CHECK(root2.rep().cmp(Real(Rat(0))) >= 0);
  CHECK(root2.rep().cmp(Real(Rat(1))) < 0);
  CHECK(root2.rep().eq(Real::sqrt_of(Int(2)).sub(Real(Rat(1)))));
}

TEST_CASE("circle arithmetic") {
  CircleValue a(Rat(2, 3));
  CHECK(a.add(a).rep().as_rat() == Rat(1, 3));
  CHECK(a.mul_int(Int(3)).is_zero());
  CHECK(a.neg().rep().as_rat() == Rat(1, 3));
  CHECK(a.sub(CircleValue(Rat(1, 2))).rep().as_rat() == Rat(1, 6));
}

TEST_CASE("norm on the circle") {
  CHECK(norm(CircleValue(Rat(7, 10))).as_rat() == Rat(3, 10));
  CHECK(norm(CircleValue(Rat(1, 2))).as_rat() == Rat(1, 2));
  CHECK(norm(CircleValue(Rat(1, 5))).as_rat() == Rat(1, 5));
  CHECK(norm(CircleValue::zero()).sign() == 0);

  Real n = norm(CircleValue(Real::sqrt_of(Int(2))));
  CHECK(n.eq(Real::sqrt_of(Int(2)).sub(Real(Rat(1)))));
  Interval enc = n.enclosure(40);
  CHECK(enc.contains(Rat(41421, 100000)) ==
        enc.contains(Rat(414214, 1000000)));
  CHECK(enc.width() <= rat_pow2(-40));
}

TEST_CASE("characters evaluate by dot product") {
  TorusPoint p({CircleValue(Rat(2, 5))});
  CHECK(eval_char(Character::one_dim(Int(3)), p).rep().as_rat() == Rat(1, 5));

  TorusPoint q({CircleValue(Rat(1, 2)), CircleValue(Rat(1, 3))});
  Character phi({Int(2), Int(3)});
  CHECK(eval_char(phi, q).is_zero());
  CHECK(eval_char(Character({Int(1), Int(0)}), q).rep().as_rat() ==
        Rat(1, 2));
}

TEST_CASE("character canonical order and sign") {
  CHECK(Character::one_dim(Int(2)) < Character::one_dim(Int(-3)));
  CHECK(Character({Int(1), Int(-2)}) < Character({Int(2), Int(0)}));
  CHECK(Character({Int(-1), Int(2)}).canonical_sign() ==
        Character({Int(1), Int(-2)}));
  CHECK(Character({Int(0), Int(-5)}).canonical_sign() ==
        Character({Int(0), Int(5)}));
  CHECK(Character({Int(3), Int(4)}).max_abs() == 4);
}

TEST_CASE("metrics") {
  TorusPoint a({CircleValue(Rat(0)), CircleValue(Rat(0))});
  TorusPoint b({CircleValue(Rat(1, 2)), CircleValue(Rat(1, 3))});
  CHECK(metric_d(a, b, Metric::sup()).as_rat() == Rat(1, 2));
  CHECK(metric_d(a, b, Metric::omega()).as_rat() == Rat(2, 3));
  CHECK(metric_d(b, b, Metric::sup()).sign() == 0);
}

TEST_CASE("arc sets") {
  ArcSet u = ArcSet::unit();
  CHECK(u.measure() == 1);
  CHECK(u.contains(Rat(1, 3)));

  ArcSet s = ArcSet::single(Rat(0), Rat(1, 4));
  s.add(Rat(1, 8), Rat(3, 8));
  CHECK(s.measure() == Rat(3, 8));
  CHECK(s.arcs().size() == 1);

  ArcSet t = ArcSet::unit();
  t.subtract_open(Rat(1, 4), Rat(3, 4));
  CHECK(t.measure() == Rat(1, 2));
  CHECK(t.arcs().size() == 2);
  CHECK(t.contains(Rat(1, 4)));
  CHECK(!t.contains(Rat(1, 2)));

  ArcSet pts = ArcSet::single(Rat(1, 4), Rat(1, 2));
  pts.subtract_open(Rat(1, 4), Rat(1, 2));
  CHECK(pts.measure() == 0);
  CHECK(pts.point_count() == 2);

  ArcSet left = ArcSet::single(Rat(0), Rat(1, 2));
  ArcSet right = ArcSet::single(Rat(1, 3), Rat(1));
  ArcSet inter = left.intersect(right);
  CHECK(inter.measure() == Rat(1, 6));
  CHECK(inter.arcs().size() == 1);
  CHECK(inter.arcs()[0].lo == Rat(1, 3));
}

TEST_CASE("text forms round trip") {
  CHECK(rat_to_string(Rat(-3, 7)) == "-3/7");
  CHECK(rat_to_string(Rat(5)) == "5");
  CHECK(parse_rat("2/4") == Rat(1, 2));
  CHECK(parse_rat(" -1/3 ") == Rat(-1, 3));
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1 2"), std::invalid_argument);

  Real root2 = Real::sqrt_of(Int(2));
  CHECK(real_to_string(root2) == "sqrt(2):0,1,1");
  CHECK(parse_real("sqrt(2):0,1,1").eq(root2));
  CHECK(parse_real("sqrt(5):-1,1,2").eq(
      Real::quadratic(Int(-1), Int(1), Int(2), Int(5))));
  CHECK(parse_real("sqrt(4):0,1,2").as_rat() == Rat(1));  // collapses

  Real iv = Real::interval(Interval(Dyadic(Int(1), -2), Dyadic(Int(1), -1)));
  CHECK(real_to_string(iv) == "[1/4,1/2]@2");
  Real back = parse_real("[1/4,1/2]@2");
  CHECK(back.is_interval());
  CHECK(back.as_interval().lo.to_rat() == Rat(1, 4));
  CHECK(back.as_interval().hi.to_rat() == Rat(1, 2));
  CHECK_THROWS_AS(parse_real("[1/3,1/2]@2"), std::invalid_argument);

  Character phi({Int(2), Int(-3)});
  CHECK(char_to_string(phi) == "(2,-3)");
  CHECK(parse_character("(2,-3)") == phi);
  CHECK(parse_character("5") == Character::one_dim(Int(5)));

  TorusPoint p({CircleValue(Rat(1, 2)), CircleValue(Rat(1, 3))});
  CHECK(point_to_string(p) == "(1/2,1/3)");
  CHECK(parse_point("(1/2,1/3)").eq(p));
  CHECK(parse_point("7/3").x[0].rep().as_rat() == Rat(1, 3));
  CHECK(parse_point("sqrt(2):0,1,1").dim() == 1);
}

#include <doctest.h>

#include <random>

#include "omdist/omspace.hpp"
#include "test_support.hpp"

using namespace omdist;

TEST_SUITE_BEGIN("omspace");

namespace {
OmPoint pt(const std::string& s) { return parse_om_point(s); }
}  // namespace

TEST_CASE("om_cmp orders powers upside down and keeps zero minimal") {
  CHECK(om_cmp(Om::delta_power(Rat(6)), Om::delta_power(Rat(4))) ==
        OmCmp::MuchLess);
  CHECK(om_cmp(Om::zero(), Om::zero()) == OmCmp::Equal);
  CHECK(om_cmp(Om::zero(), Om::delta_power(Rat(3))) == OmCmp::MuchLess);
  CHECK(om_cmp(Om::delta_power(Rat(3)), Om::zero()) == OmCmp::MuchGreater);
  CHECK(om_cmp(Om::delta_power(Rat(-1)), Om::delta_power(Rat(0))) ==
        OmCmp::MuchGreater);
  CHECK(om_cmp(Om::delta_power(Rat(1, 2)), Om::delta_power(Rat(1, 3))) ==
        OmCmp::MuchLess);
}

TEST_CASE("od takes the dominant power of the difference") {
  CHECK(od(pt("1 + d^2 - 3*d^3"), pt("1 - 5*d^2 + 4*d^4")) ==
        Om::delta_power(Rat(2)));
  CHECK(od(pt("3 + 5*d"), pt("3")) == Om::delta_power(Rat(1)));
  CHECK(od(pt("0"), pt("0")) == Om::zero());

  std::mt19937 rng(7001);
  for (int i = 0; i < 200; ++i) {
    OmPoint p = test::random_point(rng);
    CHECK(od(p, p) == Om::zero());
  }
}

TEST_CASE("od is symmetric and positive definite on random points") {
  std::mt19937 rng(7002);
  for (int i = 0; i < 2000; ++i) {
    OmPoint a = test::random_point(rng);
    OmPoint b = test::random_point(rng);
    CHECK(od(a, b) == od(b, a));
    CHECK((od(a, b) == Om::zero()) == (a == b));
  }
}

TEST_CASE("triangle inequality for orders of magnitude") {
  std::mt19937 rng(7003);
  std::uniform_int_distribution<int> exp_num(-4, 8);
  int checked = 0;
  for (int i = 0; i < 100000 && checked < 12000; ++i) {
    OmPoint a = test::random_point(rng, 3);
    OmPoint b = test::random_point(rng, 3);
    OmPoint c = test::random_point(rng, 3);
    Om d = Om::delta_power(make_rat(exp_num(rng), 2));
    if (much_less(od(a, b), d) && much_less(od(b, c), d)) {
      ++checked;
      CHECK(much_less(od(a, c), d));
    }
  }
  CHECK(checked >= 10000);  // the sample really exercises the premise
}

TEST_CASE("om_cmp is a strict total order") {
  std::mt19937 rng(7004);
  std::uniform_int_distribution<int> exp_num(-6, 6);
  auto random_om = [&]() {
    if (exp_num(rng) == 0) return Om::zero();
    return Om::delta_power(make_rat(exp_num(rng), 2));
  };
  for (int i = 0; i < 5000; ++i) {
    Om x = random_om(), y = random_om(), z = random_om();
    // exactly one of <<, >>, = holds
    int verdicts = (om_cmp(x, y) == OmCmp::MuchLess) +
                   (om_cmp(x, y) == OmCmp::MuchGreater) + (x == y);
    CHECK(verdicts == 1);
    // antisymmetry
    if (om_cmp(x, y) == OmCmp::MuchLess)
      CHECK(om_cmp(y, x) == OmCmp::MuchGreater);
    // transitivity
    if (much_less(x, y) && much_less(y, z)) CHECK(much_less(x, z));
  }
}

TEST_CASE("points_at_scale spreads points at exactly the requested scale") {
  SUBCASE("three points at scale d") {
    auto pts = points_at_scale(OmPoint{}, Om::delta_power(Rat(1)), 3);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0] == pt("0"));
    CHECK(pts[1] == pt("d"));
    CHECK(pts[2] == pt("2*d"));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        CHECK(od(pts[i], pts[j]) == Om::delta_power(Rat(1)));
  }
  SUBCASE("unit scale from one") {
    auto pts = points_at_scale(pt("1"), Om::delta_power(Rat(0)), 2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] == pt("1"));
    CHECK(pts[1] == pt("2"));
    CHECK(od(pts[0], pts[1]) == Om::delta_power(Rat(0)));
  }
  SUBCASE("single point needs no scale") {
    OmPoint base = pt("5 + d^2");
    auto pts = points_at_scale(base, Om::delta_power(Rat(1)), 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0] == base);
    CHECK(points_at_scale(base, Om::zero(), 1).size() == 1);
  }
  SUBCASE("degenerate scale rejected") {
    CHECK_THROWS_AS(points_at_scale(OmPoint{}, Om::zero(), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(points_at_scale(OmPoint{}, Om::delta_power(Rat(1)), 0),
                    std::invalid_argument);
  }
  SUBCASE("random bases and scales verified by direct od") {
    std::mt19937 rng(7005);
    std::uniform_int_distribution<int> exp_num(-4, 8);
    std::uniform_int_distribution<int> count(1, 6);
    for (int i = 0; i < 500; ++i) {
      OmPoint base = test::random_point(rng);
      Om scale = Om::delta_power(make_rat(exp_num(rng), 2));
      int k = count(rng);
      auto pts = points_at_scale(base, scale, k);
      REQUIRE(static_cast<int>(pts.size()) == k);
      CHECK(pts[0] == base);
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
          CHECK(od(pts[a], pts[b]) == scale);
          CHECK(point_cmp(pts[a], pts[b]) < 0);
        }
    }
  }
}

TEST_CASE("point order is the sign of the dominant term") {
  CHECK(point_cmp(pt("0"), pt("d")) < 0);
  CHECK(point_cmp(pt("d"), pt("1")) < 0);
  CHECK(point_cmp(pt("1"), pt("d^(-1)")) < 0);
  CHECK(point_cmp(pt("2 + d"), pt("2")) > 0);
  CHECK(point_cmp(pt("2 - d"), pt("2")) < 0);
  CHECK(point_cmp(pt("1 + d^2"), pt("1 + d^2")) == 0);

  std::mt19937 rng(7006);
  for (int i = 0; i < 2000; ++i) {
    OmPoint a = test::random_point(rng);
    OmPoint b = test::random_point(rng);
    OmPoint c = test::random_point(rng);
    CHECK(point_cmp(a, b) == -point_cmp(b, a));
    if (point_cmp(a, b) < 0 && point_cmp(b, c) < 0) CHECK(point_cmp(a, c) < 0);
  }
}

TEST_CASE("rendering round-trips losslessly") {
  CHECK(to_string(pt("1 - 5*d^2 + 4*d^4")) == "1 - 5*d^2 + 4*d^4");
  CHECK(to_string(OmPoint::delta_power(Rat(3, 2))) == "d^(3/2)");
  CHECK(to_string(OmPoint{}) == "0");
  CHECK(to_string(pt("d")) == "d");
  CHECK(to_string(pt("-2 + d^(-1)")) == "d^(-1) - 2");  // dominant term first
  CHECK(to_string(Om::zero()) == "0");
  CHECK(to_string(Om::delta_power(Rat(2))) == "d^2");

  std::mt19937 rng(7007);
  for (int i = 0; i < 2000; ++i) {
    OmPoint p = test::random_point(rng);
    CHECK(parse_om_point(to_string(p)) == p);
  }
}

TEST_CASE("malformed points are rejected with a position") {
  CHECK_THROWS_AS(parse_om_point("1 +"), std::invalid_argument);
  CHECK_THROWS_AS(parse_om_point("d^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_om_point("2d"), std::invalid_argument);
  CHECK_THROWS_AS(parse_om_point("d^(1/0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_om_point(""), std::invalid_argument);
}

TEST_SUITE_END();

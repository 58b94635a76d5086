#include "eprsim/response.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace eprsim;

namespace {
Direction dir(double a) { return Direction::from_radians(a); }
}  // namespace

TEST(Sign, OnlyPlusMinusOne) {
  EXPECT_EQ(Sign::from_int(1), Sign::plus());
  EXPECT_EQ(Sign::from_int(-1), Sign::minus());
  EXPECT_THROW(Sign::from_int(0), std::invalid_argument);
  EXPECT_THROW(Sign::from_int(2), std::invalid_argument);
  EXPECT_EQ(-Sign::plus(), Sign::minus());
  EXPECT_EQ(Sign::minus() * Sign::minus(), Sign::plus());
}

TEST(HiddenS, Examples) {
  EXPECT_EQ(hidden_s(dir(0), {0.3, 0.5}), Sign::plus());
  EXPECT_EQ(hidden_s(dir(kPi), {0.3, 0.5}), Sign::minus());
  EXPECT_EQ(hidden_s(dir(kPi / 2), {0.5, 0.1}), Sign::minus());
}

TEST(HiddenS, RejectsPointsOutsideDisk) {
  EXPECT_THROW(hidden_s(dir(0), {1.0, 0.5}), std::invalid_argument);
}

TEST(HiddenS, TieBreakOnDividingLine) {
  // Rotated y == 0 exactly: sign of rotated x decides.
  EXPECT_EQ(hidden_s(dir(0), {0.5, 0.0}), Sign::plus());
  EXPECT_EQ(hidden_s(dir(0), {-0.5, 0.0}), Sign::minus());
  EXPECT_EQ(hidden_s(dir(0), {0.0, 0.0}), Sign::plus());
  EXPECT_EQ(hidden_s(dir(kPi), {0.5, 0.0}), Sign::minus());
  EXPECT_EQ(hidden_s(dir(kPi), {0.0, 0.0}), Sign::minus());
}

TEST(HiddenS, AntisymmetricUnderReflection) {
  test_support::Random rng(21);
  for (int i = 0; i < 2000; ++i) {
    const Direction a = rng.direction();
    const Point p = rng.disk_point();
    EXPECT_EQ(hidden_s(reflect(a), p), -hidden_s(a, p));
  }
  for (const Point p : {Point{0.5, 0.0}, Point{-0.5, 0.0}, Point{0.0, 0.0}, Point{0.0, 0.7}}) {
    for (double a : {0.0, kPi / 2, 1.0}) {
      EXPECT_EQ(hidden_s(reflect(dir(a)), p), -hidden_s(dir(a), p));
    }
  }
}

TEST(HiddenS, ScaleInvariant) {
  test_support::Random rng(22);
  for (int i = 0; i < 2000; ++i) {
    const Direction a = rng.direction();
    const Point p = rng.disk_point();
    const double t = rng.uniform(1e-6, 1.0);
    EXPECT_EQ(hidden_s(a, {t * p.x, t * p.y}), hidden_s(a, p));
  }
}

TEST(HiddenS, MatchesRotatedSemidisk) {
  // Independent route: explicit rotation through the geometry primitive.
  test_support::Random rng(23);
  for (int i = 0; i < 2000; ++i) {
    const Direction a = Direction::from_radians(rng.uniform(0.0, kPi));
    const Point p = rng.disk_point();
    const Point q = rotate_cw(p, a.angle_rad());
    if (q.y == 0.0) continue;
    EXPECT_EQ(hidden_s(a, p).value(), q.y > 0 ? 1 : -1);
  }
}

TEST(StationResponse, Examples) {
  EXPECT_EQ(station_response(StationId::kStation1, dir(0), {0.3, 0.5}), Sign::plus());
  EXPECT_EQ(station_response(StationId::kStation2, dir(0), {0.3, 0.5}), Sign::plus());
}

TEST(StationResponse, SingletLawExhaustive) {
  test_support::Random rng(24);
  std::vector<Point> points;
  for (int i = 0; i < 10000; ++i) points.push_back(rng.disk_point());
  for (int k = 0; k < 100; ++k) {
    const Direction c = rng.direction();
    for (const Point& p : points) {
      ASSERT_EQ((station_response(StationId::kStation1, c, p) *
                 station_response(StationId::kStation2, reflect(c), p))
                    .value(),
                -1);
    }
  }
}

TEST(StationResponse, ProductSymmetricInSettings) {
  test_support::Random rng(25);
  for (int i = 0; i < 2000; ++i) {
    const Direction a = rng.direction(), b = rng.direction();
    const Point p = rng.disk_point();
    EXPECT_EQ(station_response(StationId::kStation1, a, p) *
                  station_response(StationId::kStation2, b, p),
              station_response(StationId::kStation1, b, p) *
                  station_response(StationId::kStation2, a, p));
  }
}

TEST(ResponseRule, DefaultRuleAgreesWithStationResponse) {
  test_support::Random rng(26);
  const ResponseRule& rule = default_rule();
  for (int i = 0; i < 200; ++i) {
    const Direction a = rng.direction();
    const LocalObservable s1 = rule.bind(StationId::kStation1, a);
    const LocalObservable s2 = rule.bind(StationId::kStation2, a);
    const Point p = rng.disk_point();
    EXPECT_EQ(s1(p), station_response(StationId::kStation1, a, p));
    EXPECT_EQ(s2(p), station_response(StationId::kStation2, a, p));
  }
}

TEST(ChameleonFlip, Examples) {
  const Direction a = dir(0.2), b = dir(1.1);
  EXPECT_EQ(chameleon_flip(a, a, Sign::plus()), Sign::plus());
  EXPECT_EQ(chameleon_flip(a, b, Sign::plus()), Sign::minus());
  EXPECT_EQ(chameleon_flip(a, b, Sign::minus()), Sign::plus());
  // Reflected direction is a different observable.
  EXPECT_EQ(chameleon_flip(a, reflect(a), Sign::plus()), Sign::minus());
}

TEST(StationId, FromInt) {
  EXPECT_EQ(station_from_int(1), StationId::kStation1);
  EXPECT_EQ(station_from_int(2), StationId::kStation2);
  EXPECT_THROW(station_from_int(3), std::invalid_argument);
}

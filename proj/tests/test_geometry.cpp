#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "guidesim/geometry.hpp"

#include <random>

using namespace guidesim;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(2.0 * M_PI) == doctest::Approx(0.0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -M_PI);
    CHECK(w <= M_PI);
    CHECK(std::abs(std::sin(w) - std::sin(a)) < 1e-9);
    CHECK(std::abs(std::cos(w) - std::cos(a)) < 1e-9);
  }
}

TEST_CASE("system state round trips through the packed vector") {
  SystemState s;
  s.human = {1.0, 2.0};
  s.robot = {3.0, -4.0};
  s.yaw = 2.0;
  const SystemState t = SystemState::from_vector(s.to_vector());
  CHECK(t.human == s.human);
  CHECK(t.robot == s.robot);
  CHECK(t.yaw == doctest::Approx(s.yaw));
}

TEST_CASE("clearance basics") {
  std::vector<Obstacle> obs{{{1.0, 0.0}, 0.1}};
  CHECK(clearance({1.0, 0.0}, obs) == doctest::Approx(-0.1));
  CHECK(clearance({0.0, 0.0}, obs) == doctest::Approx(0.9));
  CHECK(clearance({0.0, 0.0}, {}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("clearance is 1-Lipschitz in the query point") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> r(0.05, 0.5);
  std::vector<Obstacle> obs;
  for (int i = 0; i < 40; ++i) obs.push_back({{u(rng), u(rng)}, r(rng)});
  for (int i = 0; i < 500; ++i) {
    const Vec2 p{u(rng), u(rng)}, q{u(rng), u(rng)};
    CHECK(std::abs(clearance(p, obs) - clearance(q, obs)) <= (p - q).norm() + 1e-12);
  }
}

TEST_CASE("obstacle index matches brute-force min over 100 random obstacles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  std::uniform_real_distribution<double> r(0.01, 0.6);
  std::vector<Obstacle> obs;
  for (int i = 0; i < 100; ++i) obs.push_back({{u(rng), u(rng)}, r(rng)});
  ObstacleIndex index(obs);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{u(rng) * 1.5, u(rng) * 1.5};
    const double expect = clearance(p, obs);
    CHECK(index.min_clearance(p) == doctest::Approx(expect).epsilon(1e-12));
    for (double d : {0.05, 0.3, 1.0, 3.0}) {
      CHECK(index.clearance_at_least(p, d) == (expect >= d));
    }
  }
}

TEST_CASE("cover circles contain the body footprint") {
  const RobotGeometry geom;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-geom.body_length / 2, geom.body_length / 2);
  std::uniform_real_distribution<double> uy(-geom.body_width / 2, geom.body_width / 2);
  std::uniform_real_distribution<double> uyaw(-M_PI, M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 center{uyaw(rng), uyaw(rng)};
    const double yaw = uyaw(rng);
    const auto covers = geom.cover_centers(center, yaw);
    for (int i = 0; i < 2000; ++i) {
      // Random point of the oriented footprint rectangle.
      const Vec2 body{ux(rng), uy(rng)};
      const Vec2 e = heading_vector(yaw);
      const Vec2 p = center + body.x() * e + body.y() * Vec2(-e.y(), e.x());
      const bool inside = (p - covers[0]).norm() <= geom.cover_radius + 1e-12 ||
                          (p - covers[1]).norm() <= geom.cover_radius + 1e-12;
      REQUIRE(inside);
    }
  }
}

TEST_CASE("fixed point sits behind the body center") {
  const RobotGeometry geom;
  const Vec2 f = geom.fixed_point({1.0, 1.0}, 0.0);
  CHECK(f.x() == doctest::Approx(1.0 - geom.fixed_point_offset));
  CHECK(f.y() == doctest::Approx(1.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "guidesim/human_model.hpp"

#include <random>
#include <sstream>

using namespace guidesim;

namespace {

// Literal transcription of the four-case transition rule, kept separate
// from the implementation on purpose.
HumanMode transition_reference(HumanMode q, double f_k, double f_k1, const HumanParams& p) {
  const double df = f_k1 - f_k;
  const bool standing_stays = q == HumanMode::standing && df < p.delta_f * p.t && f_k < p.f_th;
  const bool walking_stops =
      q == HumanMode::walking && (df < -p.delta_f * p.t || f_k < p.f_th);
  const bool standing_starts =
      q == HumanMode::standing && (df >= p.delta_f * p.t || f_k >= p.f_th);
  const bool walking_stays =
      q == HumanMode::walking && df >= -p.delta_f * p.t && f_k >= p.f_th;
  if (standing_stays || walking_stops) return HumanMode::standing;
  if (standing_starts || walking_stays) return HumanMode::walking;
  FAIL("transition rule is not total");
  return HumanMode::standing;
}

HumanParams h1() {
  HumanParams p;
  p.alpha = 0.0105;
  p.beta = -0.0290;
  return p;
}

HumanParams h2() {
  HumanParams p;
  p.alpha = 0.0278;
  p.beta = 0.0444;
  return p;
}

}  // namespace

TEST_CASE("walking speed is the clamped line") {
  CHECK(walking_speed(0.0, h1()) == 0.0);  // negative intercept clamps
  CHECK(walking_speed(20.0, h1()) == doctest::Approx(0.181).epsilon(1e-9));
  CHECK(walking_speed(10.0, h2()) == doctest::Approx(0.3224).epsilon(1e-9));
}

TEST_CASE("mode transition spec cases") {
  HumanParams p;
  p.f_th = 5.0;
  p.delta_f = 10.0;
  p.t = 0.2;  // delta_f * t = 2
  CHECK(mode_transition(HumanMode::standing, 0.0, 10.0, p) == HumanMode::walking);
  CHECK(mode_transition(HumanMode::walking, 4.0, 4.0, p) == HumanMode::standing);
  CHECK(mode_transition(HumanMode::walking, 10.0, 10.0, p) == HumanMode::walking);
  // Boundary belongs to the walking-favoring case.
  CHECK(mode_transition(HumanMode::standing, 5.0, 5.0, p) == HumanMode::walking);
  CHECK(mode_transition(HumanMode::standing, 0.0, 2.0, p) == HumanMode::walking);
  CHECK(mode_transition(HumanMode::walking, 5.0, 3.0, p) == HumanMode::walking);
}

TEST_CASE("mode transition is total and matches the reference on a dense grid") {
  HumanParams p;
  p.f_th = 5.0;
  p.delta_f = 10.0;
  p.t = 0.2;
  int cases = 0;
  for (int q = 0; q <= 1; ++q) {
    for (int fk = 0; fk <= 40; ++fk) {
      for (int fk1 = 0; fk1 <= 40; ++fk1) {
        const auto mode = q ? HumanMode::walking : HumanMode::standing;
        CHECK(mode_transition(mode, fk, fk1, p) ==
              transition_reference(mode, fk, fk1, p));
        ++cases;
      }
    }
  }
  CHECK(cases == 3362);
}

TEST_CASE("human step") {
  const HumanParams p = h1();
  const ForceCommand f{{20.0, 0.0}};
  CHECK(human_step({1.0, 2.0}, f, HumanMode::standing, p) == Vec2{1.0, 2.0});
  const Vec2 next = human_step({0.0, 0.0}, f, HumanMode::walking, p);
  CHECK(next.x() == doctest::Approx(0.0724).epsilon(1e-9));
  CHECK(next.y() == doctest::Approx(0.0));

  // Rotational equivariance.
  const ForceCommand fr{{0.0, 20.0}};
  const Vec2 rot = human_step({0.0, 0.0}, fr, HumanMode::walking, p);
  CHECK(rot.y() == doctest::Approx(next.x()));
  CHECK(rot.x() == doctest::Approx(0.0));

  // Displacement magnitude is exactly speed * t when walking.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-25.0, 25.0);
  for (int i = 0; i < 200; ++i) {
    const ForceCommand fc{{u(rng), u(rng)}};
    const Vec2 d = human_step({0, 0}, fc, HumanMode::walking, p);
    CHECK(d.norm() == doctest::Approx(walking_speed(fc.magnitude(), p) * p.t).epsilon(1e-12));
  }
}

TEST_CASE("robot pose from rope geometry") {
  RobotGeometry geom;
  geom.fixed_point_offset = 0.325;
  const Vec2 a = robot_pose_from({0, 0}, {1, 0}, 1.0, 0.0, geom);
  CHECK(a.x() == doctest::Approx(1.325));
  CHECK(a.y() == doctest::Approx(0.0));
  const Vec2 b = robot_pose_from({0, 0}, {1, 0}, 1.0, M_PI / 2.0, geom);
  CHECK(b.x() == doctest::Approx(1.0));
  CHECK(b.y() == doctest::Approx(0.325));

  // Algebraic inversion: |x_d - d_cf e_theta - x_h| = l.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> ul(0.2, 2.5);
  for (int i = 0; i < 500; ++i) {
    const Vec2 xh{u(rng), u(rng)};
    const double ang = u(rng);
    const Vec2 ef = heading_vector(ang);
    const double l = ul(rng);
    const double yaw = u(rng);
    const Vec2 xd = robot_pose_from(xh, ef, l, yaw, geom);
    CHECK((xd - geom.fixed_point_offset * heading_vector(yaw) - xh).norm() ==
          doctest::Approx(l).epsilon(1e-12));
  }
}

TEST_CASE("fit recovers exact coefficients from noiseless data") {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 120; ++i) {
    const double f = 2.0 + 0.2 * i;
    samples.emplace_back(f, 0.0105 * f - 0.0290);
  }
  const FitResult fit = fit_params(samples);
  CHECK(std::abs(fit.alpha - 0.0105) < 1e-12);
  CHECK(std::abs(fit.beta + 0.0290) < 1e-12);
  CHECK(fit.residual_rms < 1e-12);
}

TEST_CASE("fit is scale consistent") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<std::pair<double, double>> a, b;
  for (int i = 0; i < 100; ++i) {
    const double f = 1.0 + 0.3 * i;
    const double v = 0.02 * f + 0.1 + g(rng);
    a.emplace_back(f, v);
    b.emplace_back(f, 3.0 * v);
  }
  const FitResult fa = fit_params(a), fb = fit_params(b);
  CHECK(fb.alpha == doctest::Approx(3.0 * fa.alpha).epsilon(1e-9));
  CHECK(fb.beta == doctest::Approx(3.0 * fa.beta).epsilon(1e-9));
}

TEST_CASE("fit recovers alpha within 5 percent under velocity noise") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> g(0.0, 0.02);
  std::uniform_real_distribution<double> uf(2.0, 25.0);
  int ok = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 200; ++i) {
      const double f = uf(rng);
      samples.emplace_back(f, 0.0105 * f - 0.0290 + g(rng));
    }
    // Independent samples: filtering would bias the slope, so fit raw.
    const FitResult fit = fit_params(samples, 1e9, 1.0);
    if (std::abs(fit.alpha - 0.0105) <= 0.05 * 0.0105) ++ok;
  }
  CHECK(ok >= 95);
}

TEST_CASE("degenerate data raises") {
  std::vector<std::pair<double, double>> one{{5.0, 0.1}};
  CHECK_THROWS_AS(fit_params(one), std::invalid_argument);
  std::vector<std::pair<double, double>> same{{5.0, 0.1}, {5.0, 0.2}, {5.0, 0.3}};
  CHECK_THROWS_AS(fit_params(same), std::invalid_argument);
}

TEST_CASE("csv reader") {
  std::istringstream in("F_newtons,v_mps\n10,0.076\n20,0.181\n");
  const auto samples = read_force_velocity_csv(in);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].first == doctest::Approx(10.0));
  CHECK(samples[1].second == doctest::Approx(0.181));
  std::istringstream bad("F,v\n10\n");
  CHECK_THROWS(read_force_velocity_csv(bad));
}

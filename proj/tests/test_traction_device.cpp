#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "guidesim/traction_device.hpp"

#include <random>

using namespace guidesim;

TEST_CASE("rope force follows Hooke's law with a slack branch") {
  RopeState rope;
  rope.stiffness = 50.0;
  rope.natural_length = 1.0;
  rope.payout = 0.5;
  const ForceCommand f = rope_force({0, 0}, {2.0, 0}, rope);
  CHECK(f.magnitude() == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(f.direction().x() == doctest::Approx(1.0));

  rope.payout = 0.5;
  CHECK(rope_force({0, 0}, {1.2, 0}, rope).magnitude() == 0.0);  // slack
  rope.payout = 0.0;
  CHECK(rope_force({0, 0}, {1.0, 0}, rope).magnitude() == 0.0);  // boundary
  CHECK(rope_force({0, 0}, {1.0, 0}, rope).direction() == Vec2{0, 0});
  CHECK_THROWS_AS(rope_force({1, 1}, {1, 1}, rope), std::domain_error);
}

TEST_CASE("slack and taut invariants over random geometries") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> up(0.0, 0.8);
  RopeState rope;
  for (int i = 0; i < 100000; ++i) {
    const Vec2 xh{u(rng), u(rng)};
    const Vec2 xf{u(rng), u(rng)};
    const double d = (xf - xh).norm();
    if (d < 1e-6) continue;
    rope.payout = up(rng);
    const ForceCommand f = rope_force(xh, xf, rope);
    const double elong = d - rope.payout - rope.natural_length;
    if (elong <= 0.0) {
      REQUIRE(f.magnitude() == 0.0);
    } else {
      REQUIRE(std::abs(f.magnitude() - rope.stiffness * elong) <= 1e-9);
      REQUIRE((f.direction() - (xf - xh) / d).norm() <= 1e-12);
    }
  }
}

TEST_CASE("pid direction conventions") {
  MotorState motor;
  motor.integrator = 0.0;
  const MotorState a = fcd_pid_step(10.0, 10.0, motor, 0.01);
  CHECK(a.payout_rate == doctest::Approx(0.0));
  const MotorState b = fcd_pid_step(20.0, 10.0, motor, 0.01);
  CHECK(b.payout_rate < 0.0);  // retract to raise the force
  const MotorState c = fcd_pid_step(5.0, 10.0, motor, 0.01);
  CHECK(c.payout_rate > 0.0);
  CHECK(std::abs(b.payout_rate) <= motor.max_rate);
}

namespace {

struct StepResponse {
  double settle_time = -1.0;
  bool stayed = true;
  double final_force = 0.0;
};

// Static human/fixed-point geometry, force reference step f0 -> f1.
StepResponse simulate_step(double f0, double f1, double distance) {
  RopeState rope;
  rope.mode = RopeMode::elastic_fcd;
  MotorState motor;
  // Start at equilibrium for f0.
  rope.payout = distance - rope.natural_length - f0 / rope.stiffness;
  REQUIRE(rope.payout >= 0.0);
  REQUIRE(rope.payout <= rope.payout_max);

  const Vec2 xh{0, 0}, xf{distance, 0};
  const double dt = 0.01;
  StepResponse r;
  for (double t = 0.0; t <= 3.0; t += dt) {
    const DeviceResult res = device_step(xh, xf, rope, motor, f1, dt);
    rope = res.rope;
    motor = res.motor;
    r.final_force = res.force.magnitude();
    const bool within = std::abs(r.final_force - f1) <= 0.05 * f1;
    if (within && r.settle_time < 0.0) r.settle_time = t;
    if (!within && r.settle_time >= 0.0 && t > 1.0) r.stayed = false;
  }
  return r;
}

}  // namespace

TEST_CASE("fcd step 10 to 20 N settles within 5 percent in under a second") {
  const StepResponse r = simulate_step(10.0, 20.0, 1.8);
  CHECK(r.settle_time >= 0.0);
  CHECK(r.settle_time <= 1.0);
  CHECK(r.stayed);
  CHECK(r.final_force == doctest::Approx(20.0).epsilon(0.05));
}

TEST_CASE("force error decays monotonically once past the transient") {
  RopeState rope;
  rope.mode = RopeMode::elastic_fcd;
  MotorState motor;
  rope.payout = 0.6;
  const Vec2 xh{0, 0}, xf{1.8, 0};
  std::vector<double> err;
  for (double t = 0.0; t <= 2.0; t += 0.01) {
    const DeviceResult res = device_step(xh, xf, rope, motor, 18.0, 0.01);
    rope = res.rope;
    motor = res.motor;
    err.push_back(std::abs(res.force.magnitude() - 18.0));
  }
  // Transient = saturation phase plus one overshoot hump; afterwards the
  // error must shrink monotonically toward zero.
  for (size_t i = 81; i < err.size(); ++i) REQUIRE(err[i] <= err[i - 1] + 1e-9);
  CHECK(err.back() < 0.05);
}

TEST_CASE("payout monotonicity while the measured force stays below the reference") {
  RopeState rope;
  rope.mode = RopeMode::elastic_fcd;
  MotorState motor;
  rope.payout = 0.5;
  const Vec2 xh{0, 0}, xf{1.6, 0};  // F = 50*(0.6-0.5) = 5 N < ref
  double prev = rope.payout;
  for (int i = 0; i < 300; ++i) {
    const DeviceResult res = device_step(xh, xf, rope, motor, 22.0, 0.01);
    rope = res.rope;
    motor = res.motor;
    if (res.force.magnitude() >= 22.0 || res.payout_saturated) break;
    CHECK(rope.payout <= prev + 1e-12);
    prev = rope.payout;
  }
  CHECK(rope.payout < 0.5);
}

TEST_CASE("elastic mode freezes payout, inelastic uses the rigid stiffness") {
  RopeState rope;
  rope.mode = RopeMode::elastic;
  rope.payout = 0.3;
  MotorState motor;
  const DeviceResult a = device_step({0, 0}, {2.0, 0}, rope, motor, 50.0, 0.01);
  CHECK(a.rope.payout == doctest::Approx(0.3));
  CHECK(a.motor.payout_rate == 0.0);

  rope.mode = RopeMode::inelastic;
  rope.payout = 0.0;
  const DeviceResult b = device_step({0, 0}, {1.05, 0}, rope, motor, 0.0, 0.01);
  CHECK(b.force.magnitude() == doctest::Approx(2000.0 * 0.05).epsilon(1e-9));
}

TEST_CASE("payout saturation is reported and clamped") {
  RopeState rope;
  rope.mode = RopeMode::elastic_fcd;
  rope.payout = 0.005;
  MotorState motor;
  bool saturated = false;
  for (int i = 0; i < 300; ++i) {
    const DeviceResult res = device_step({0, 0}, {2.4, 0}, rope, motor, 80.0, 0.01);
    rope = res.rope;
    motor = res.motor;
    saturated = saturated || res.payout_saturated;
    REQUIRE(rope.payout >= 0.0);
    REQUIRE(rope.payout <= rope.payout_max);
  }
  CHECK(saturated);
}

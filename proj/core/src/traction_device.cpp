#include "guidesim/traction_device.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace guidesim {

ForceCommand rope_force(const Vec2& human, const Vec2& fixed_point, const RopeState& rope) {
  const Vec2 diff = fixed_point - human;
  const double d = diff.norm();
  if (d <= 0.0) throw std::domain_error("rope_force: human coincides with the fixed point");
  const double elongation = d - rope.payout - rope.natural_length;
  if (elongation <= 0.0) return {};  // slack
  return {rope.effective_stiffness() * elongation * (diff / d)};
}

MotorState fcd_pid_step(double f_ref, double f_meas, MotorState motor, double dt) {
  const double e = f_ref - f_meas;
  const double de = motor.has_prev_error ? (e - motor.prev_error) / dt : 0.0;
  const double integ = motor.integrator + e * dt;

  // Positive error means more force wanted; retract string => negative rate.
  const double raw = -(motor.kp * e + motor.ki * integ + motor.kd * de);
  const double clamped = std::clamp(raw, -motor.max_rate, motor.max_rate);

  // Clamping anti-windup: keep the old integrator while the command is
  // saturated and the error would push it further in.
  if (clamped == raw || e * raw > 0.0) {
    motor.integrator = integ;
  }
  motor.payout_rate = clamped;
  motor.prev_error = e;
  motor.has_prev_error = true;
  return motor;
}

DeviceResult device_step(const Vec2& human, const Vec2& fixed_point, const RopeState& rope,
                         const MotorState& motor, double f_ref, double dt,
                         double f_meas_noise) {
  DeviceResult out{{}, rope, motor, false};
  if (rope.mode == RopeMode::elastic_fcd) {
    const double f_meas = rope_force(human, fixed_point, rope).magnitude() + f_meas_noise;
    out.motor = fcd_pid_step(f_ref, f_meas, motor, dt);
    double payout = rope.payout + out.motor.payout_rate * dt;
    if (payout < 0.0 || payout > rope.payout_max) {
      payout = std::clamp(payout, 0.0, rope.payout_max);
      out.payout_saturated = true;
    }
    out.rope.payout = payout;
  } else {
    out.motor.payout_rate = 0.0;
  }
  out.force = rope_force(human, fixed_point, out.rope);
  return out;
}

}  // namespace guidesim

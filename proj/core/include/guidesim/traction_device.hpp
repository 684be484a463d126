#ifndef GUIDESIM_TRACTION_DEVICE_HPP
#define GUIDESIM_TRACTION_DEVICE_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/human_model.hpp"

namespace guidesim {

/// Physical configuration of the traction rope.
enum class RopeMode { inelastic, elastic, elastic_fcd };

/// Elastic rope with a motorized string reel. The elongation available to
/// the spring is distance - payout - natural_length; releasing string
/// (payout up) slackens the rope, retracting it (payout down) stretches it.
struct RopeState {
  double stiffness = 50.0;        // K, N/m
  double natural_length = 1.0;    // L0, m
  double payout = 0.0;            // released string, m
  double payout_max = 0.8;        // m
  double rigid_stiffness = 2000.0;  // stand-in K for the inelastic baseline
  RopeMode mode = RopeMode::elastic_fcd;

  double effective_stiffness() const {
    return mode == RopeMode::inelastic ? rigid_stiffness : stiffness;
  }
};

/// Reel motor under PID force control. Rates are payout rates: negative
/// retracts string and raises the traction force.
struct MotorState {
  double payout_rate = 0.0;  // m/s, signed
  double max_rate = 0.5;     // m/s
  double kp = 0.2;           // (m/s)/N
  double ki = 0.5;           // (m/s)/(N*s)
  double kd = 0.0;           // (m/s)/(N/s)
  double integrator = 0.0;   // N*s
  double prev_error = 0.0;
  bool has_prev_error = false;
};

/// Hooke's-law traction force on the human.
/// d = |x_f - x_h|, elongation = max(0, d - payout - L0), F = K * elongation,
/// directed from the human toward the fixed point. Slack ropes produce the
/// zero force (zero direction). Throws std::domain_error when d = 0.
ForceCommand rope_force(const Vec2& human, const Vec2& fixed_point, const RopeState& rope);

/// One PID update on the force error e = f_ref - f_meas. The commanded
/// payout rate is clamped to +-max_rate with clamping anti-windup.
MotorState fcd_pid_step(double f_ref, double f_meas, MotorState motor, double dt);

struct DeviceResult {
  ForceCommand force;
  RopeState rope;
  MotorState motor;
  bool payout_saturated = false;
};

/// One device-rate tick. In elastic_fcd mode the PID adjusts payout toward
/// f_ref; in the other modes payout is frozen. f_meas_noise is added to the
/// measured force fed back to the controller (the sensor in the loop).
DeviceResult device_step(const Vec2& human, const Vec2& fixed_point, const RopeState& rope,
                         const MotorState& motor, double f_ref, double dt,
                         double f_meas_noise = 0.0);

}  // namespace guidesim

#endif  // GUIDESIM_TRACTION_DEVICE_HPP

#ifndef GUIDESIM_HUMAN_MODEL_HPP
#define GUIDESIM_HUMAN_MODEL_HPP

#include "guidesim/geometry.hpp"

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace guidesim {

/// Discrete human motion mode: q = 0 standing, q = 1 walking.
enum class HumanMode : int { standing = 0, walking = 1 };

inline int mode_value(HumanMode q) { return static_cast<int>(q); }

/// Parameters of the force-response model. The walking speed along the
/// rope is alpha * F + beta; transitions are governed by the force
/// threshold f_th, the rate threshold delta_f and the step interval t.
struct HumanParams {
  double alpha = 0.0105;   // (m/s)/N
  double beta = -0.0290;   // m/s
  double f_th = 5.0;       // N
  double delta_f = 10.0;   // N/s
  double t = 0.4;          // s
};

/// Planar traction force. Direction is the zero vector when slack.
struct ForceCommand {
  Vec2 force{0.0, 0.0};

  double magnitude() const { return force.norm(); }
  Vec2 direction() const {
    const double m = force.norm();
    return m > 0.0 ? Vec2(force / m) : Vec2(0.0, 0.0);
  }
};

/// Walking speed along the rope direction, max(0, alpha*F + beta).
/// Clamped: a pulled human never walks backward.
double walking_speed(double f, const HumanParams& p);

/// One evaluation of the standing/walking transition rule with
/// delta_F = f_next - f_curr:
///   standing -> walking  iff delta_F >= delta_f*t  or f_curr >= f_th
///   walking  -> standing iff delta_F < -delta_f*t  or f_curr <  f_th
HumanMode mode_transition(HumanMode q, double f_curr, double f_next, const HumanParams& p);

/// Discrete human step: x+ = x + q * v(F) * e_F * t.
Vec2 human_step(const Vec2& human, const ForceCommand& f, HumanMode q, const HumanParams& p);

/// Robot center implied by the rope geometry:
/// x_d = x_h + l * e_f + d_cf * e_theta.
Vec2 robot_pose_from(const Vec2& human, const Vec2& e_f, double l, double yaw,
                     const RobotGeometry& geom);

struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  double residual_rms = 0.0;
};

/// First-order low-pass filters both channels, then ordinary least squares
/// for v = alpha*F + beta. Samples are (force N, speed m/s) pairs taken at
/// sample_rate_hz. Throws std::invalid_argument when fewer than two
/// distinct force values remain after filtering.
FitResult fit_params(std::span<const std::pair<double, double>> samples,
                     double filter_cutoff_hz = 2.0, double sample_rate_hz = 100.0);

/// Reads the 2-column `F_newtons,v_mps` CSV (one header line).
std::vector<std::pair<double, double>> read_force_velocity_csv(std::istream& in);
std::vector<std::pair<double, double>> read_force_velocity_csv_file(const std::string& path);

}  // namespace guidesim

#endif  // GUIDESIM_HUMAN_MODEL_HPP

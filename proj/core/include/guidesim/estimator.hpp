#ifndef GUIDESIM_ESTIMATOR_HPP
#define GUIDESIM_ESTIMATOR_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/human_model.hpp"

#include <random>

namespace guidesim {

/// Gaussian belief over the 5-dimensional system state.
struct Belief {
  Vec5 mean = Vec5::Zero();
  Mat5 covariance = Mat5::Identity();
};

/// Process/measurement noise and the camera geometry used to synthesize
/// observations.
struct NoiseConfig {
  // diag(Q): sigma^2_{F,xh}, sigma^2_{F,yh}, sigma^2_x, sigma^2_y, sigma^2_theta
  Vec5 process_var{1e-4, 1e-4, 4e-4, 4e-4, 3e-4};
  // diag(R): sigma^2_l, sigma^2_phi, sigma^2_{s,x}, sigma^2_{s,y}, sigma^2_{s,theta}
  Vec5 obs_var = make_obs_var();
  double kappa = 1.0;  // sigma point spread, n + kappa > 0

  // Camera model: human height H, camera height h_c, fixed inclination.
  double human_height = 1.70;
  double camera_height = 0.60;
  double camera_inclination = 0.26;  // rad

  static Vec5 make_obs_var() {
    Vec5 v;
    const double deg = M_PI / 180.0;
    v << 0.05 * 0.05, (2.0 * deg) * (2.0 * deg), 0.03 * 0.03, 0.03 * 0.03, (1.0 * deg) * (1.0 * deg);
    return v;
  }
};

/// Measurement vector (l, phi, x_d, y_d, theta): rope length, gimbal yaw
/// toward the human, and the localization pose.
struct Observation {
  Vec5 z = Vec5::Zero();
};

struct SigmaPoints {
  Eigen::Matrix<double, 5, 11> points;
  Eigen::Matrix<double, 11, 1> weights;
};

/// 2n+1 symmetric sigma points: center weight kappa/(n+kappa), remaining
/// 1/(2(n+kappa)), offsets the columns of sqrt((n+kappa) * Sigma).
/// Retries the factorization once with jitter before giving up.
SigmaPoints sigma_points(const Belief& belief, double kappa);

/// Observation function h(x) under the given geometry.
Vec5 observe(const Vec5& state, const RobotGeometry& geom);

/// Process update through the mode-dependent dynamics. The commanded force
/// and velocity are exogenous inputs; q comes from the planner (the filter
/// does not infer it). Adds process noise Q * dt.
Belief ukf_predict(const Belief& belief, const ForceCommand& force, const Vec3& u, HumanMode q,
                   const HumanParams& params, const Vec3& discount, const NoiseConfig& noise,
                   double dt);

/// Measurement update with innovation angle wrapping on the gimbal and yaw
/// components. Skips (and reports via *skipped) when the innovation
/// covariance is not invertible. The posterior covariance is
/// re-symmetrized and eigenvalue-clamped to stay PSD.
Belief ukf_update(const Belief& belief, const Observation& obs, const RobotGeometry& geom,
                  const NoiseConfig& noise, bool* skipped = nullptr);

/// Forward-generates a camera measurement from the true state: builds the
/// facial depth and gimbal yaw from the geometry, inverts the horizontal
/// distance formula back to a human position and assembles the observation
/// with Gaussian noise per R.
Observation synthesize_observation(const SystemState& truth, const RobotGeometry& geom,
                                   const NoiseConfig& noise, std::mt19937_64& rng);

}  // namespace guidesim

#endif  // GUIDESIM_ESTIMATOR_HPP

#ifndef GUIDESIM_PLANNER_CONFIG_HPP
#define GUIDESIM_PLANNER_CONFIG_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/human_model.hpp"
#include "guidesim/nlp.hpp"

#include <cmath>

namespace guidesim {

/// Weights, bounds and horizons shared by the two motion planners.
struct PlannerConfig {
  int horizon_n = 10;  // stage-1 steps
  int horizon_m = 10;  // stage-2 steps
  double robot_period = 0.1;  // stage-2 step, s (stage-1 uses HumanParams::t)

  Eigen::Matrix2d q_terminal = Eigen::Vector2d(50.0, 50.0).asDiagonal();  // Q_t^h
  Eigen::Matrix2d q_track = Eigen::Vector2d(10.0, 10.0).asDiagonal();     // Q^h
  Eigen::Matrix2d q_force = Eigen::Vector2d(0.05, 0.05).asDiagonal();     // Q_F
  double w_yaw_change = 5.0;  // w_dtheta
  double w_rope = 0.01;       // w_l

  Eigen::Matrix3d q_robot = Eigen::Vector3d(20.0, 20.0, 5.0).asDiagonal();  // Q^d
  Eigen::Matrix3d r_robot = Eigen::Vector3d(1.0, 1.0, 0.5).asDiagonal();    // R^d

  double f_min = 2.0;   // N
  double f_max = 25.0;  // N
  double l_min = 0.8;   // m
  double l_max = 2.0;   // m
  double phi_f = 20.0 * M_PI / 180.0;      // force direction change bound
  double phi_theta = 45.0 * M_PI / 180.0;  // force/yaw angle bound
  double safety_margin = 0.1;              // d_s
  double stiffness = 50.0;                 // K, shared with the rope

  // Robot velocity box (body frame).
  double vx_min = -0.5, vx_max = 0.8;
  double vy_abs = 0.25;
  double omega_abs = 1.0;

  // Velocity discount while pulled by a walking human; identity standing.
  Vec3 discount{0.9, 0.9, 0.95};

  // Hold plan emitted when no feasible motion exists: commands a stop.
  double hold_force = 3.0;  // N, below the walking threshold

  int mode_iterations_max = 3;
  double obstacle_prune_radius = 4.0;  // m, from the current human position

  NlpOptions nlp_stage1{};
  NlpOptions nlp_stage2{};
};

}  // namespace guidesim

#endif  // GUIDESIM_PLANNER_CONFIG_HPP

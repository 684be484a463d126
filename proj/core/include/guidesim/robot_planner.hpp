#ifndef GUIDESIM_ROBOT_PLANNER_HPP
#define GUIDESIM_ROBOT_PLANNER_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/human_model.hpp"
#include "guidesim/human_planner.hpp"
#include "guidesim/planner_config.hpp"

#include <span>
#include <vector>

namespace guidesim {

/// Reference trajectory for the robot tracker, sampled at the stage-1
/// period. Derived from the stage-1 decisions through the system equations;
/// robot_ref[k] packs (x_d, y_d, theta).
struct RobotRefTrajectory {
  double period = 0.4;
  std::vector<Vec3> robot_ref;    // k = 0..N
  std::vector<Vec2> human_ref;    // k = 0..N
  std::vector<HumanMode> modes;   // interval modes, k = 0..N-1

  /// Linear interpolation (wrap-aware in yaw) at time tau since sample 0;
  /// clamped at the ends.
  Vec3 sample(double tau) const;
  HumanMode mode_at(double tau) const;
};

/// Rolls the planned forces through the hybrid model to rebuild the
/// expected human and robot references from the current state estimate.
RobotRefTrajectory reconstruct_reference(const SystemState& state, HumanMode q_curr,
                                         const HumanPlanSolution& stage1,
                                         const HumanParams& params, const RobotGeometry& geom);

struct RobotPlanResult {
  std::vector<Vec3> commands;  // u_k = (vx, vy, omega), k = 0..M-1
  bool converged = false;
  bool degraded = false;  // fallback: zero commands
  double objective = 0.0;
  double max_violation = 0.0;
};

/// M-step tracking MPC: minimizes the tracking-plus-effort cost under the
/// velocity box (hard bounds) and cover-circle clearance constraints.
/// time_offset is the age of the stage-1 plan when this solve starts.
RobotPlanResult plan_velocity(const SystemState& state, const RobotRefTrajectory& reference,
                              double time_offset, std::span<const Obstacle> obstacles,
                              const PlannerConfig& config, const RobotGeometry& geom,
                              const RobotPlanResult* warm = nullptr);

/// Smooth program behind plan_velocity; exposed for gradient verification.
NlpProblem build_robot_planner_nlp(const SystemState& state, const RobotRefTrajectory& reference,
                                   double time_offset, std::span<const Obstacle> obstacles,
                                   const PlannerConfig& config, const RobotGeometry& geom);

/// Re-evaluates the velocity boxes and clearance constraints along the
/// rollout of a command sequence; returns the largest violation.
double audit_robot_plan(const SystemState& state, const RobotPlanResult& plan,
                        const RobotRefTrajectory& reference, double time_offset,
                        std::span<const Obstacle> obstacles, const PlannerConfig& config,
                        const RobotGeometry& geom);

}  // namespace guidesim

#endif  // GUIDESIM_ROBOT_PLANNER_HPP

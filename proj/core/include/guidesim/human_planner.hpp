#ifndef GUIDESIM_HUMAN_PLANNER_HPP
#define GUIDESIM_HUMAN_PLANNER_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/human_model.hpp"
#include "guidesim/planner_config.hpp"

#include <span>
#include <vector>

namespace guidesim {

/// Raised when the current state already violates the clearance
/// constraints, so no feasible plan can exist.
class InfeasibleStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stage-1 solution: the decision trajectory {F_k, l_k, theta_k} plus the
/// predicted rollout it induces.
struct HumanPlanSolution {
  std::vector<Vec2> forces;      // F_k, k = 0..N-1
  std::vector<double> lengths;   // l_k
  std::vector<double> yaws;      // theta_k
  std::vector<Vec2> human_path;  // predicted x^h_k, k = 0..N
  std::vector<Vec2> robot_path;  // predicted x^d_k, k = 0..N
  std::vector<HumanMode> modes;  // frozen q_k, k = 0..N-1

  bool converged = false;
  bool modes_stable = false;
  bool hold = false;      // stop command: forces below the walking threshold
  bool degraded = false;  // caller may prefer to keep the previous plan
  double objective = 0.0;
  double max_violation = 0.0;
  int outer_iterations = 0;
  int mode_iterations = 0;
};

/// Rolls the mode transition rule over the horizon from q_curr using the
/// candidate force magnitudes; the result freezes the hybrid modes inside
/// the smooth program.
std::vector<HumanMode> fix_mode_sequence(HumanMode q_curr, std::span<const double> magnitudes,
                                         const HumanParams& params);

/// Assembles the smooth program solved inside plan_forces for one frozen
/// mode sequence. Exposed for gradient verification and diagnostics.
NlpProblem build_human_planner_nlp(const SystemState& state, std::vector<HumanMode> modes,
                                   std::span<const Vec2> reference, const Vec2& target,
                                   std::span<const Obstacle> obstacles,
                                   const HumanParams& params, const RobotGeometry& geom,
                                   const PlannerConfig& config);

/// Solves the N-step force-planning problem: track the reference path,
/// smooth the force, limit yaw changes, prefer rope-deformation force
/// changes, subject to dynamics, force/length/direction bounds and
/// clearance of the human circle and both robot cover circles.
///
/// reference is padded with target when shorter than N+1 points. warm, when
/// non-null, seeds the solve with the previous solution shifted one step.
HumanPlanSolution plan_forces(const SystemState& state, HumanMode q_curr,
                              std::span<const Vec2> reference, const Vec2& target,
                              std::span<const Obstacle> obstacles, const HumanParams& params,
                              const RobotGeometry& geom, const PlannerConfig& config,
                              const HumanPlanSolution* warm = nullptr);

/// Independent re-evaluation of every constraint of the planning problem at
/// a solution; returns the largest violation (0 when feasible). Checks the
/// dynamics consistency of the stored rollout as well.
double audit_human_plan(const SystemState& state, HumanMode q_curr,
                        const HumanPlanSolution& sol, std::span<const Obstacle> obstacles,
                        const HumanParams& params, const RobotGeometry& geom,
                        const PlannerConfig& config);

}  // namespace guidesim

#endif  // GUIDESIM_HUMAN_PLANNER_HPP

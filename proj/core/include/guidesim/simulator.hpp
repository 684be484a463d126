#ifndef GUIDESIM_SIMULATOR_HPP
#define GUIDESIM_SIMULATOR_HPP

#include "guidesim/estimator.hpp"
#include "guidesim/human_planner.hpp"
#include "guidesim/metrics.hpp"
#include "guidesim/path_planner.hpp"
#include "guidesim/robot_planner.hpp"
#include "guidesim/scenario.hpp"
#include "guidesim/traction_device.hpp"
#include "guidesim/trajectory_log.hpp"

#include <random>

namespace guidesim {

/// Ground-truth human integration at the plant rate: standing holds
/// position; walking moves along the force direction at the model speed,
/// with zero-mean heading jitter.
Vec2 human_plant_step(const Vec2& human, const ForceCommand& force, HumanMode q,
                      const HumanParams& params, double dt, double direction_jitter_std,
                      std::mt19937_64& rng);

/// Ground-truth robot integration: x+ = x + D R_z(theta) u dt, discount
/// applied while the walking human pulls; yaw wrapped.
Vec3 robot_plant_step(const Vec3& pose, const Vec3& u, HumanMode q, const Vec3& discount,
                      double dt);

/// Plant-side mode machine: low-pass filters the force magnitude and
/// applies the transition rule once per step interval t.
class HumanModeMachine {
 public:
  HumanModeMachine(HumanMode q0, const HumanParams& params, double filter_cutoff_hz = 2.0);

  /// Advances the filter by dt and switches the mode at interval
  /// boundaries. Returns the current mode.
  HumanMode step(double force_magnitude, double dt);
  HumanMode mode() const { return mode_; }
  double filtered_force() const { return filtered_; }

 private:
  HumanParams params_;
  HumanMode mode_;
  double cutoff_hz_;
  double filtered_ = 0.0;
  bool filter_init_ = false;
  double since_eval_ = 0.0;
  double force_at_eval_ = 0.0;
};

struct RunResult {
  TrajectoryLog log;
  std::vector<BeliefRow> belief_trace;
  RunStatus status = RunStatus::timeout;
  double sim_time = 0.0;
  HumanParams estimated_params;
  FitResult calibration;
  bool calibrated = false;
};

/// Simulated identification run: the robot pulls away on a straight line
/// with the force control device disabled while force/velocity samples are
/// collected and fit. Returns the fit; est receives alpha/beta.
FitResult calibrate_human_params(const ScenarioConfig& config, std::mt19937_64& rng,
                                 HumanParams& est);

/// Runs the closed loop (plant, traction device, estimator, both planners,
/// path replanning) on cooperative single-threaded cadences until the
/// human reaches the target or the duration cap expires. Deterministic for
/// a fixed config and seed.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace guidesim

#endif  // GUIDESIM_SIMULATOR_HPP

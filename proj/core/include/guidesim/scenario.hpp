#ifndef GUIDESIM_SCENARIO_HPP
#define GUIDESIM_SCENARIO_HPP

#include "guidesim/estimator.hpp"
#include "guidesim/grid_map.hpp"
#include "guidesim/path_planner.hpp"
#include "guidesim/planner_config.hpp"
#include "guidesim/traction_device.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace guidesim {

/// Loop rates in Hz. Every rate must divide the plant rate.
struct RateConfig {
  double plant_hz = 200.0;
  double device_hz = 100.0;
  double estimator_hz = 20.0;
  double robot_mpc_hz = 10.0;
  double human_planner_hz = 2.0;
  double log_hz = 100.0;
};

/// Raised for unusable scenario documents (bad JSON, missing map, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string map_path;
  GridMap map;

  Vec2 human_start{0.0, 0.0};
  double human_heading = 0.0;
  Vec2 robot_start{1.725, 0.0};
  double robot_yaw = 0.0;
  Vec2 target{0.0, 0.0};

  RopeMode rope_mode = RopeMode::elastic_fcd;
  std::uint64_t seed = 0;
  double duration_s = 120.0;
  double goal_tolerance = 0.3;

  HumanParams human_true;
  std::optional<HumanParams> human_estimated;  // defaults to a calibration fit
  bool calibrate = true;

  RopeState rope;
  MotorState motor;
  PlannerConfig planner;
  PathPlannerConfig path;
  NoiseConfig noise;
  RobotGeometry geometry;
  RateConfig rates;

  double direction_jitter = 1.0 * M_PI / 180.0;  // rad, per plant step
  double force_meas_noise = 0.2;                 // N
  Vec5 initial_cov_diag{0.25, 0.25, 0.04, 0.04, 0.03};
  double planner_failure_grace = 1.0;  // s of holding the last plan
};

RopeMode rope_mode_from_string(const std::string& s);
std::string to_string(RopeMode mode);

/// Loads a scenario JSON document. Relative map paths resolve against the
/// document's directory. overrides are dotted-path assignments such as
/// "rope.k=80" applied onto the JSON before parsing.
ScenarioConfig load_scenario_file(const std::string& path,
                                  const std::vector<std::string>& overrides = {});
ScenarioConfig load_scenario_text(const std::string& json_text, const std::string& base_dir,
                                  const std::vector<std::string>& overrides = {});

}  // namespace guidesim

#endif  // GUIDESIM_SCENARIO_HPP

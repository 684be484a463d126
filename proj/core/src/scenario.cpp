#include "guidesim/scenario.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace guidesim {

using nlohmann::json;

RopeMode rope_mode_from_string(const std::string& s) {
  if (s == "inelastic") return RopeMode::inelastic;
  if (s == "elastic") return RopeMode::elastic;
  if (s == "elastic_fcd") return RopeMode::elastic_fcd;
  throw ConfigError("unknown rope mode '" + s + "' (inelastic|elastic|elastic_fcd)");
}

std::string to_string(RopeMode mode) {
  switch (mode) {
    case RopeMode::inelastic: return "inelastic";
    case RopeMode::elastic: return "elastic";
    case RopeMode::elastic_fcd: return "elastic_fcd";
  }
  return "unknown";
}

namespace {

constexpr double kDeg = M_PI / 180.0;

Vec2 vec2_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be key.path=value: " + assignment);
  }
  std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  for (char& c : path) {
    if (c == '.') c = '/';
  }
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare strings are fine
  }
  doc[json::json_pointer("/" + path)] = parsed;
}

HumanParams human_params_of(const json& j, HumanParams base) {
  base.alpha = j.value("alpha", base.alpha);
  base.beta = j.value("beta", base.beta);
  base.f_th = j.value("f_th", base.f_th);
  base.delta_f = j.value("delta_f", base.delta_f);
  base.t = j.value("t", base.t);
  return base;
}

}  // namespace

ScenarioConfig load_scenario_text(const std::string& json_text, const std::string& base_dir,
                                  const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    for (const auto& o : overrides) apply_override(doc, o);

    ScenarioConfig c;
    if (!doc.contains("map")) throw ConfigError("missing required key 'map'");
    std::filesystem::path map_path = doc["map"].get<std::string>();
    if (map_path.is_relative() && !base_dir.empty()) {
      map_path = std::filesystem::path(base_dir) / map_path;
    }
    c.map_path = map_path.string();
    try {
      c.map = load_map_file(c.map_path);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("map: ") + e.what());
    }

    c.human_start = vec2_of(doc.at("human_start"), "human_start");
    c.robot_start = vec2_of(doc.at("robot_start"), "robot_start");
    c.robot_yaw = doc.value("robot_yaw", 0.0);
    c.human_heading = doc.value("human_heading", c.robot_yaw);
    c.target = vec2_of(doc.at("target"), "target");
    c.rope_mode = rope_mode_from_string(doc.value("mode", "elastic_fcd"));
    c.seed = doc.value("seed", 0ULL);
    c.duration_s = doc.value("duration_s", 120.0);
    c.goal_tolerance = doc.value("goal_tolerance", 0.3);
    c.calibrate = doc.value("calibrate", true);

    if (doc.contains("human_params")) c.human_true = human_params_of(doc["human_params"], {});
    if (doc.contains("estimated_human_params")) {
      c.human_estimated = human_params_of(doc["estimated_human_params"], c.human_true);
    }

    if (doc.contains("rope")) {
      const json& r = doc["rope"];
      c.rope.stiffness = r.value("k", c.rope.stiffness);
      c.rope.natural_length = r.value("l0", c.rope.natural_length);
      c.rope.payout = r.value("payout", c.rope.payout);
      c.rope.payout_max = r.value("payout_max", c.rope.payout_max);
      c.rope.rigid_stiffness = r.value("k_rigid", c.rope.rigid_stiffness);
      c.motor.max_rate = r.value("rate_max", c.motor.max_rate);
    }
    if (doc.contains("pid")) {
      const json& p = doc["pid"];
      c.motor.kp = p.value("kp", c.motor.kp);
      c.motor.ki = p.value("ki", c.motor.ki);
      c.motor.kd = p.value("kd", c.motor.kd);
    }

    if (doc.contains("planner")) {
      const json& p = doc["planner"];
      c.planner.horizon_n = p.value("n", c.planner.horizon_n);
      c.planner.horizon_m = p.value("m", c.planner.horizon_m);
      c.planner.f_min = p.value("f_min", c.planner.f_min);
      c.planner.f_max = p.value("f_max", c.planner.f_max);
      c.planner.l_min = p.value("l_min", c.planner.l_min);
      c.planner.l_max = p.value("l_max", c.planner.l_max);
      c.planner.phi_f = p.value("phi_f_deg", c.planner.phi_f / kDeg) * kDeg;
      c.planner.phi_theta = p.value("phi_theta_deg", c.planner.phi_theta / kDeg) * kDeg;
      c.planner.safety_margin = p.value("d_s", c.planner.safety_margin);
      c.planner.w_yaw_change = p.value("w_yaw_change", c.planner.w_yaw_change);
      c.planner.w_rope = p.value("w_rope", c.planner.w_rope);
      c.planner.hold_force = p.value("hold_force", c.planner.hold_force);
      c.planner.obstacle_prune_radius =
          p.value("obstacle_prune_radius", c.planner.obstacle_prune_radius);
      if (p.contains("q_track")) {
        const double v = p["q_track"].get<double>();
        c.planner.q_track = Eigen::Vector2d(v, v).asDiagonal();
      }
      if (p.contains("q_terminal")) {
        const double v = p["q_terminal"].get<double>();
        c.planner.q_terminal = Eigen::Vector2d(v, v).asDiagonal();
      }
      if (p.contains("q_force")) {
        const double v = p["q_force"].get<double>();
        c.planner.q_force = Eigen::Vector2d(v, v).asDiagonal();
      }
      if (p.contains("discount")) {
        const json& d = p["discount"];
        c.planner.discount = Vec3(d[0].get<double>(), d[1].get<double>(), d[2].get<double>());
      }
      c.path.safety_margin = c.planner.safety_margin;
      c.path.rope_length_nominal = 0.5 * (c.planner.l_min + c.planner.l_max);
    }
    if (doc.contains("path")) {
      const json& p = doc["path"];
      c.path.step_length = p.value("step_length", c.path.step_length);
      c.path.goal_tolerance = p.value("goal_tolerance", c.path.goal_tolerance);
      c.path.heading_weight = p.value("heading_weight", c.path.heading_weight);
      c.path.position_quantum = p.value("position_quantum", c.path.position_quantum);
    }
    c.planner.stiffness = c.rope.stiffness;

    if (doc.contains("noise")) {
      const json& n = doc["noise"];
      const double sl = n.value("sigma_l", 0.05);
      const double sphi = n.value("sigma_phi_deg", 2.0) * kDeg;
      const double sxy = n.value("sigma_s_xy", 0.03);
      const double sth = n.value("sigma_s_theta_deg", 1.0) * kDeg;
      c.noise.obs_var << sl * sl, sphi * sphi, sxy * sxy, sxy * sxy, sth * sth;
      const double pf = n.value("sigma_f_xh", 0.01);
      const double pxy = n.value("sigma_x", 0.02);
      const double pth = n.value("sigma_theta_deg", 1.0) * kDeg;
      c.noise.process_var << pf * pf, pf * pf, pxy * pxy, pxy * pxy, pth * pth;
      c.direction_jitter = n.value("direction_jitter_deg", 1.0) * kDeg;
      c.force_meas_noise = n.value("force_meas", 0.2);
    }

    if (doc.contains("camera")) {
      const json& cam = doc["camera"];
      c.noise.human_height = cam.value("human_height", c.noise.human_height);
      c.noise.camera_height = cam.value("camera_height", c.noise.camera_height);
      c.noise.camera_inclination =
          cam.value("inclination_deg", c.noise.camera_inclination / kDeg) * kDeg;
    }

    if (doc.contains("rates")) {
      const json& r = doc["rates"];
      c.rates.plant_hz = r.value("plant_hz", c.rates.plant_hz);
      c.rates.device_hz = r.value("device_hz", c.rates.device_hz);
      c.rates.estimator_hz = r.value("estimator_hz", c.rates.estimator_hz);
      c.rates.robot_mpc_hz = r.value("robot_mpc_hz", c.rates.robot_mpc_hz);
      c.rates.human_planner_hz = r.value("human_planner_hz", c.rates.human_planner_hz);
      c.rates.log_hz = r.value("log_hz", c.rates.log_hz);
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ScenarioConfig load_scenario_file(const std::string& path,
                                  const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str(), std::filesystem::path(path).parent_path().string(),
                            overrides);
}

}  // namespace guidesim

#include "guidesim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace guidesim {

Vec2 human_plant_step(const Vec2& human, const ForceCommand& force, HumanMode q,
                      const HumanParams& params, double dt, double direction_jitter_std,
                      std::mt19937_64& rng) {
  if (q == HumanMode::standing) return human;
  const double speed = walking_speed(force.magnitude(), params);
  Vec2 dir = force.direction();
  if (direction_jitter_std > 0.0) {
    std::normal_distribution<double> gauss(0.0, direction_jitter_std);
    const double a = gauss(rng);
    const double c = std::cos(a), s = std::sin(a);
    dir = Vec2(c * dir.x() - s * dir.y(), s * dir.x() + c * dir.y());
  }
  return human + speed * dir * dt;
}

Vec3 robot_plant_step(const Vec3& pose, const Vec3& u, HumanMode q, const Vec3& discount,
                      double dt) {
  const Eigen::Matrix3d d = q == HumanMode::walking ? Eigen::Matrix3d(discount.asDiagonal())
                                                    : Eigen::Matrix3d::Identity();
  Eigen::Matrix3d rz;
  const double c = std::cos(pose(2)), s = std::sin(pose(2));
  rz << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  Vec3 next = pose + d * rz * u * dt;
  next(2) = wrap_angle(next(2));
  return next;
}

HumanModeMachine::HumanModeMachine(HumanMode q0, const HumanParams& params,
                                   double filter_cutoff_hz)
    : params_(params), mode_(q0), cutoff_hz_(filter_cutoff_hz) {}

HumanMode HumanModeMachine::step(double force_magnitude, double dt) {
  if (!filter_init_) {
    filtered_ = force_magnitude;
    force_at_eval_ = force_magnitude;
    filter_init_ = true;
  } else {
    const double rc = 1.0 / (2.0 * M_PI * cutoff_hz_);
    filtered_ += dt / (rc + dt) * (force_magnitude - filtered_);
  }
  since_eval_ += dt;
  if (since_eval_ + 1e-12 >= params_.t) {
    mode_ = mode_transition(mode_, force_at_eval_, filtered_, params_);
    force_at_eval_ = filtered_;
    since_eval_ = 0.0;
  }
  return mode_;
}

FitResult calibrate_human_params(const ScenarioConfig& config, std::mt19937_64& rng,
                                 HumanParams& est) {
  const HumanParams& truth = config.human_true;
  const RobotGeometry& geom = config.geometry;
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Straight pull in open space, force control disabled.
  RopeState rope = config.rope;
  rope.mode = RopeMode::elastic;
  rope.payout = 0.0;

  Vec2 human(0.0, 0.0);
  Vec3 robot(rope.natural_length + geom.fixed_point_offset + 0.05, 0.0, 0.0);
  HumanModeMachine machine(HumanMode::standing, truth);

  const double dt = 1.0 / config.rates.plant_hz;
  const double sample_dt = 0.05;  // 20 Hz
  const double accel = 0.05;      // m/s^2 of the pulling robot
  const double sigma_v = 0.02;

  std::vector<std::pair<double, double>> samples;
  Vec2 human_at_sample = human;
  double since_sample = 0.0;
  double t = 0.0;
  while (t < 60.0) {
    const Vec2 fixed = geom.fixed_point(robot.head<2>(), robot(2));
    const ForceCommand f = rope_force(human, fixed, rope);
    if (f.magnitude() > 0.9 * config.planner.f_max && t > 5.0) break;

    const HumanMode q = machine.step(f.magnitude(), dt);
    human = human_plant_step(human, f, q, truth, dt, 0.0, rng);
    robot(0) += accel * t * dt;

    since_sample += dt;
    if (since_sample + 1e-12 >= sample_dt) {
      const double v = (human - human_at_sample).norm() / since_sample;
      if (q == HumanMode::walking) {
        samples.emplace_back(f.magnitude() + config.force_meas_noise * gauss(rng),
                             v + sigma_v * gauss(rng));
      }
      human_at_sample = human;
      since_sample = 0.0;
    }
    t += dt;
  }

  const FitResult fit = fit_params(samples, 2.0, 1.0 / sample_dt);
  est = truth;
  est.alpha = fit.alpha;
  est.beta = fit.beta;
  return fit;
}

namespace {

// Arc-length resampling of the waypoint polyline, starting at the
// projection of the current position.
std::vector<Vec2> resample_reference(const std::vector<PathNode>& waypoints, const Vec2& from,
                                     int count, double ds) {
  std::vector<Vec2> out;
  out.reserve(static_cast<size_t>(count));
  if (waypoints.empty()) return out;
  if (waypoints.size() == 1) {
    out.assign(static_cast<size_t>(count), waypoints[0].position);
    return out;
  }

  // Nearest point on the polyline.
  size_t best_seg = 0;
  double best_u = 0.0, best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Vec2& a = waypoints[i].position;
    const Vec2& b = waypoints[i + 1].position;
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0.0 ? std::clamp((from - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (from - (a + u * ab)).norm();
    if (d < best_d) {
      best_d = d;
      best_seg = i;
      best_u = u;
    }
  }

  size_t seg = best_seg;
  double u = best_u;
  Vec2 point = waypoints[seg].position +
               u * (waypoints[seg + 1].position - waypoints[seg].position);
  out.push_back(point);
  for (int k = 1; k < count; ++k) {
    double remaining = ds;
    while (remaining > 0.0 && seg + 1 < waypoints.size()) {
      const Vec2& a = waypoints[seg].position;
      const Vec2& b = waypoints[seg + 1].position;
      const double seg_len = (b - a).norm();
      const double left = (1.0 - u) * seg_len;
      if (left > remaining) {
        u += remaining / seg_len;
        remaining = 0.0;
      } else {
        remaining -= left;
        ++seg;
        u = 0.0;
      }
    }
    if (seg + 1 >= waypoints.size()) {
      out.push_back(waypoints.back().position);
      continue;
    }
    out.push_back(waypoints[seg].position +
                  u * (waypoints[seg + 1].position - waypoints[seg].position));
  }
  return out;
}

double distance_to_polyline(const std::vector<PathNode>& waypoints, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Vec2& a = waypoints[i].position;
    const Vec2& b = waypoints[i + 1].position;
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (a + u * ab)).norm());
  }
  if (waypoints.size() == 1) best = (p - waypoints[0].position).norm();
  return best;
}

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        rng_(cfg.seed),
        collision_index_(obstacles_from_map(cfg.map)),
        planner_obstacles_(boundary_obstacles(cfg.map)),
        machine_(HumanMode::standing, cfg.human_true),
        rope_(cfg.rope),
        motor_(cfg.motor) {
    rope_.mode = cfg.rope_mode;
    human_ = cfg.human_start;
    robot_ << cfg.robot_start.x(), cfg.robot_start.y(), wrap_angle(cfg.robot_yaw);
  }

  RunResult run() {
    RunResult result;
    resolve_estimated_params(result);
    init_belief();

    const double dtp = 1.0 / cfg_.rates.plant_hz;
    const auto divisor = [&](double hz) {
      const double d = cfg_.rates.plant_hz / hz;
      const auto n = static_cast<long>(std::llround(d));
      if (n < 1 || std::abs(d - static_cast<double>(n)) > 1e-9) {
        throw ConfigError("loop rate " + std::to_string(hz) + " Hz must divide the plant rate");
      }
      return n;
    };
    const long div_device = divisor(cfg_.rates.device_hz);
    const long div_est = divisor(cfg_.rates.estimator_hz);
    const long div_robot = divisor(cfg_.rates.robot_mpc_hz);
    const long div_planner = divisor(cfg_.rates.human_planner_hz);
    const long div_log = divisor(cfg_.rates.log_hz);

    result.log.sample_period = dtp * static_cast<double>(div_log);
    const long max_ticks = static_cast<long>(std::llround(cfg_.duration_s / dtp));

    RunStatus status = RunStatus::timeout;
    std::string event;
    for (long n = 0; n <= max_ticks; ++n) {
      const double t = static_cast<double>(n) * dtp;

      if ((human_ - cfg_.target).norm() <= cfg_.goal_tolerance) {
        status = RunStatus::reached;
        event = "reached";
        log_row(result, t, event);
        break;
      }
      if (in_collision()) {
        status = RunStatus::collision;
        event = "collision";
        log_row(result, t, event);
        break;
      }
      if (n == max_ticks) {
        log_row(result, t, "timeout");
        break;
      }

      event.clear();
      if (n % div_planner == 0) {
        if (!run_stage1(t, event)) {
          if (failure_since_ && t - *failure_since_ >= cfg_.planner_failure_grace) {
            status = RunStatus::planner_failure;
            log_row(result, t, "planner_failure");
            break;
          }
        }
      }
      if (n % div_robot == 0) run_stage2(t);
      if (n % div_est == 0) run_estimator(result, t, dtp * static_cast<double>(div_est));
      if (n % div_device == 0) run_device(t, dtp * static_cast<double>(div_device));
      if (n % div_log == 0) log_row(result, t, event);

      plant_step(dtp);
    }

    result.status = status;
    result.log.status = status;
    result.sim_time = result.log.rows.empty() ? 0.0 : result.log.rows.back().t;
    return result;
  }

 private:
  void resolve_estimated_params(RunResult& result) {
    if (cfg_.human_estimated) {
      params_est_ = *cfg_.human_estimated;
    } else if (cfg_.calibrate) {
      result.calibration = calibrate_human_params(cfg_, rng_, params_est_);
      result.calibrated = true;
      // Walking-direction process noise from the identification residual.
      const double sigma = std::max(result.calibration.residual_rms, 1e-3);
      noise_ = cfg_.noise;
      noise_.process_var(0) = sigma * sigma;
      noise_.process_var(1) = sigma * sigma;
    } else {
      params_est_ = cfg_.human_true;
    }
    if (cfg_.human_estimated || !cfg_.calibrate) noise_ = cfg_.noise;
    result.estimated_params = params_est_;
  }

  void init_belief() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec5 truth;
    truth << human_.x(), human_.y(), robot_(0), robot_(1), robot_(2);
    belief_.mean = truth;
    for (int i = 0; i < 5; ++i) {
      belief_.mean(i) += std::sqrt(cfg_.initial_cov_diag(i)) * gauss(rng_);
    }
    belief_.mean(4) = wrap_angle(belief_.mean(4));
    belief_.covariance = cfg_.initial_cov_diag.asDiagonal();
  }

  bool in_collision() const {
    if (!collision_index_.clearance_at_least(human_, cfg_.geometry.human_radius)) return true;
    for (const Vec2& c : cfg_.geometry.cover_centers(robot_.head<2>(), robot_(2))) {
      if (!collision_index_.clearance_at_least(c, cfg_.geometry.cover_radius)) return true;
    }
    return false;
  }

  SystemState estimate() const {
    SystemState s = SystemState::from_vector(belief_.mean);
    return s;
  }

  Vec2 planned_force_at(double t) const {
    if (!have_plan_) return Vec2::Zero();
    const auto& f = plan_.forces;
    const double tau = std::max(0.0, t - plan_time_);
    const double idx = tau / params_est_.t;
    const auto i0 = static_cast<size_t>(
        std::clamp(std::floor(idx), 0.0, static_cast<double>(f.size() - 1)));
    const size_t i1 = std::min(i0 + 1, f.size() - 1);
    const double frac = std::clamp(idx - static_cast<double>(i0), 0.0, 1.0);
    const Vec2 vec = (1.0 - frac) * f[i0] + frac * f[i1];
    const double mag = (1.0 - frac) * f[i0].norm() + frac * f[i1].norm();
    const double n = vec.norm();
    return n > 1e-9 ? Vec2(mag * vec / n) : vec;
  }

  HumanMode planned_mode_at(double t) const {
    if (!have_plan_ || plan_.modes.empty()) return HumanMode::standing;
    const double tau = std::max(0.0, t - plan_time_);
    const auto idx = static_cast<size_t>(std::clamp(
        std::floor(tau / params_est_.t), 0.0, static_cast<double>(plan_.modes.size() - 1)));
    return plan_.modes[idx];
  }

  bool run_stage1(double t, std::string& event) {
    const SystemState est = estimate();
    const HumanMode q_cmd = have_plan_ ? planned_mode_at(t) : HumanMode::standing;

    if (!have_path_ || distance_to_polyline(path_.waypoints, est.human) > 0.8) {
      Vec2 to_anchor = geometry_fixed_point(est) - est.human;
      Vec2 planned = planned_force_at(t);
      const Vec2 dir = planned.norm() > 1e-9 ? planned : to_anchor;
      const double heading =
          dir.norm() > 1e-9 ? std::atan2(dir.y(), dir.x()) : est.yaw;
      try {
        path_ = plan_path(cfg_.map, {est.human, heading}, cfg_.target, cfg_.geometry, cfg_.path);
        have_path_ = true;
        event = "replan_path";
      } catch (const std::exception&) {
        note_failure(t);
        return false;
      }
    }

    const double v_ref = std::max(
        0.05, walking_speed(0.6 * cfg_.planner.f_max, params_est_));
    const auto ref = resample_reference(path_.waypoints, est.human, cfg_.planner.horizon_n + 1,
                                        v_ref * params_est_.t);
    try {
      plan_ = plan_forces(est, q_cmd, ref, ref.back(), planner_obstacles_, params_est_,
                          cfg_.geometry, cfg_.planner, have_plan_ ? &plan_ : nullptr);
    } catch (const std::exception&) {
      note_failure(t);
      return false;
    }
    plan_time_ = t;
    have_plan_ = true;
    failure_since_.reset();
    return true;
  }

  Vec2 geometry_fixed_point(const SystemState& s) const {
    return cfg_.geometry.fixed_point(s.robot, s.yaw);
  }

  void note_failure(double t) {
    if (!failure_since_) failure_since_ = t;
  }

  void run_stage2(double t) {
    if (!have_plan_) {
      command_.setZero();
      return;
    }
    const SystemState est = estimate();
    const RobotRefTrajectory ref =
        reconstruct_reference(est, planned_mode_at(t), plan_, params_est_, cfg_.geometry);
    const RobotPlanResult res = plan_velocity(est, ref, 0.0, planner_obstacles_, cfg_.planner,
                                              cfg_.geometry, have_robot_plan_ ? &robot_plan_ : nullptr);
    robot_plan_ = res;
    have_robot_plan_ = true;
    command_ = res.commands.empty() ? Vec3::Zero() : res.commands.front();
  }

  void run_estimator(RunResult& result, double t, double dt) {
    const ForceCommand f{planned_force_at(t)};
    belief_ = ukf_predict(belief_, f, command_, planned_mode_at(t), params_est_,
                          cfg_.planner.discount, noise_, dt);
    SystemState truth;
    truth.human = human_;
    truth.robot = robot_.head<2>();
    truth.yaw = robot_(2);
    const Observation obs = synthesize_observation(truth, cfg_.geometry, noise_, rng_);
    belief_ = ukf_update(belief_, obs, cfg_.geometry, noise_);

    BeliefRow row;
    row.t = t;
    row.mean = belief_.mean;
    row.trace = belief_.covariance.trace();
    row.eig_min =
        Eigen::SelfAdjointEigenSolver<Mat5>(belief_.covariance).eigenvalues().minCoeff();
    result.belief_trace.push_back(row);
  }

  void run_device(double t, double dt) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Vec2 fixed = cfg_.geometry.fixed_point(robot_.head<2>(), robot_(2));
    const double f_ref = planned_force_at(t).norm();
    const double noise =
        cfg_.force_meas_noise > 0.0 ? cfg_.force_meas_noise * gauss(rng_) : 0.0;
    const DeviceResult res = device_step(human_, fixed, rope_, motor_, f_ref, dt, noise);
    rope_ = res.rope;
    motor_ = res.motor;
  }

  void plant_step(double dt) {
    const Vec2 fixed = cfg_.geometry.fixed_point(robot_.head<2>(), robot_(2));
    const ForceCommand f = rope_force(human_, fixed, rope_);
    const HumanMode q = machine_.step(f.magnitude(), dt);
    human_ = human_plant_step(human_, f, q, cfg_.human_true, dt, cfg_.direction_jitter, rng_);
    robot_ = robot_plant_step(robot_, command_, q, cfg_.planner.discount, dt);
  }

  void log_row(RunResult& result, double t, const std::string& event) {
    const Vec2 fixed = cfg_.geometry.fixed_point(robot_.head<2>(), robot_(2));
    const ForceCommand f = rope_force(human_, fixed, rope_);
    LogRow row;
    row.t = t;
    row.human = human_;
    row.robot = robot_.head<2>();
    row.yaw = robot_(2);
    row.q = mode_value(machine_.mode());
    row.force = f.force;
    row.force_ref = planned_force_at(t).norm();
    row.rope_vector_length = (fixed - human_).norm();
    row.payout = rope_.payout;
    row.command = command_;
    row.belief_mean = belief_.mean;
    row.cov_trace = belief_.covariance.trace();
    row.event = event;
    row.planned_force = planned_force_at(t);
    row.planned_q = mode_value(planned_mode_at(t));
    result.log.rows.push_back(std::move(row));
  }

  const ScenarioConfig& cfg_;
  std::mt19937_64 rng_;
  ObstacleIndex collision_index_;
  std::vector<Obstacle> planner_obstacles_;

  Vec2 human_;
  Vec3 robot_;
  HumanModeMachine machine_;
  RopeState rope_;
  MotorState motor_;

  HumanParams params_est_;
  NoiseConfig noise_;
  Belief belief_;

  PlannedPath path_;
  bool have_path_ = false;
  HumanPlanSolution plan_;
  bool have_plan_ = false;
  double plan_time_ = 0.0;
  RobotPlanResult robot_plan_;
  bool have_robot_plan_ = false;
  Vec3 command_ = Vec3::Zero();
  std::optional<double> failure_since_;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  Simulation sim(config);
  return sim.run();
}

}  // namespace guidesim

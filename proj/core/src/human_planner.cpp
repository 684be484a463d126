#include "guidesim/human_planner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace guidesim {

namespace {

constexpr double kNormFloor = 1e-9;

// Single-shooting evaluation of problem (4) for a frozen mode sequence.
// Decision layout: [Fx_0, Fy_0, ..., Fx_{N-1}, Fy_{N-1} | l_0..l_{N-1} | th_0..th_{N-1}].
class StageOneProblem {
 public:
  StageOneProblem(const SystemState& state, std::vector<HumanMode> modes,
                  std::vector<Vec2> reference, Vec2 target, std::vector<Obstacle> obstacles,
                  const HumanParams& params, const RobotGeometry& geom,
                  const PlannerConfig& cfg)
      : state_(state),
        modes_(std::move(modes)),
        ref_(std::move(reference)),
        target_(std::move(target)),
        obstacles_(std::move(obstacles)),
        params_(params),
        geom_(geom),
        cfg_(cfg),
        n_steps_(cfg.horizon_n),
        dim_(4 * cfg.horizon_n) {
    human_.resize(n_steps_ + 1);
    robot_.resize(n_steps_ + 1);
    sens_human_.assign(n_steps_ + 1, MatX::Zero(2, dim_));
    sens_robot_.assign(n_steps_ + 1, MatX::Zero(2, dim_));
    mag_.resize(n_steps_);
    dir_.resize(n_steps_);
    speed_.resize(n_steps_);
    speed_slope_.resize(n_steps_);
  }

  int dimension() const { return dim_; }
  int fx(int k) const { return 2 * k; }
  int fl(int k) const { return 2 * n_steps_ + k; }
  int fth(int k) const { return 3 * n_steps_ + k; }

  int num_constraints() const {
    return 3 * n_steps_ + (n_steps_ - 1) +
           3 * static_cast<int>(obstacles_.size()) * n_steps_;
  }

  double objective(const VecX& z, VecX* grad) {
    roll(z);
    const int N = n_steps_;
    double j = 0.0;
    if (grad) grad->setZero();

    const Vec2 terminal = human_[N] - target_;
    j += terminal.dot(cfg_.q_terminal * terminal);
    if (grad) grad->noalias() += 2.0 * sens_human_[N].transpose() * (cfg_.q_terminal * terminal);

    for (int k = 0; k < N; ++k) {
      const Vec2 track = human_[k] - ref_[static_cast<size_t>(k)];
      j += track.dot(cfg_.q_track * track);
      if (grad && k > 0) {
        grad->noalias() += 2.0 * sens_human_[k].transpose() * (cfg_.q_track * track);
      }
    }

    for (int k = 0; k + 1 < N; ++k) {
      const Vec2 df(z(fx(k + 1)) - z(fx(k)), z(fx(k + 1) + 1) - z(fx(k) + 1));
      j += df.dot(cfg_.q_force * df);

      const double dth = z(fth(k + 1)) - z(fth(k));
      j += cfg_.w_yaw_change * (1.0 - std::cos(dth));

      const double resid =
          cfg_.stiffness * (z(fl(k + 1)) - z(fl(k))) - (mag_[k + 1] - mag_[k]);
      j += cfg_.w_rope * resid * resid;

      if (grad) {
        const Vec2 dq = 2.0 * (cfg_.q_force * df);
        (*grad)(fx(k + 1)) += dq.x();
        (*grad)(fx(k + 1) + 1) += dq.y();
        (*grad)(fx(k)) -= dq.x();
        (*grad)(fx(k) + 1) -= dq.y();

        const double s = cfg_.w_yaw_change * std::sin(dth);
        (*grad)(fth(k + 1)) += s;
        (*grad)(fth(k)) -= s;

        const double c = 2.0 * cfg_.w_rope * resid;
        (*grad)(fl(k + 1)) += c * cfg_.stiffness;
        (*grad)(fl(k)) -= c * cfg_.stiffness;
        (*grad)(fx(k + 1)) -= c * dir_[k + 1].x();
        (*grad)(fx(k + 1) + 1) -= c * dir_[k + 1].y();
        (*grad)(fx(k)) += c * dir_[k].x();
        (*grad)(fx(k) + 1) += c * dir_[k].y();
      }
    }
    return j;
  }

  void constraints(const VecX& z, VecX& g, MatX* jac) {
    roll(z);
    const int N = n_steps_;
    if (jac) jac->setZero();
    int row = 0;

    for (int k = 0; k < N; ++k) {
      const Vec2 f(z(fx(k)), z(fx(k) + 1));
      const double m2 = f.squaredNorm();
      g(row) = cfg_.f_min * cfg_.f_min - m2;
      if (jac) {
        (*jac)(row, fx(k)) = -2.0 * f.x();
        (*jac)(row, fx(k) + 1) = -2.0 * f.y();
      }
      ++row;
      g(row) = m2 - cfg_.f_max * cfg_.f_max;
      if (jac) {
        (*jac)(row, fx(k)) = 2.0 * f.x();
        (*jac)(row, fx(k) + 1) = 2.0 * f.y();
      }
      ++row;

      // Force within phi_theta of the yaw heading.
      const double th = z(fth(k));
      const Vec2 e_th = heading_vector(th);
      g(row) = std::cos(cfg_.phi_theta) - dir_[k].dot(e_th);
      if (jac) {
        const Vec2 dd = dir_derivative(k, e_th);
        (*jac)(row, fx(k)) = -dd.x();
        (*jac)(row, fx(k) + 1) = -dd.y();
        (*jac)(row, fth(k)) = -dir_[k].dot(heading_normal(th));
      }
      ++row;
    }

    for (int k = 0; k + 1 < N; ++k) {
      g(row) = std::cos(cfg_.phi_f) - dir_[k + 1].dot(dir_[k]);
      if (jac) {
        const Vec2 da = dir_derivative(k, dir_[k + 1]);
        (*jac)(row, fx(k)) = -da.x();
        (*jac)(row, fx(k) + 1) = -da.y();
        const Vec2 db = dir_derivative(k + 1, dir_[k]);
        (*jac)(row, fx(k + 1)) = -db.x();
        (*jac)(row, fx(k + 1) + 1) = -db.y();
      }
      ++row;
    }

    for (int k = 1; k <= N; ++k) {
      for (const Obstacle& o : obstacles_) {
        // Human cover circle.
        {
          const Vec2 d = human_[k] - o.center;
          const double dist = std::max(d.norm(), kNormFloor);
          g(row) = (cfg_.safety_margin + geom_.human_radius + o.radius) - dist;
          if (jac) jac->row(row).noalias() = -(d / dist).transpose() * sens_human_[k];
          ++row;
        }
        // Robot cover circles, oriented by the yaw that placed x^d_k.
        const double th = z(fth(k - 1));
        const Vec2 e_th = heading_vector(th);
        const Vec2 e_n = heading_normal(th);
        for (double off : geom_.cover_offsets) {
          const Vec2 center = robot_[k] + off * e_th;
          const Vec2 d = center - o.center;
          const double dist = std::max(d.norm(), kNormFloor);
          g(row) = (cfg_.safety_margin + geom_.cover_radius + o.radius) - dist;
          if (jac) {
            jac->row(row).noalias() = -(d / dist).transpose() * sens_robot_[k];
            (*jac)(row, fth(k - 1)) -= (d / dist).dot(off * e_n);
          }
          ++row;
        }
      }
    }
  }

  // Exact rollout shared with the public solution struct.
  void roll(const VecX& z) {
    if (cached_z_.size() == z.size() && cached_z_ == z) return;
    cached_z_ = z;
    const int N = n_steps_;
    human_[0] = state_.human;
    robot_[0] = state_.robot;
    sens_human_[0].setZero();
    sens_robot_[0].setZero();

    for (int k = 0; k < N; ++k) {
      const Vec2 f(z(fx(k)), z(fx(k) + 1));
      const double m = f.norm();
      const double m_safe = std::max(m, kNormFloor);
      mag_[k] = m;
      dir_[k] = f / m_safe;
      const double raw = params_.alpha * m + params_.beta;
      const bool active = raw > 0.0;
      speed_[k] = active ? raw : 0.0;
      speed_slope_[k] = active ? params_.alpha : 0.0;

      const double q = static_cast<double>(mode_value(modes_[static_cast<size_t>(k)]));
      human_[k + 1] = human_[k] + q * params_.t * speed_[k] * dir_[k];

      sens_human_[k + 1] = sens_human_[k];
      if (q > 0.0) {
        const Eigen::Matrix2d uu = dir_[k] * dir_[k].transpose();
        const Eigen::Matrix2d dvu = speed_slope_[k] * uu +
                                    (speed_[k] / m_safe) * (Eigen::Matrix2d::Identity() - uu);
        sens_human_[k + 1].block<2, 2>(0, fx(k)).noalias() += params_.t * dvu;
      }

      const double th = z(fth(k));
      robot_[k + 1] = human_[k + 1] + z(fl(k)) * dir_[k] +
                      geom_.fixed_point_offset * heading_vector(th);
      sens_robot_[k + 1] = sens_human_[k + 1];
      const Eigen::Matrix2d uu = dir_[k] * dir_[k].transpose();
      sens_robot_[k + 1].block<2, 2>(0, fx(k)).noalias() +=
          z(fl(k)) / m_safe * (Eigen::Matrix2d::Identity() - uu);
      sens_robot_[k + 1].col(fl(k)) += dir_[k];
      sens_robot_[k + 1].col(fth(k)) += geom_.fixed_point_offset * heading_normal(th);
    }
  }

  const std::vector<Vec2>& human_path() const { return human_; }
  const std::vector<Vec2>& robot_path() const { return robot_; }
  const std::vector<HumanMode>& modes() const { return modes_; }

 private:
  // d(u_k)/dF_k applied to a fixed vector w: ((I - u u^T)/m) w.
  Vec2 dir_derivative(int k, const Vec2& w) const {
    const double m_safe = std::max(mag_[k], kNormFloor);
    return (w - dir_[k] * dir_[k].dot(w)) / m_safe;
  }

  SystemState state_;
  std::vector<HumanMode> modes_;
  std::vector<Vec2> ref_;
  Vec2 target_;
  std::vector<Obstacle> obstacles_;
  HumanParams params_;
  RobotGeometry geom_;
  PlannerConfig cfg_;
  int n_steps_;
  int dim_;

  VecX cached_z_;
  std::vector<Vec2> human_, robot_;
  std::vector<MatX> sens_human_, sens_robot_;
  std::vector<double> mag_, speed_, speed_slope_;
  std::vector<Vec2> dir_;
};

std::vector<Vec2> pad_reference(std::span<const Vec2> reference, const Vec2& target, int n) {
  std::vector<Vec2> ref(reference.begin(), reference.end());
  while (static_cast<int>(ref.size()) < n + 1) ref.push_back(target);
  return ref;
}

std::vector<Obstacle> prune_obstacles(std::span<const Obstacle> obstacles, const Vec2& center,
                                      double radius) {
  std::vector<Obstacle> out;
  for (const Obstacle& o : obstacles) {
    if ((o.center - center).norm() - o.radius <= radius) out.push_back(o);
  }
  return out;
}

std::vector<double> magnitudes_of(const VecX& z, int n) {
  std::vector<double> m(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) m[static_cast<size_t>(k)] = Vec2(z(2 * k), z(2 * k + 1)).norm();
  return m;
}

}  // namespace

std::vector<HumanMode> fix_mode_sequence(HumanMode q_curr, std::span<const double> magnitudes,
                                         const HumanParams& params) {
  std::vector<HumanMode> modes(magnitudes.size());
  if (magnitudes.empty()) return modes;
  modes[0] = q_curr;
  for (size_t k = 0; k + 1 < magnitudes.size(); ++k) {
    modes[k + 1] = mode_transition(modes[k], magnitudes[k], magnitudes[k + 1], params);
  }
  return modes;
}

NlpProblem build_human_planner_nlp(const SystemState& state, std::vector<HumanMode> modes,
                                   std::span<const Vec2> reference, const Vec2& target,
                                   std::span<const Obstacle> obstacles,
                                   const HumanParams& params, const RobotGeometry& geom,
                                   const PlannerConfig& config) {
  const int n = config.horizon_n;
  auto prob = std::make_shared<StageOneProblem>(
      state, std::move(modes), pad_reference(reference, target, n), target,
      std::vector<Obstacle>(obstacles.begin(), obstacles.end()), params, geom, config);

  NlpProblem nlp;
  nlp.dimension = prob->dimension();
  nlp.num_constraints = prob->num_constraints();
  nlp.objective = [prob](const VecX& z, VecX* grad) { return prob->objective(z, grad); };
  nlp.constraints = [prob](const VecX& z, VecX& g, MatX* jac) { prob->constraints(z, g, jac); };

  nlp.lower = VecX::Constant(nlp.dimension, -std::numeric_limits<double>::infinity());
  nlp.upper = VecX::Constant(nlp.dimension, std::numeric_limits<double>::infinity());
  for (int k = 0; k < n; ++k) {
    nlp.lower(2 * k) = -1.5 * config.f_max;
    nlp.upper(2 * k) = 1.5 * config.f_max;
    nlp.lower(2 * k + 1) = -1.5 * config.f_max;
    nlp.upper(2 * k + 1) = 1.5 * config.f_max;
    nlp.lower(2 * n + k) = config.l_min;
    nlp.upper(2 * n + k) = config.l_max;
    nlp.lower(3 * n + k) = -4.0 * M_PI;
    nlp.upper(3 * n + k) = 4.0 * M_PI;
  }
  return nlp;
}

namespace {

HumanPlanSolution make_solution(const SystemState& state, const VecX& z,
                                std::vector<HumanMode> modes, const HumanParams& params,
                                const RobotGeometry& geom, const PlannerConfig& cfg) {
  const int n = cfg.horizon_n;
  HumanPlanSolution sol;
  sol.forces.resize(static_cast<size_t>(n));
  sol.lengths.resize(static_cast<size_t>(n));
  sol.yaws.resize(static_cast<size_t>(n));
  sol.modes = std::move(modes);
  sol.human_path.resize(static_cast<size_t>(n) + 1);
  sol.robot_path.resize(static_cast<size_t>(n) + 1);
  sol.human_path[0] = state.human;
  sol.robot_path[0] = state.robot;
  for (int k = 0; k < n; ++k) {
    const Vec2 f(z(2 * k), z(2 * k + 1));
    sol.forces[static_cast<size_t>(k)] = f;
    sol.lengths[static_cast<size_t>(k)] = z(2 * n + k);
    sol.yaws[static_cast<size_t>(k)] = wrap_angle(z(3 * n + k));
    const ForceCommand cmd{f};
    sol.human_path[static_cast<size_t>(k) + 1] = human_step(
        sol.human_path[static_cast<size_t>(k)], cmd, sol.modes[static_cast<size_t>(k)], params);
    sol.robot_path[static_cast<size_t>(k) + 1] =
        robot_pose_from(sol.human_path[static_cast<size_t>(k) + 1], cmd.direction(),
                        sol.lengths[static_cast<size_t>(k)], z(3 * n + k), geom);
  }
  return sol;
}

HumanPlanSolution make_hold_plan(const SystemState& state, const HumanParams& params,
                                 const RobotGeometry& geom, const PlannerConfig& cfg) {
  const int n = cfg.horizon_n;
  const Vec2 fixed = geom.fixed_point(state.robot, state.yaw);
  Vec2 dir = fixed - state.human;
  dir = dir.norm() > kNormFloor ? Vec2(dir / dir.norm()) : heading_vector(state.yaw);
  const double l = std::clamp((fixed - state.human).norm(), cfg.l_min, cfg.l_max);

  VecX z(4 * n);
  for (int k = 0; k < n; ++k) {
    z(2 * k) = cfg.hold_force * dir.x();
    z(2 * k + 1) = cfg.hold_force * dir.y();
    z(2 * n + k) = l;
    z(3 * n + k) = state.yaw;
  }
  std::vector<double> mags(static_cast<size_t>(n), cfg.hold_force);
  // A hold keeps the force below the walking threshold, so the rolled mode
  // sequence stops after at most one step.
  auto modes = fix_mode_sequence(HumanMode::standing, mags, params);
  HumanPlanSolution sol = make_solution(state, z, std::move(modes), params, geom, cfg);
  sol.hold = true;
  sol.degraded = true;
  return sol;
}

}  // namespace

HumanPlanSolution plan_forces(const SystemState& state, HumanMode q_curr,
                              std::span<const Vec2> reference, const Vec2& target,
                              std::span<const Obstacle> obstacles, const HumanParams& params,
                              const RobotGeometry& geom, const PlannerConfig& config,
                              const HumanPlanSolution* warm) {
  const int n = config.horizon_n;
  const auto pruned = prune_obstacles(obstacles, state.human, config.obstacle_prune_radius);

  if (clearance(state.human, pruned) < geom.human_radius) {
    throw InfeasibleStateError("plan_forces: human is in collision");
  }
  for (const Vec2& c : geom.cover_centers(state.robot, state.yaw)) {
    if (clearance(c, pruned) < geom.cover_radius) {
      throw InfeasibleStateError("plan_forces: robot cover circle is in collision");
    }
  }

  const auto ref = pad_reference(reference, target, n);

  // A stop plan makes a poor seed; restart cold so walking is probed again.
  if (warm && warm->hold) warm = nullptr;

  // Seed decisions.
  VecX z(4 * n);
  if (warm && static_cast<int>(warm->forces.size()) == n) {
    for (int k = 0; k < n; ++k) {
      const int src = std::min(k + 1, n - 1);  // shift one step, repeat the tail
      z(2 * k) = warm->forces[static_cast<size_t>(src)].x();
      z(2 * k + 1) = warm->forces[static_cast<size_t>(src)].y();
      z(2 * n + k) = warm->lengths[static_cast<size_t>(src)];
      z(3 * n + k) = warm->yaws[static_cast<size_t>(src)];
    }
  } else {
    const double f_nom = 0.5 * (config.f_min + config.f_max);
    const Vec2 fixed = geom.fixed_point(state.robot, state.yaw);
    const double l0 = std::clamp((fixed - state.human).norm(), config.l_min, config.l_max);
    for (int k = 0; k < n; ++k) {
      Vec2 d = ref[static_cast<size_t>(std::min(k + 1, n))] - state.human;
      if (d.norm() < 1e-6) d = target - state.human;
      const Vec2 dir = d.norm() > 1e-6 ? Vec2(d / d.norm()) : heading_vector(state.yaw);
      z(2 * k) = f_nom * dir.x();
      z(2 * k + 1) = f_nom * dir.y();
      z(2 * n + k) = l0;
      z(3 * n + k) = std::atan2(dir.y(), dir.x());
    }
    // Keep consecutive seed yaws on the same branch for the 1-cos terms.
    for (int k = 1; k < n; ++k) {
      double prev = z(3 * n + k - 1);
      z(3 * n + k) = prev + wrap_angle(z(3 * n + k) - prev);
    }
  }

  HumanPlanSolution sol;
  std::vector<HumanMode> modes = fix_mode_sequence(q_curr, magnitudes_of(z, n), params);
  NlpSolution nlp_sol;
  int mode_iters = 0;
  bool stable = false;
  try {
    for (mode_iters = 1; mode_iters <= config.mode_iterations_max; ++mode_iters) {
      NlpProblem nlp = build_human_planner_nlp(state, modes, ref, target, pruned, params, geom,
                                               config);
      nlp.initial = z;
      nlp_sol = minimize(nlp, config.nlp_stage1);
      z = nlp_sol.point;
      auto next = fix_mode_sequence(q_curr, magnitudes_of(z, n), params);
      if (next == modes) {
        stable = true;
        break;
      }
      modes = std::move(next);
    }
  } catch (const NumericFailure&) {
    return make_hold_plan(state, params, geom, config);
  }

  // No feasible walking plan: try a parked program. The human is commanded
  // to stop (forces capped below the walking threshold) while robot length
  // and yaw stay free, so the robot can still reposition for the next
  // attempt.
  if (nlp_sol.max_violation > 1e-3) {
    PlannerConfig parked_cfg = config;
    parked_cfg.f_max = std::min(config.f_max, 0.9 * params.f_th);
    if (parked_cfg.f_min < parked_cfg.f_max) {
      const std::vector<double> parked_mags(static_cast<size_t>(n),
                                            std::min(config.hold_force, parked_cfg.f_max));
      auto parked_modes = fix_mode_sequence(q_curr, parked_mags, params);
      VecX zp = z;
      for (int k = 0; k < n; ++k) {
        const Vec2 f(zp(2 * k), zp(2 * k + 1));
        const double m = std::max(f.norm(), kNormFloor);
        const double target_mag = parked_mags[static_cast<size_t>(k)];
        zp(2 * k) = target_mag * f.x() / m;
        zp(2 * k + 1) = target_mag * f.y() / m;
      }
      try {
        NlpProblem nlp = build_human_planner_nlp(state, parked_modes, ref, target, pruned,
                                                 params, geom, parked_cfg);
        nlp.initial = zp;
        const NlpSolution parked = minimize(nlp, config.nlp_stage1);
        if (parked.max_violation <= 1e-3) {
          sol = make_solution(state, parked.point, parked_modes, params, geom, config);
          sol.hold = true;
          sol.degraded = !parked.converged;
          sol.converged = parked.converged;
          sol.modes_stable = true;
          sol.objective = parked.objective;
          sol.max_violation = parked.max_violation;
          sol.outer_iterations = parked.outer_iterations;
          sol.mode_iterations = mode_iters;
          return sol;
        }
      } catch (const NumericFailure&) {
      }
    }
    return make_hold_plan(state, params, geom, config);
  }

  sol = make_solution(state, z, modes, params, geom, config);
  sol.converged = nlp_sol.converged && stable;
  sol.modes_stable = stable;
  sol.degraded = !nlp_sol.converged ||
                 nlp_sol.max_violation > config.nlp_stage1.tol_feasibility;
  sol.objective = nlp_sol.objective;
  sol.max_violation = nlp_sol.max_violation;
  sol.outer_iterations = nlp_sol.outer_iterations;
  sol.mode_iterations = mode_iters;
  return sol;
}

double audit_human_plan(const SystemState& state, HumanMode q_curr,
                        const HumanPlanSolution& sol, std::span<const Obstacle> obstacles,
                        const HumanParams& params, const RobotGeometry& geom,
                        const PlannerConfig& config) {
  const int n = config.horizon_n;
  double worst = 0.0;
  auto note = [&worst](double v) { worst = std::max(worst, v); };

  // Dynamics consistency of the stored rollout, Eqs. (1)-(3).
  Vec2 human = state.human;
  note((sol.human_path[0] - state.human).norm());
  note((sol.robot_path[0] - state.robot).norm());
  auto modes = fix_mode_sequence(
      q_curr,
      [&] {
        std::vector<double> m(sol.forces.size());
        for (size_t i = 0; i < m.size(); ++i) m[i] = sol.forces[i].norm();
        return m;
      }(),
      params);
  for (int k = 0; k < n; ++k) {
    const ForceCommand cmd{sol.forces[static_cast<size_t>(k)]};
    human = human_step(human, cmd, sol.modes[static_cast<size_t>(k)], params);
    note((sol.human_path[static_cast<size_t>(k) + 1] - human).norm());
    const Vec2 robot = robot_pose_from(human, cmd.direction(), sol.lengths[static_cast<size_t>(k)],
                                       sol.yaws[static_cast<size_t>(k)], geom);
    note((sol.robot_path[static_cast<size_t>(k) + 1] - robot).norm());
    if (modes[static_cast<size_t>(k)] != sol.modes[static_cast<size_t>(k)]) note(1.0);
  }

  for (int k = 0; k < n; ++k) {
    const double m = sol.forces[static_cast<size_t>(k)].norm();
    note(config.f_min - m);
    note(m - config.f_max);
    note(config.l_min - sol.lengths[static_cast<size_t>(k)]);
    note(sol.lengths[static_cast<size_t>(k)] - config.l_max);

    const Vec2 u = m > kNormFloor ? Vec2(sol.forces[static_cast<size_t>(k)] / m) : Vec2(0, 0);
    note(std::cos(config.phi_theta) - u.dot(heading_vector(sol.yaws[static_cast<size_t>(k)])));
    if (k + 1 < n) {
      const double m1 = sol.forces[static_cast<size_t>(k) + 1].norm();
      const Vec2 u1 =
          m1 > kNormFloor ? Vec2(sol.forces[static_cast<size_t>(k) + 1] / m1) : Vec2(0, 0);
      note(std::cos(config.phi_f) - u1.dot(u));
    }
  }

  for (int k = 1; k <= n; ++k) {
    const Vec2& h = sol.human_path[static_cast<size_t>(k)];
    const double yaw = sol.yaws[static_cast<size_t>(k) - 1];
    for (const Obstacle& o : obstacles) {
      note(config.safety_margin + geom.human_radius + o.radius - (h - o.center).norm());
      for (const Vec2& c : geom.cover_centers(sol.robot_path[static_cast<size_t>(k)], yaw)) {
        note(config.safety_margin + geom.cover_radius + o.radius - (c - o.center).norm());
      }
    }
  }
  return std::max(0.0, worst);
}

}  // namespace guidesim

#include "guidesim/robot_planner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace guidesim {

namespace {

Eigen::Matrix3d rot_z(double th) {
  Eigen::Matrix3d r;
  const double c = std::cos(th), s = std::sin(th);
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix3d rot_z_derivative(double th) {
  Eigen::Matrix3d r;
  const double c = std::cos(th), s = std::sin(th);
  r << -s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0;
  return r;
}

}  // namespace

Vec3 RobotRefTrajectory::sample(double tau) const {
  if (robot_ref.empty()) return Vec3::Zero();
  const double idx = std::clamp(tau / period, 0.0, static_cast<double>(robot_ref.size() - 1));
  const size_t i0 = static_cast<size_t>(std::floor(idx));
  const size_t i1 = std::min(i0 + 1, robot_ref.size() - 1);
  const double frac = idx - static_cast<double>(i0);
  Vec3 out;
  out.head<2>() = (1.0 - frac) * robot_ref[i0].head<2>() + frac * robot_ref[i1].head<2>();
  out(2) = robot_ref[i0](2) + frac * wrap_angle(robot_ref[i1](2) - robot_ref[i0](2));
  return out;
}

HumanMode RobotRefTrajectory::mode_at(double tau) const {
  if (modes.empty()) return HumanMode::standing;
  const auto idx = static_cast<size_t>(
      std::clamp(std::floor(tau / period), 0.0, static_cast<double>(modes.size() - 1)));
  return modes[idx];
}

RobotRefTrajectory reconstruct_reference(const SystemState& state, HumanMode q_curr,
                                         const HumanPlanSolution& stage1,
                                         const HumanParams& params, const RobotGeometry& geom) {
  const size_t n = stage1.forces.size();
  RobotRefTrajectory ref;
  ref.period = params.t;
  ref.human_ref.resize(n + 1);
  ref.robot_ref.resize(n + 1);
  ref.modes.resize(n);

  ref.human_ref[0] = state.human;
  ref.robot_ref[0] << state.robot.x(), state.robot.y(), state.yaw;

  HumanMode q = q_curr;
  for (size_t k = 0; k < n; ++k) {
    ref.modes[k] = q;
    const ForceCommand cmd{stage1.forces[k]};
    ref.human_ref[k + 1] = human_step(ref.human_ref[k], cmd, q, params);
    const Vec2 robot =
        robot_pose_from(ref.human_ref[k + 1], cmd.direction(), stage1.lengths[k], stage1.yaws[k], geom);
    ref.robot_ref[k + 1] << robot.x(), robot.y(), stage1.yaws[k];
    if (k + 1 < n) {
      q = mode_transition(q, stage1.forces[k].norm(), stage1.forces[k + 1].norm(), params);
    }
  }
  return ref;
}

namespace {

// Tracking program over the command sequence, single shooting through
// x+ = x + D R_z(theta) u dt with the discount applied on walking steps.
class StageTwoProblem {
 public:
  StageTwoProblem(const SystemState& state, const RobotRefTrajectory& reference,
                  double time_offset, std::vector<Obstacle> obstacles,
                  const PlannerConfig& cfg, const RobotGeometry& geom)
      : obstacles_(std::move(obstacles)), cfg_(cfg), geom_(geom), m_steps_(cfg.horizon_m) {
    const double dt = cfg.robot_period;
    x0_ << state.robot.x(), state.robot.y(), state.yaw;
    targets_.resize(m_steps_);
    discounts_.resize(m_steps_);
    for (int k = 0; k < m_steps_; ++k) {
      const double tau = time_offset + k * dt;
      targets_[static_cast<size_t>(k)] = reference.sample(tau);
      discounts_[static_cast<size_t>(k)] =
          reference.mode_at(tau) == HumanMode::walking
              ? Eigen::Matrix3d(cfg.discount.asDiagonal())
              : Eigen::Matrix3d::Identity();
    }
    states_.resize(m_steps_ + 1);
    sens_.assign(m_steps_ + 1, MatX::Zero(3, dimension()));
  }

  int dimension() const { return 3 * m_steps_; }
  int num_constraints() const { return 2 * static_cast<int>(obstacles_.size()) * m_steps_; }

  double objective(const VecX& z, VecX* grad) {
    roll(z);
    double j = 0.0;
    if (grad) grad->setZero();
    const Eigen::Matrix2d q2 = cfg_.q_robot.topLeftCorner<2, 2>();
    const double q_yaw = cfg_.q_robot(2, 2);
    for (int k = 0; k < m_steps_; ++k) {
      const Vec3& x = states_[static_cast<size_t>(k)];
      const Vec3& t = targets_[static_cast<size_t>(k)];
      const Vec2 dp = x.head<2>() - t.head<2>();
      const double dth = x(2) - t(2);
      j += dp.dot(q2 * dp) + q_yaw * 2.0 * (1.0 - std::cos(dth));
      const Vec3 u = z.segment<3>(3 * k);
      j += u.dot(cfg_.r_robot * u);
      if (grad) {
        Vec3 w;
        w.head<2>() = 2.0 * (q2 * dp);
        w(2) = q_yaw * 2.0 * std::sin(dth);
        grad->noalias() += sens_[static_cast<size_t>(k)].transpose() * w;
        grad->segment<3>(3 * k).noalias() += 2.0 * (cfg_.r_robot * u);
      }
    }
    return j;
  }

  void constraints(const VecX& z, VecX& g, MatX* jac) {
    roll(z);
    if (jac) jac->setZero();
    int row = 0;
    for (int k = 1; k <= m_steps_; ++k) {
      const Vec3& x = states_[static_cast<size_t>(k)];
      const Vec2 pos = x.head<2>();
      const Vec2 e_th = heading_vector(x(2));
      const Vec2 e_n = heading_normal(x(2));
      for (const Obstacle& o : obstacles_) {
        for (double off : geom_.cover_offsets) {
          const Vec2 center = pos + off * e_th;
          const Vec2 d = center - o.center;
          const double dist = std::max(d.norm(), 1e-9);
          g(row) = (cfg_.safety_margin + geom_.cover_radius + o.radius) - dist;
          if (jac) {
            const Vec2 dir = d / dist;
            // d(center)/dz = S.rows(0:1) + off * e_n * S.row(2)
            jac->row(row).noalias() =
                -dir.transpose() * sens_[static_cast<size_t>(k)].topRows<2>();
            jac->row(row).noalias() -=
                dir.dot(off * e_n) * sens_[static_cast<size_t>(k)].row(2);
          }
          ++row;
        }
      }
    }
  }

  void roll(const VecX& z) {
    if (cached_z_.size() == z.size() && cached_z_ == z) return;
    cached_z_ = z;
    const double dt = cfg_.robot_period;
    states_[0] = x0_;
    sens_[0].setZero();
    for (int k = 0; k < m_steps_; ++k) {
      const Vec3 u = z.segment<3>(3 * k);
      const double th = states_[static_cast<size_t>(k)](2);
      const Eigen::Matrix3d& d = discounts_[static_cast<size_t>(k)];
      states_[static_cast<size_t>(k) + 1] =
          states_[static_cast<size_t>(k)] + d * rot_z(th) * u * dt;
      sens_[static_cast<size_t>(k) + 1] = sens_[static_cast<size_t>(k)];
      sens_[static_cast<size_t>(k) + 1].noalias() +=
          dt * (d * rot_z_derivative(th) * u) * sens_[static_cast<size_t>(k)].row(2);
      sens_[static_cast<size_t>(k) + 1].block<3, 3>(0, 3 * k).noalias() += dt * d * rot_z(th);
    }
  }

  const std::vector<Vec3>& states() const { return states_; }

 private:
  std::vector<Obstacle> obstacles_;
  PlannerConfig cfg_;
  RobotGeometry geom_;
  int m_steps_;
  Vec3 x0_;
  std::vector<Vec3> targets_;
  std::vector<Eigen::Matrix3d> discounts_;

  VecX cached_z_;
  std::vector<Vec3> states_;
  std::vector<MatX> sens_;
};

std::vector<Obstacle> prune_obstacles(std::span<const Obstacle> obstacles, const Vec2& center,
                                      double radius) {
  std::vector<Obstacle> out;
  for (const Obstacle& o : obstacles) {
    if ((o.center - center).norm() - o.radius <= radius) out.push_back(o);
  }
  return out;
}

}  // namespace

NlpProblem build_robot_planner_nlp(const SystemState& state, const RobotRefTrajectory& reference,
                                   double time_offset, std::span<const Obstacle> obstacles,
                                   const PlannerConfig& config, const RobotGeometry& geom) {
  auto prob = std::make_shared<StageTwoProblem>(
      state, reference, time_offset,
      prune_obstacles(obstacles, state.robot, config.obstacle_prune_radius), config, geom);

  NlpProblem nlp;
  nlp.dimension = prob->dimension();
  nlp.num_constraints = prob->num_constraints();
  nlp.objective = [prob](const VecX& z, VecX* grad) { return prob->objective(z, grad); };
  nlp.constraints = [prob](const VecX& z, VecX& g, MatX* jac) { prob->constraints(z, g, jac); };
  nlp.lower.resize(nlp.dimension);
  nlp.upper.resize(nlp.dimension);
  for (int k = 0; k < config.horizon_m; ++k) {
    nlp.lower(3 * k) = config.vx_min;
    nlp.upper(3 * k) = config.vx_max;
    nlp.lower(3 * k + 1) = -config.vy_abs;
    nlp.upper(3 * k + 1) = config.vy_abs;
    nlp.lower(3 * k + 2) = -config.omega_abs;
    nlp.upper(3 * k + 2) = config.omega_abs;
  }
  return nlp;
}

RobotPlanResult plan_velocity(const SystemState& state, const RobotRefTrajectory& reference,
                              double time_offset, std::span<const Obstacle> obstacles,
                              const PlannerConfig& config, const RobotGeometry& geom,
                              const RobotPlanResult* warm) {
  const int m = config.horizon_m;
  NlpProblem nlp = build_robot_planner_nlp(state, reference, time_offset, obstacles, config, geom);

  nlp.initial = VecX::Zero(nlp.dimension);
  if (warm && static_cast<int>(warm->commands.size()) == m) {
    for (int k = 0; k < m; ++k) {
      const int src = std::min(k + 1, m - 1);
      nlp.initial.segment<3>(3 * k) = warm->commands[static_cast<size_t>(src)];
    }
  }

  RobotPlanResult out;
  out.commands.assign(static_cast<size_t>(m), Vec3::Zero());
  try {
    const NlpSolution sol = minimize(nlp, config.nlp_stage2);
    if (sol.max_violation > 1e-3) {
      out.degraded = true;  // no collision-free command found; stop
      return out;
    }
    for (int k = 0; k < m; ++k) {
      Vec3 u = sol.point.segment<3>(3 * k);
      u(0) = std::clamp(u(0), config.vx_min, config.vx_max);
      u(1) = std::clamp(u(1), -config.vy_abs, config.vy_abs);
      u(2) = std::clamp(u(2), -config.omega_abs, config.omega_abs);
      out.commands[static_cast<size_t>(k)] = u;
    }
    out.converged = sol.converged;
    out.degraded = !sol.converged && sol.max_violation > config.nlp_stage2.tol_feasibility;
    out.objective = sol.objective;
    out.max_violation = sol.max_violation;
  } catch (const NumericFailure&) {
    out.commands.assign(static_cast<size_t>(m), Vec3::Zero());
    out.degraded = true;
  }
  return out;
}

double audit_robot_plan(const SystemState& state, const RobotPlanResult& plan,
                        const RobotRefTrajectory& reference, double time_offset,
                        std::span<const Obstacle> obstacles, const PlannerConfig& config,
                        const RobotGeometry& geom) {
  double worst = 0.0;
  auto note = [&worst](double v) { worst = std::max(worst, v); };

  Vec3 x;
  x << state.robot.x(), state.robot.y(), state.yaw;
  const double dt = config.robot_period;
  for (size_t k = 0; k < plan.commands.size(); ++k) {
    const Vec3& u = plan.commands[k];
    note(config.vx_min - u(0));
    note(u(0) - config.vx_max);
    note(std::abs(u(1)) - config.vy_abs);
    note(std::abs(u(2)) - config.omega_abs);

    const double tau = time_offset + static_cast<double>(k) * dt;
    const Eigen::Matrix3d d = reference.mode_at(tau) == HumanMode::walking
                                  ? Eigen::Matrix3d(config.discount.asDiagonal())
                                  : Eigen::Matrix3d::Identity();
    x += d * rot_z(x(2)) * u * dt;
    for (const Vec2& c : geom.cover_centers(x.head<2>(), x(2))) {
      for (const Obstacle& o : obstacles) {
        note(config.safety_margin + geom.cover_radius + o.radius - (c - o.center).norm());
      }
    }
  }
  return std::max(0.0, worst);
}

}  // namespace guidesim

#include "guidesim/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace guidesim {

namespace {

constexpr int kN = 5;

double circular_mean(const Eigen::Matrix<double, 11, 1>& w,
                     const Eigen::Matrix<double, 1, 11>& angles) {
  double s = 0.0, c = 0.0;
  for (int i = 0; i < 11; ++i) {
    s += w(i) * std::sin(angles(i));
    c += w(i) * std::cos(angles(i));
  }
  return std::atan2(s, c);
}

Mat5 clamp_psd(Mat5 cov) {
  cov = 0.5 * (cov + cov.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat5> eig(cov);
  if (eig.eigenvalues().minCoeff() < 0.0) {
    Vec5 vals = eig.eigenvalues().cwiseMax(0.0);
    cov = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
  }
  return cov;
}

}  // namespace

namespace {

// Pivoted LDLT square root that tolerates semidefinite matrices.
bool psd_sqrt(const Mat5& a, Mat5& root) {
  Eigen::LDLT<Mat5> ldlt(a);
  if (ldlt.info() != Eigen::Success) return false;
  Vec5 d = ldlt.vectorD();
  const double floor = -1e-9 * std::max(1.0, d.cwiseAbs().maxCoeff());
  if ((d.array() < floor).any()) return false;
  d = d.cwiseMax(0.0);
  root = ldlt.transpositionsP().transpose() *
         Mat5(Mat5(ldlt.matrixL()) * d.cwiseSqrt().asDiagonal());
  return true;
}

}  // namespace

SigmaPoints sigma_points(const Belief& belief, double kappa) {
  const double scale = kN + kappa;
  if (!(scale > 0.0)) throw std::invalid_argument("sigma_points: need n + kappa > 0");

  Mat5 root;
  if (!psd_sqrt(scale * belief.covariance, root)) {
    // Jitter retry before giving up.
    if (!psd_sqrt(scale * (belief.covariance + 1e-10 * Mat5::Identity()), root)) {
      throw std::runtime_error("sigma_points: covariance is not positive semi-definite");
    }
  }

  SigmaPoints sp;
  sp.points.col(0) = belief.mean;
  sp.weights(0) = kappa / scale;
  for (int i = 0; i < kN; ++i) {
    sp.points.col(1 + i) = belief.mean + root.col(i);
    sp.points.col(1 + kN + i) = belief.mean - root.col(i);
    sp.weights(1 + i) = 1.0 / (2.0 * scale);
    sp.weights(1 + kN + i) = 1.0 / (2.0 * scale);
  }
  return sp;
}

Vec5 observe(const Vec5& state, const RobotGeometry& geom) {
  const Vec2 human(state(0), state(1));
  const Vec2 robot(state(2), state(3));
  const double theta = state(4);
  const Vec2 fixed = robot - geom.fixed_point_offset * heading_vector(theta);
  Vec5 z;
  z(0) = (fixed - human).norm();
  z(1) = wrap_angle(std::atan2(human.y() - robot.y(), human.x() - robot.x()) - theta);
  z(2) = robot.x();
  z(3) = robot.y();
  z(4) = theta;
  return z;
}

Belief ukf_predict(const Belief& belief, const ForceCommand& force, const Vec3& u, HumanMode q,
                   const HumanParams& params, const Vec3& discount, const NoiseConfig& noise,
                   double dt) {
  const SigmaPoints sp = sigma_points(belief, noise.kappa);

  const double speed = walking_speed(force.magnitude(), params);
  const Vec2 human_vel = q == HumanMode::walking ? Vec2(speed * force.direction()) : Vec2(0, 0);
  const Eigen::Matrix3d d = q == HumanMode::walking ? Eigen::Matrix3d(discount.asDiagonal())
                                                    : Eigen::Matrix3d::Identity();

  Eigen::Matrix<double, 5, 11> prop;
  for (int i = 0; i < 11; ++i) {
    const Vec5& x = sp.points.col(i);
    const double th = x(4);
    Eigen::Matrix3d rz;
    rz << std::cos(th), -std::sin(th), 0.0, std::sin(th), std::cos(th), 0.0, 0.0, 0.0, 1.0;
    Vec5 next;
    next.head<2>() = x.head<2>() + human_vel * dt;
    next.tail<3>() = x.tail<3>() + d * rz * u * dt;
    next(4) = wrap_angle(next(4));
    prop.col(i) = next;
  }

  Belief out;
  out.mean.head<4>().setZero();
  for (int i = 0; i < 11; ++i) out.mean.head<4>() += sp.weights(i) * prop.col(i).head<4>();
  out.mean(4) = circular_mean(sp.weights, prop.row(4));

  out.covariance.setZero();
  for (int i = 0; i < 11; ++i) {
    Vec5 dx = prop.col(i) - out.mean;
    dx(4) = wrap_angle(dx(4));
    out.covariance += sp.weights(i) * dx * dx.transpose();
  }
  out.covariance += dt * noise.process_var.asDiagonal().toDenseMatrix();
  out.covariance = clamp_psd(out.covariance);
  return out;
}

Belief ukf_update(const Belief& belief, const Observation& obs, const RobotGeometry& geom,
                  const NoiseConfig& noise, bool* skipped) {
  if (skipped) *skipped = false;
  const SigmaPoints sp = sigma_points(belief, noise.kappa);

  Eigen::Matrix<double, 5, 11> zs;
  for (int i = 0; i < 11; ++i) zs.col(i) = observe(sp.points.col(i), geom);

  Vec5 z_mean;
  z_mean.setZero();
  for (int i = 0; i < 11; ++i) {
    z_mean(0) += sp.weights(i) * zs(0, i);
    z_mean(2) += sp.weights(i) * zs(2, i);
    z_mean(3) += sp.weights(i) * zs(3, i);
  }
  z_mean(1) = circular_mean(sp.weights, zs.row(1));
  z_mean(4) = circular_mean(sp.weights, zs.row(4));

  Mat5 pzz = noise.obs_var.asDiagonal();
  Mat5 pxz = Mat5::Zero();
  for (int i = 0; i < 11; ++i) {
    Vec5 dz = zs.col(i) - z_mean;
    dz(1) = wrap_angle(dz(1));
    dz(4) = wrap_angle(dz(4));
    Vec5 dx = sp.points.col(i) - belief.mean;
    dx(4) = wrap_angle(dx(4));
    pzz += sp.weights(i) * dz * dz.transpose();
    pxz += sp.weights(i) * dx * dz.transpose();
  }

  const Eigen::FullPivLU<Mat5> lu(pzz);
  if (!lu.isInvertible()) {
    if (skipped) *skipped = true;
    return belief;
  }
  const Mat5 gain = pxz * lu.inverse();

  Vec5 innovation = obs.z - z_mean;
  innovation(1) = wrap_angle(innovation(1));
  innovation(4) = wrap_angle(innovation(4));

  Belief out;
  out.mean = belief.mean + gain * innovation;
  out.mean(4) = wrap_angle(out.mean(4));
  out.covariance = clamp_psd(belief.covariance - gain * pzz * gain.transpose());
  return out;
}

Observation synthesize_observation(const SystemState& truth, const RobotGeometry& geom,
                                   const NoiseConfig& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Camera round trip: generate the facial depth from the true horizontal
  // distance, then invert l_c = D_f / cos(phi) - (H - h_c) tan(phi).
  const double incl = noise.camera_inclination;
  const double drop = (noise.human_height - noise.camera_height) * std::tan(incl);
  const double l_c_true = (truth.human - truth.robot).norm();
  const double facial_depth = (l_c_true + drop) * std::cos(incl);
  const double l_c = facial_depth / std::cos(incl) - drop;

  // Gimbal angle that centers the face; the camera looks backward from the
  // robot body axis, x^h = x^d - l_c * e_{theta + phi_cam}.
  const double bearing = std::atan2(truth.human.y() - truth.robot.y(),
                                    truth.human.x() - truth.robot.x());
  const double phi_cam = wrap_angle(bearing - truth.yaw + M_PI);
  const Vec2 human_cam =
      truth.robot - l_c * heading_vector(truth.yaw + phi_cam);

  const Vec2 fixed = geom.fixed_point(truth.robot, truth.yaw);
  Observation obs;
  obs.z(0) = (fixed - human_cam).norm() + std::sqrt(noise.obs_var(0)) * gauss(rng);
  obs.z(1) = wrap_angle(std::atan2(human_cam.y() - truth.robot.y(),
                                   human_cam.x() - truth.robot.x()) -
                        truth.yaw + std::sqrt(noise.obs_var(1)) * gauss(rng));
  obs.z(2) = truth.robot.x() + std::sqrt(noise.obs_var(2)) * gauss(rng);
  obs.z(3) = truth.robot.y() + std::sqrt(noise.obs_var(3)) * gauss(rng);
  obs.z(4) = wrap_angle(truth.yaw + std::sqrt(noise.obs_var(4)) * gauss(rng));
  return obs;
}

}  // namespace guidesim

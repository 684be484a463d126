#include "guidesim/human_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace guidesim {

double walking_speed(double f, const HumanParams& p) {
  return std::max(0.0, p.alpha * f + p.beta);
}

HumanMode mode_transition(HumanMode q, double f_curr, double f_next, const HumanParams& p) {
  const double delta = f_next - f_curr;
  const double rate_limit = p.delta_f * p.t;
  if (q == HumanMode::standing) {
    return (delta >= rate_limit || f_curr >= p.f_th) ? HumanMode::walking
                                                     : HumanMode::standing;
  }
  return (delta >= -rate_limit && f_curr >= p.f_th) ? HumanMode::walking
                                                    : HumanMode::standing;
}

Vec2 human_step(const Vec2& human, const ForceCommand& f, HumanMode q, const HumanParams& p) {
  if (q == HumanMode::standing) return human;
  return human + walking_speed(f.magnitude(), p) * f.direction() * p.t;
}

Vec2 robot_pose_from(const Vec2& human, const Vec2& e_f, double l, double yaw,
                     const RobotGeometry& geom) {
  return human + l * e_f + geom.fixed_point_offset * heading_vector(yaw);
}

FitResult fit_params(std::span<const std::pair<double, double>> samples,
                     double filter_cutoff_hz, double sample_rate_hz) {
  if (samples.size() < 2) {
    throw std::invalid_argument("fit_params: need at least 2 samples");
  }
  // Discrete first-order low pass, state initialized to the first sample so
  // an affine relation between the channels is preserved exactly.
  const double rc = 1.0 / (2.0 * M_PI * filter_cutoff_hz);
  const double dt = 1.0 / sample_rate_hz;
  const double a = dt / (rc + dt);

  std::vector<double> f(samples.size()), v(samples.size());
  double f_state = samples[0].first;
  double v_state = samples[0].second;
  for (size_t i = 0; i < samples.size(); ++i) {
    f_state += a * (samples[i].first - f_state);
    v_state += a * (samples[i].second - v_state);
    f[i] = f_state;
    v[i] = v_state;
  }

  const double n = static_cast<double>(f.size());
  double sf = 0.0, sv = 0.0, sff = 0.0, sfv = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    sf += f[i];
    sv += v[i];
    sff += f[i] * f[i];
    sfv += f[i] * v[i];
  }
  const double denom = n * sff - sf * sf;
  const double spread = sff / n - (sf / n) * (sf / n);
  if (!(spread > 1e-12)) {
    throw std::invalid_argument("fit_params: degenerate data, all forces equal after filtering");
  }
  FitResult r;
  r.alpha = (n * sfv - sf * sv) / denom;
  r.beta = (sv - r.alpha * sf) / n;
  double ss = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double e = v[i] - (r.alpha * f[i] + r.beta);
    ss += e * e;
  }
  r.residual_rms = std::sqrt(ss / n);
  return r;
}

std::vector<std::pair<double, double>> read_force_velocity_csv(std::istream& in) {
  std::vector<std::pair<double, double>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;  // header
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw std::runtime_error("malformed F,v CSV at line " + std::to_string(line_no));
    }
    try {
      out.emplace_back(std::stod(a), std::stod(b));
    } catch (const std::exception&) {
      throw std::runtime_error("malformed F,v CSV at line " + std::to_string(line_no));
    }
  }
  return out;
}

std::vector<std::pair<double, double>> read_force_velocity_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  return read_force_velocity_csv(in);
}

}  // namespace guidesim

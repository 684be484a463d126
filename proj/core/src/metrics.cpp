#include "guidesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace guidesim {

ComfortMetrics comfort_from_series(const ComfortSeries& s, double f_max) {
  const size_t n = s.force.size();
  if (n < 3) throw std::invalid_argument("comfort metrics: need at least 3 samples");

  ComfortMetrics m;
  double acc = 0.0;
  size_t cnt = 0;
  for (size_t i = 1; i + 1 < n; ++i) {
    const double df = (s.force[i + 1] - s.force[i - 1]) / (2.0 * s.dt);
    acc += df * df;
    ++cnt;
  }
  m.f_dot_rms = cnt ? std::sqrt(acc / static_cast<double>(cnt)) : 0.0;

  // Heading rate over walking samples, skipping the first sample of each
  // walking interval where the direction is still undefined.
  acc = 0.0;
  cnt = 0;
  bool prev_valid = false;
  double prev_heading = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const bool valid = s.walking[i] && (i > 0 && s.walking[i - 1]);
    if (valid && prev_valid) {
      const double dth = wrap_angle(s.heading[i] - prev_heading) / s.dt;
      acc += dth * dth;
      ++cnt;
    }
    prev_valid = valid;
    if (valid) prev_heading = s.heading[i];
  }
  m.theta_dot_rms = cnt ? std::sqrt(acc / static_cast<double>(cnt)) : 0.0;

  for (size_t i = 0; i < n; ++i) {
    if (s.force[i] > f_max) m.t_over += s.dt;
  }
  for (size_t i = 1; i < n; ++i) {
    if (s.walking[i] != s.walking[i - 1]) ++m.n_ch;
  }
  return m;
}

namespace {

ComfortSeries series_from_log(const TrajectoryLog& log, bool planned) {
  const size_t n = log.rows.size();
  ComfortSeries s;
  s.dt = log.sample_period;
  s.t.resize(n);
  s.force.resize(n);
  s.heading.resize(n);
  s.walking.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const LogRow& r = log.rows[i];
    s.t[i] = r.t;
    if (planned) {
      s.force[i] = r.planned_force.norm();
      s.walking[i] = r.planned_q == 1;
      s.heading[i] =
          s.force[i] > 1e-12 ? std::atan2(r.planned_force.y(), r.planned_force.x()) : 0.0;
    } else {
      s.force[i] = r.force.norm();
      // Velocity direction from central position differences.
      const size_t a = i > 0 ? i - 1 : i;
      const size_t b = i + 1 < n ? i + 1 : i;
      const Vec2 v = log.rows[b].human - log.rows[a].human;
      const bool moving = v.norm() > 1e-12;
      s.walking[i] = (r.q == 1) && moving;
      s.heading[i] = moving ? std::atan2(v.y(), v.x()) : 0.0;
    }
  }
  return s;
}

}  // namespace

ComfortMetrics comfort_metrics(const TrajectoryLog& log, double f_max) {
  if (log.rows.size() < 3) throw std::invalid_argument("comfort_metrics: log shorter than 3 rows");
  return comfort_from_series(series_from_log(log, false), f_max);
}

ComfortMetrics planned_comfort_metrics(const TrajectoryLog& log, double f_max) {
  if (log.rows.size() < 3) throw std::invalid_argument("comfort_metrics: log shorter than 3 rows");
  return comfort_from_series(series_from_log(log, true), f_max);
}

std::vector<double> topsis_rci(const DecisionMatrix& matrix) {
  const size_t rows = matrix.values.size();
  if (rows < 2) throw std::invalid_argument("topsis_rci: need at least 2 alternatives");
  const size_t cols = matrix.values.front().size();
  for (const auto& r : matrix.values) {
    if (r.size() != cols) throw std::invalid_argument("topsis_rci: ragged matrix");
  }

  std::vector<double> weights = matrix.weights;
  if (weights.empty()) weights.assign(cols, 1.0 / static_cast<double>(cols));
  if (weights.size() != cols) throw std::invalid_argument("topsis_rci: weight size mismatch");
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;

  // Vector (root-sum-square) normalization, then weighting.
  std::vector<std::vector<double>> v(rows, std::vector<double>(cols));
  for (size_t j = 0; j < cols; ++j) {
    double norm = 0.0;
    for (size_t i = 0; i < rows; ++i) norm += matrix.values[i][j] * matrix.values[i][j];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw std::invalid_argument("topsis_rci: criterion column " + std::to_string(j) +
                                  " is all zero");
    }
    for (size_t i = 0; i < rows; ++i) v[i][j] = weights[j] * matrix.values[i][j] / norm;
  }

  // Cost criteria: ideal is the per-column minimum.
  std::vector<double> ideal(cols), anti(cols);
  for (size_t j = 0; j < cols; ++j) {
    double lo = v[0][j], hi = v[0][j];
    for (size_t i = 1; i < rows; ++i) {
      lo = std::min(lo, v[i][j]);
      hi = std::max(hi, v[i][j]);
    }
    ideal[j] = lo;
    anti[j] = hi;
  }

  std::vector<double> rci(rows);
  for (size_t i = 0; i < rows; ++i) {
    double dp = 0.0, dm = 0.0;
    for (size_t j = 0; j < cols; ++j) {
      dp += (v[i][j] - ideal[j]) * (v[i][j] - ideal[j]);
      dm += (v[i][j] - anti[j]) * (v[i][j] - anti[j]);
    }
    dp = std::sqrt(dp);
    dm = std::sqrt(dm);
    rci[i] = (dp + dm) > 0.0 ? dm / (dp + dm) : 0.5;
  }
  return rci;
}

}  // namespace guidesim

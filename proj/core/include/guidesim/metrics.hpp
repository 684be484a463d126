#ifndef GUIDESIM_METRICS_HPP
#define GUIDESIM_METRICS_HPP

#include "guidesim/trajectory_log.hpp"

#include <span>
#include <string>
#include <vector>

namespace guidesim {

/// The four comfort criteria of the comparative study; all cost-type.
struct ComfortMetrics {
  double f_dot_rms = 0.0;      // N/s
  double theta_dot_rms = 0.0;  // rad/s, walking samples only
  double t_over = 0.0;         // s with F > F_max
  int n_ch = 0;                // mode changes
};

/// Uniformly sampled force/heading/mode series; heading is only meaningful
/// where walking[i] is true.
struct ComfortSeries {
  double dt = 0.01;
  std::vector<double> t;
  std::vector<double> force;
  std::vector<double> heading;
  std::vector<bool> walking;
};

/// Metrics from raw series. Force derivative by central differences over
/// interior samples; heading derivative over consecutive walking samples,
/// skipping the first sample after each standing interval.
ComfortMetrics comfort_from_series(const ComfortSeries& series, double f_max);

/// Metrics of a trajectory log, using the true force and the direction of
/// the human velocity. Throws std::invalid_argument for logs with fewer
/// than 3 rows.
ComfortMetrics comfort_metrics(const TrajectoryLog& log, double f_max);

/// Metrics of the planned (commanded) trace carried by the same log.
ComfortMetrics planned_comfort_metrics(const TrajectoryLog& log, double f_max);

/// Cost-type decision matrix (rows = alternatives); weights sum to 1.
struct DecisionMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // rows x criteria
  std::vector<double> weights;
};

/// Relative comfort index per alternative: vector-normalized weighted
/// TOPSIS closeness to the per-criterion minimum (cost criteria). 1 for an
/// alternative best in every criterion, 0 for one worst in every criterion.
/// Throws std::invalid_argument on an all-zero criterion column.
std::vector<double> topsis_rci(const DecisionMatrix& matrix);

}  // namespace guidesim

#endif  // GUIDESIM_METRICS_HPP

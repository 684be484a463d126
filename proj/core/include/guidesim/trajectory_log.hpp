#ifndef GUIDESIM_TRAJECTORY_LOG_HPP
#define GUIDESIM_TRAJECTORY_LOG_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/human_model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace guidesim {

enum class RunStatus { reached, timeout, collision, planner_failure };

std::string to_string(RunStatus status);

/// One uniformly-sampled snapshot of the closed loop.
struct LogRow {
  double t = 0.0;
  Vec2 human{0, 0};
  Vec2 robot{0, 0};
  double yaw = 0.0;
  int q = 0;             // true human mode
  Vec2 force{0, 0};      // true rope force vector
  double force_ref = 0.0;
  double rope_vector_length = 0.0;  // |x_f - x_h|
  double payout = 0.0;
  Vec3 command{0, 0, 0};
  Vec5 belief_mean = Vec5::Zero();
  double cov_trace = 0.0;
  std::string event;

  // In-memory companions for the planned-trace metrics; not serialized.
  Vec2 planned_force{0, 0};
  int planned_q = 0;
};

struct TrajectoryLog {
  double sample_period = 0.01;
  RunStatus status = RunStatus::timeout;
  std::vector<LogRow> rows;
};

/// Writes/reads the run CSV:
/// t,xh,yh,xd,yd,theta,q,Fx,Fy,F,F_ref,l,payout,vx,vy,omega,
/// est_xh,est_yh,est_xd,est_yd,est_theta,cov_trace,event
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);
void write_trajectory_csv_file(const std::string& path, const TrajectoryLog& log);
TrajectoryLog read_trajectory_csv(std::istream& in);
TrajectoryLog read_trajectory_csv_file(const std::string& path);

/// Belief trace row, logged at the estimator rate.
struct BeliefRow {
  double t = 0.0;
  Vec5 mean = Vec5::Zero();
  double trace = 0.0;
  double eig_min = 0.0;
};

/// CSV: t,mean_xh,mean_yh,mean_xd,mean_yd,mean_theta,trace,eig_min
void write_belief_csv(std::ostream& out, const std::vector<BeliefRow>& rows);
void write_belief_csv_file(const std::string& path, const std::vector<BeliefRow>& rows);

/// Waypoint CSV: x,y,theta_h
struct Waypoint3 {
  double x, y, theta;
};
void write_waypoints_csv(std::ostream& out, const std::vector<Waypoint3>& rows);

}  // namespace guidesim

#endif  // GUIDESIM_TRAJECTORY_LOG_HPP

#include "guidesim/trajectory_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace guidesim {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::reached: return "reached";
    case RunStatus::timeout: return "timeout";
    case RunStatus::collision: return "collision";
    case RunStatus::planner_failure: return "planner_failure";
  }
  return "unknown";
}

namespace {

// Shortest round-trippable decimal form; locale independent and stable, so
// identical runs produce byte-identical files.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  out << "t,xh,yh,xd,yd,theta,q,Fx,Fy,F,F_ref,l,payout,vx,vy,omega,"
         "est_xh,est_yh,est_xd,est_yd,est_theta,cov_trace,event\n";
  for (const LogRow& r : log.rows) {
    out << fmt(r.t) << ',' << fmt(r.human.x()) << ',' << fmt(r.human.y()) << ','
        << fmt(r.robot.x()) << ',' << fmt(r.robot.y()) << ',' << fmt(r.yaw) << ',' << r.q << ','
        << fmt(r.force.x()) << ',' << fmt(r.force.y()) << ',' << fmt(r.force.norm()) << ','
        << fmt(r.force_ref) << ',' << fmt(r.rope_vector_length) << ',' << fmt(r.payout) << ','
        << fmt(r.command(0)) << ',' << fmt(r.command(1)) << ',' << fmt(r.command(2)) << ','
        << fmt(r.belief_mean(0)) << ',' << fmt(r.belief_mean(1)) << ',' << fmt(r.belief_mean(2))
        << ',' << fmt(r.belief_mean(3)) << ',' << fmt(r.belief_mean(4)) << ','
        << fmt(r.cov_trace) << ',' << r.event << '\n';
  }
}

void write_trajectory_csv_file(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_trajectory_csv(out, log);
}

TrajectoryLog read_trajectory_csv(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    f.push_back(cur);
    if (f.size() != 23) throw std::runtime_error("trajectory CSV: bad column count");
    LogRow r;
    r.t = std::stod(f[0]);
    r.human = {std::stod(f[1]), std::stod(f[2])};
    r.robot = {std::stod(f[3]), std::stod(f[4])};
    r.yaw = std::stod(f[5]);
    r.q = std::stoi(f[6]);
    r.force = {std::stod(f[7]), std::stod(f[8])};
    r.force_ref = std::stod(f[10]);
    r.rope_vector_length = std::stod(f[11]);
    r.payout = std::stod(f[12]);
    r.command = {std::stod(f[13]), std::stod(f[14]), std::stod(f[15])};
    for (int i = 0; i < 5; ++i) r.belief_mean(i) = std::stod(f[static_cast<size_t>(16 + i)]);
    r.cov_trace = std::stod(f[21]);
    r.event = f[22];
    log.rows.push_back(std::move(r));
  }
  if (log.rows.size() >= 2) log.sample_period = log.rows[1].t - log.rows[0].t;
  return log;
}

TrajectoryLog read_trajectory_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_trajectory_csv(in);
}

void write_belief_csv(std::ostream& out, const std::vector<BeliefRow>& rows) {
  out << "t,mean_xh,mean_yh,mean_xd,mean_yd,mean_theta,trace,eig_min\n";
  for (const BeliefRow& r : rows) {
    out << fmt(r.t);
    for (int i = 0; i < 5; ++i) out << ',' << fmt(r.mean(i));
    out << ',' << fmt(r.trace) << ',' << fmt(r.eig_min) << '\n';
  }
}

void write_belief_csv_file(const std::string& path, const std::vector<BeliefRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_belief_csv(out, rows);
}

void write_waypoints_csv(std::ostream& out, const std::vector<Waypoint3>& rows) {
  out << "x,y,theta_h\n";
  for (const Waypoint3& w : rows) {
    out << fmt(w.x) << ',' << fmt(w.y) << ',' << fmt(w.theta) << '\n';
  }
}

}  // namespace guidesim

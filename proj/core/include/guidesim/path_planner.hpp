#ifndef GUIDESIM_PATH_PLANNER_HPP
#define GUIDESIM_PATH_PLANNER_HPP

#include "guidesim/geometry.hpp"
#include "guidesim/grid_map.hpp"

#include <stdexcept>
#include <vector>

namespace guidesim {

/// Raised when no collision-free waypoint sequence exists.
class UnreachableError : public std::runtime_error {
 public:
  UnreachableError(const std::string& what, int explored)
      : std::runtime_error(what + " (" + std::to_string(explored) + " nodes explored)"),
        explored_(explored) {}
  int explored() const { return explored_; }

 private:
  int explored_;
};

struct PathPlannerConfig {
  double step_length = 0.3;                    // delta L, one human step
  int heading_bins = 24;                       // 15 degree bins
  int max_heading_steps = 2;                   // delta theta in {-2..2} bins
  double heading_weight = 0.1;                 // m/rad inside the node cost
  double goal_tolerance = 0.3;                 // m
  double safety_margin = 0.1;                  // d_s
  double position_quantum = 0.05;              // lattice snap, m
  double rope_length_nominal = 1.4;            // l used to place the robot
  double bfs_margin = 1.0;                     // BFS window inflation, m
  int max_expansions = 400000;
};

/// Human waypoint: position plus walking heading.
struct PathNode {
  Vec2 position{0.0, 0.0};
  double heading = 0.0;
};

struct PlannedPath {
  std::vector<PathNode> waypoints;  // start first
  double cost = 0.0;                // sum of extended-space step norms
  int expanded = 0;
};

/// Heap-based A* over (x, y, heading). Every waypoint keeps human clearance
/// >= d_s + r_h and every consecutive pair admits a robot corridor per
/// robot_feasible. Throws UnreachableError when the target cannot be
/// reached and std::invalid_argument when start or target are already in
/// violation.
PlannedPath plan_path(const GridMap& map, const PathNode& start, const Vec2& target,
                      const RobotGeometry& geom, const PathPlannerConfig& config);

/// Breadth-first search for a continuous collision-free robot corridor
/// between two robot positions over a sub-grid at map resolution. Cells
/// are passable when both cover circles, oriented along the motion
/// direction, keep clearance >= d_s + r_d.
bool robot_feasible(const GridMap& map, const Vec2& from, const Vec2& to,
                    const RobotGeometry& geom, const PathPlannerConfig& config);
bool robot_feasible(const ObstacleIndex& obstacles, const GridMap& map, const Vec2& from,
                    const Vec2& to, const RobotGeometry& geom, const PathPlannerConfig& config);

/// Exhaustive breadth-first reachability over exactly the same lattice and
/// transition set as plan_path. Reference implementation for testing; no
/// heuristic, no cost.
bool reachable_by_bfs(const GridMap& map, const PathNode& start, const Vec2& target,
                      const RobotGeometry& geom, const PathPlannerConfig& config);

}  // namespace guidesim

#endif  // GUIDESIM_PATH_PLANNER_HPP

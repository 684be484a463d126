#include "guidesim/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace guidesim {

namespace {

struct LatticeKey {
  std::int32_t qx;
  std::int32_t qy;
  std::int32_t bin;
  bool operator==(const LatticeKey&) const = default;
};

struct LatticeKeyHash {
  size_t operator()(const LatticeKey& k) const {
    std::uint64_t h = static_cast<std::uint32_t>(k.qx);
    h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.qy);
    h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.bin);
    return static_cast<size_t>(h);
  }
};

// Shared lattice definition: snapped positions, binned headings, and the
// per-step feasibility checks. Both the A* planner and the BFS reference
// search run on exactly this graph.
class Lattice {
 public:
  Lattice(const GridMap& map, const RobotGeometry& geom, const PathPlannerConfig& cfg)
      : map_(map),
        geom_(geom),
        cfg_(cfg),
        obstacles_(obstacles_from_map(map)),
        human_margin_(cfg.safety_margin + geom.human_radius) {}

  const ObstacleIndex& obstacles() const { return obstacles_; }
  double human_margin() const { return human_margin_; }

  double snap(double v) const { return std::llround(v / cfg_.position_quantum) * cfg_.position_quantum; }
  Vec2 snap(const Vec2& p) const { return {snap(p.x()), snap(p.y())}; }

  int snap_bin(double heading) const {
    const double bin_width = 2.0 * M_PI / cfg_.heading_bins;
    int b = static_cast<int>(std::llround(wrap_angle(heading) / bin_width));
    b %= cfg_.heading_bins;
    if (b < 0) b += cfg_.heading_bins;
    return b;
  }
  double bin_angle(int bin) const { return wrap_angle(bin * 2.0 * M_PI / cfg_.heading_bins); }

  LatticeKey key_of(const Vec2& snapped, int bin) const {
    return {static_cast<std::int32_t>(std::llround(snapped.x() / cfg_.position_quantum)),
            static_cast<std::int32_t>(std::llround(snapped.y() / cfg_.position_quantum)), bin};
  }

  bool human_ok(const Vec2& p) const {
    return map_.contains(p) && obstacles_.clearance_at_least(p, human_margin_);
  }

  Vec2 robot_position(const Vec2& human, double heading) const {
    return human + (cfg_.rope_length_nominal + geom_.fixed_point_offset) * heading_vector(heading);
  }

  bool step_feasible(const Vec2& from_pos, double from_heading, const Vec2& to_pos,
                     double to_heading) const {
    if (!human_ok(to_pos)) return false;
    return robot_feasible(obstacles_, map_, robot_position(from_pos, from_heading),
                          robot_position(to_pos, to_heading), geom_, cfg_);
  }

  struct Successor {
    Vec2 position;
    int bin;
    double cost;
  };

  // All feasible one-step transitions out of (snapped position, bin).
  void successors(const Vec2& pos, int bin, std::vector<Successor>& out) const {
    out.clear();
    const double heading = bin_angle(bin);
    for (int db = -cfg_.max_heading_steps; db <= cfg_.max_heading_steps; ++db) {
      int nb = (bin + db) % cfg_.heading_bins;
      if (nb < 0) nb += cfg_.heading_bins;
      const double nh = bin_angle(nb);
      const Vec2 np = snap(pos + cfg_.step_length * heading_vector(nh));
      if (!step_feasible(pos, heading, np, nh)) continue;
      out.push_back({np, nb, step_cost(pos, np, heading, nh)});
    }
  }

  double step_cost(const Vec2& a, const Vec2& b, double ha, double hb) const {
    const double dth = cfg_.heading_weight * wrap_angle(hb - ha);
    return std::sqrt((b - a).squaredNorm() + dth * dth);
  }

  bool goal_reached(const Vec2& pos, double heading, const Vec2& target) const {
    if ((pos - target).norm() > cfg_.goal_tolerance) return false;
    if ((pos - target).norm() < 1e-12) return true;
    const double hb = std::atan2(target.y() - pos.y(), target.x() - pos.x());
    return step_feasible(pos, heading, target, hb);
  }

 private:
  const GridMap& map_;
  const RobotGeometry& geom_;
  const PathPlannerConfig& cfg_;
  ObstacleIndex obstacles_;
  double human_margin_;
};

struct NodeRecord {
  Vec2 position;
  int bin;
  double g;
  LatticeKey parent;
  bool has_parent;
};

}  // namespace

bool robot_feasible(const ObstacleIndex& obstacles, const GridMap& map, const Vec2& from,
                    const Vec2& to, const RobotGeometry& geom, const PathPlannerConfig& config) {
  if (!map.contains(from) || !map.contains(to)) return false;
  const double margin = config.safety_margin + geom.cover_radius;

  auto covers_clear = [&](const Vec2& center, double yaw) {
    for (const Vec2& c : geom.cover_centers(center, yaw)) {
      if (!obstacles.clearance_at_least(c, margin)) return false;
    }
    return true;
  };

  const auto [fi, fj] = map.cell_at(from);
  const auto [ti, tj] = map.cell_at(to);

  const Vec2 motion = to - from;
  const double overall_yaw = motion.norm() > 1e-9 ? std::atan2(motion.y(), motion.x()) : 0.0;
  if (!covers_clear(map.cell_center(fi, fj), overall_yaw)) return false;
  if (fi == ti && fj == tj) return true;

  const int margin_cells = static_cast<int>(std::ceil(config.bfs_margin / map.resolution));
  const int i_lo = std::max(0, std::min(fi, ti) - margin_cells);
  const int i_hi = std::min(map.width - 1, std::max(fi, ti) + margin_cells);
  const int j_lo = std::max(0, std::min(fj, tj) - margin_cells);
  const int j_hi = std::min(map.height - 1, std::max(fj, tj) + margin_cells);
  const int wi = i_hi - i_lo + 1;
  const int wj = j_hi - j_lo + 1;

  std::vector<std::uint8_t> visited(static_cast<size_t>(wi) * wj, 0);
  auto idx = [&](int i, int j) { return static_cast<size_t>(j - j_lo) * wi + (i - i_lo); };

  std::deque<std::pair<int, int>> queue;
  visited[idx(fi, fj)] = 1;
  queue.emplace_back(fi, fj);
  while (!queue.empty()) {
    const auto [ci, cj] = queue.front();
    queue.pop_front();
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int ni = ci + di, nj = cj + dj;
        if (ni < i_lo || ni > i_hi || nj < j_lo || nj > j_hi) continue;
        if (visited[idx(ni, nj)]) continue;
        const double yaw = std::atan2(static_cast<double>(dj), static_cast<double>(di));
        if (!covers_clear(map.cell_center(ni, nj), yaw)) continue;
        visited[idx(ni, nj)] = 1;
        if (ni == ti && nj == tj) return true;
        queue.emplace_back(ni, nj);
      }
    }
  }
  return false;
}

bool robot_feasible(const GridMap& map, const Vec2& from, const Vec2& to,
                    const RobotGeometry& geom, const PathPlannerConfig& config) {
  ObstacleIndex index(obstacles_from_map(map));
  return robot_feasible(index, map, from, to, geom, config);
}

PlannedPath plan_path(const GridMap& map, const PathNode& start, const Vec2& target,
                      const RobotGeometry& geom, const PathPlannerConfig& config) {
  Lattice lattice(map, geom, config);

  const Vec2 start_pos = lattice.snap(start.position);
  const int start_bin = lattice.snap_bin(start.heading);
  if (!lattice.human_ok(start_pos)) {
    throw std::invalid_argument("plan_path: start violates human clearance margin");
  }
  if (!lattice.human_ok(target)) {
    throw std::invalid_argument("plan_path: target violates human clearance margin");
  }

  struct OpenEntry {
    double f;
    double h;
    std::uint64_t seq;
    LatticeKey key;
  };
  struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.h != b.h) return a.h > b.h;
      return a.seq > b.seq;  // FIFO tie break
    }
  };

  std::unordered_map<LatticeKey, NodeRecord, LatticeKeyHash> records;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::unordered_set<LatticeKey, LatticeKeyHash> closed;

  auto heuristic = [&](const Vec2& p) { return (p - target).norm(); };

  const LatticeKey start_key = lattice.key_of(start_pos, start_bin);
  records[start_key] = {start_pos, start_bin, 0.0, start_key, false};
  std::uint64_t seq = 0;
  open.push({heuristic(start_pos), heuristic(start_pos), seq++, start_key});

  int expanded = 0;
  std::vector<Lattice::Successor> succ;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed.contains(top.key)) continue;
    closed.insert(top.key);
    const NodeRecord rec = records.at(top.key);
    ++expanded;
    if (expanded > config.max_expansions) {
      throw UnreachableError("plan_path: expansion limit reached", expanded);
    }

    const double heading = lattice.bin_angle(rec.bin);
    if (lattice.goal_reached(rec.position, heading, target)) {
      PlannedPath path;
      path.expanded = expanded;
      // Walk back to the start, then append the exact target.
      std::vector<PathNode> rev;
      LatticeKey k = top.key;
      while (true) {
        const NodeRecord& r = records.at(k);
        rev.push_back({r.position, lattice.bin_angle(r.bin)});
        if (!r.has_parent) break;
        k = r.parent;
      }
      std::reverse(rev.begin(), rev.end());
      path.cost = rec.g;
      if ((rec.position - target).norm() >= 1e-12) {
        const double hb =
            std::atan2(target.y() - rec.position.y(), target.x() - rec.position.x());
        path.cost += lattice.step_cost(rec.position, target, heading, hb);
        rev.push_back({target, hb});
      }
      path.waypoints = std::move(rev);
      return path;
    }

    lattice.successors(rec.position, rec.bin, succ);
    for (const auto& s : succ) {
      const LatticeKey key = lattice.key_of(s.position, s.bin);
      if (closed.contains(key)) continue;
      const double g_new = rec.g + s.cost;
      auto it = records.find(key);
      if (it == records.end() || g_new < it->second.g - 1e-12) {
        records[key] = {s.position, s.bin, g_new, top.key, true};
        open.push({g_new + heuristic(s.position), heuristic(s.position), seq++, key});
      }
    }
  }
  throw UnreachableError("plan_path: target unreachable", expanded);
}

bool reachable_by_bfs(const GridMap& map, const PathNode& start, const Vec2& target,
                      const RobotGeometry& geom, const PathPlannerConfig& config) {
  Lattice lattice(map, geom, config);
  const Vec2 start_pos = lattice.snap(start.position);
  const int start_bin = lattice.snap_bin(start.heading);
  if (!lattice.human_ok(start_pos) || !lattice.human_ok(target)) return false;

  std::unordered_set<LatticeKey, LatticeKeyHash> visited;
  std::deque<std::pair<Vec2, int>> queue;
  visited.insert(lattice.key_of(start_pos, start_bin));
  queue.emplace_back(start_pos, start_bin);

  std::vector<Lattice::Successor> succ;
  while (!queue.empty()) {
    const auto [pos, bin] = queue.front();
    queue.pop_front();
    if (lattice.goal_reached(pos, lattice.bin_angle(bin), target)) return true;
    lattice.successors(pos, bin, succ);
    for (const auto& s : succ) {
      const LatticeKey key = lattice.key_of(s.position, s.bin);
      if (visited.contains(key)) continue;
      visited.insert(key);
      queue.emplace_back(s.position, s.bin);
    }
  }
  return false;
}

}  // namespace guidesim

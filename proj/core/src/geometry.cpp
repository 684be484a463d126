#include "guidesim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace guidesim {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

Vec5 SystemState::to_vector() const {
  Vec5 v;
  v << human.x(), human.y(), robot.x(), robot.y(), yaw;
  return v;
}

SystemState SystemState::from_vector(const Vec5& v) {
  SystemState s;
  s.human = {v(0), v(1)};
  s.robot = {v(2), v(3)};
  s.yaw = wrap_angle(v(4));
  return s;
}

double clearance(const Vec2& p, std::span<const Obstacle> obstacles) {
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& o : obstacles) {
    best = std::min(best, (p - o.center).norm() - o.radius);
  }
  return best;
}

ObstacleIndex::ObstacleIndex(std::vector<Obstacle> obstacles, double bucket_size)
    : obstacles_(std::move(obstacles)), bucket_size_(bucket_size) {
  if (obstacles_.empty()) return;
  Vec2 lo = obstacles_.front().center;
  Vec2 hi = lo;
  for (const Obstacle& o : obstacles_) {
    lo = lo.cwiseMin(o.center);
    hi = hi.cwiseMax(o.center);
    max_radius_ = std::max(max_radius_, o.radius);
  }
  min_corner_ = lo;
  nx_ = static_cast<int>(std::floor((hi.x() - lo.x()) / bucket_size_)) + 1;
  ny_ = static_cast<int>(std::floor((hi.y() - lo.y()) / bucket_size_)) + 1;
  buckets_.resize(static_cast<size_t>(nx_) * ny_);
  for (int i = 0; i < static_cast<int>(obstacles_.size()); ++i) {
    const Vec2& c = obstacles_[i].center;
    int bx = static_cast<int>(std::floor((c.x() - lo.x()) / bucket_size_));
    int by = static_cast<int>(std::floor((c.y() - lo.y()) / bucket_size_));
    buckets_[bucket_of(bx, by)].members.push_back(i);
  }
}

void ObstacleIndex::scan_ring(const Vec2& p, int ring, double& best) const {
  const int px = static_cast<int>(std::floor((p.x() - min_corner_.x()) / bucket_size_));
  const int py = static_cast<int>(std::floor((p.y() - min_corner_.y()) / bucket_size_));
  for (int by = py - ring; by <= py + ring; ++by) {
    if (by < 0 || by >= ny_) continue;
    for (int bx = px - ring; bx <= px + ring; ++bx) {
      if (bx < 0 || bx >= nx_) continue;
      if (std::max(std::abs(bx - px), std::abs(by - py)) != ring) continue;
      for (int idx : buckets_[bucket_of(bx, by)].members) {
        const Obstacle& o = obstacles_[idx];
        best = std::min(best, (p - o.center).norm() - o.radius);
      }
    }
  }
}

double ObstacleIndex::min_clearance(const Vec2& p) const {
  if (obstacles_.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(nx_, ny_) +
      static_cast<int>(std::ceil((std::abs(p.x() - min_corner_.x()) +
                                  std::abs(p.y() - min_corner_.y())) / bucket_size_)) + 2;
  for (int ring = 0; ring <= max_ring; ++ring) {
    scan_ring(p, ring, best);
    // Once a candidate is found, one extra ring guarantees exactness:
    // anything farther out is at least (ring-1)*bucket - max_radius away.
    if (std::isfinite(best) &&
        (ring - 1) * bucket_size_ - max_radius_ > best) {
      break;
    }
  }
  return best;
}

bool ObstacleIndex::clearance_at_least(const Vec2& p, double d) const {
  if (obstacles_.empty()) return true;
  // Every obstacle whose boundary could be closer than d has its center
  // within d + max_radius of p; scan only those rings.
  const int rings = static_cast<int>(std::ceil((d + max_radius_) / bucket_size_)) + 1;
  double best = std::numeric_limits<double>::infinity();
  for (int ring = 0; ring <= rings; ++ring) {
    scan_ring(p, ring, best);
    if (best < d) return false;
  }
  return best >= d;
}

}  // namespace guidesim

#ifndef GUIDESIM_GEOMETRY_HPP
#define GUIDESIM_GEOMETRY_HPP

#include <Eigen/Dense>

#include <array>
#include <limits>
#include <span>
#include <vector>

namespace guidesim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Normalizes an angle to (-pi, pi].
double wrap_angle(double a);

/// Unit vector (cos a, sin a).
inline Vec2 heading_vector(double a) { return {std::cos(a), std::sin(a)}; }

/// Derivative of heading_vector, (-sin a, cos a).
inline Vec2 heading_normal(double a) { return {-std::sin(a), std::cos(a)}; }

/// Joint human/robot configuration in the world frame.
/// Packed order is (xh, yh, xd, yd, theta); yaw is kept in (-pi, pi].
struct SystemState {
  Vec2 human{0.0, 0.0};
  Vec2 robot{0.0, 0.0};
  double yaw{0.0};

  Vec5 to_vector() const;
  static SystemState from_vector(const Vec5& v);
};

/// Disc obstacle, typically one per occupied grid cell.
struct Obstacle {
  Vec2 center{0.0, 0.0};
  double radius{0.0};
};

/// Body geometry of the guide robot. The traction rope is anchored at the
/// fixed point d_cf behind the body center; two cover circles placed along
/// the body axis enclose the rectangular footprint for clearance checks.
struct RobotGeometry {
  double fixed_point_offset = 0.325;                  // d_cf
  std::array<double, 2> cover_offsets{0.1625, -0.1625};
  double cover_radius = 0.25;                         // r_d
  double human_radius = 0.25;                         // r_h
  double body_length = 0.65;
  double body_width = 0.35;

  Vec2 fixed_point(const Vec2& robot, double yaw) const {
    return robot - fixed_point_offset * heading_vector(yaw);
  }
  std::array<Vec2, 2> cover_centers(const Vec2& robot, double yaw) const {
    const Vec2 e = heading_vector(yaw);
    return {robot + cover_offsets[0] * e, robot + cover_offsets[1] * e};
  }
};

/// Signed distance from a point to the nearest obstacle boundary:
/// min_j (|p - c_j| - r_j). +inf for an empty list, negative inside.
double clearance(const Vec2& p, std::span<const Obstacle> obstacles);

/// Uniform-grid bucket index over an obstacle set. Exact nearest-boundary
/// queries in roughly constant time for obstacle fields made of grid cells.
class ObstacleIndex {
 public:
  ObstacleIndex() = default;
  explicit ObstacleIndex(std::vector<Obstacle> obstacles, double bucket_size = 1.0);

  /// Exact min_j (|p - c_j| - r_j); +inf when empty.
  double min_clearance(const Vec2& p) const;
  /// True iff min_clearance(p) >= d. Early-outs without a full scan.
  bool clearance_at_least(const Vec2& p, double d) const;

  bool empty() const { return obstacles_.empty(); }
  std::span<const Obstacle> obstacles() const { return obstacles_; }

 private:
  struct Bucket {
    std::vector<int> members;
  };
  int bucket_of(int bx, int by) const { return by * nx_ + bx; }
  void scan_ring(const Vec2& p, int ring, double& best) const;

  std::vector<Obstacle> obstacles_;
  std::vector<Bucket> buckets_;
  Vec2 min_corner_{0.0, 0.0};
  double bucket_size_ = 1.0;
  double max_radius_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
};

}  // namespace guidesim

#endif  // GUIDESIM_GEOMETRY_HPP

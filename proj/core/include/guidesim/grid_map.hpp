#ifndef GUIDESIM_GRID_MAP_HPP
#define GUIDESIM_GRID_MAP_HPP

#include "guidesim/geometry.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace guidesim {

/// Error raised while reading a GMAP document; carries 1-based line and
/// column of the offending character.
class MapParseError : public std::runtime_error {
 public:
  MapParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) +
                           ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Row-major occupancy grid. Cell (i, j) spans
/// [origin + (i, j)*res, origin + (i+1, j+1)*res); its center is
/// origin + ((i+0.5)*res, (j+0.5)*res).
struct GridMap {
  int width = 0;
  int height = 0;
  double resolution = 0.0;
  Vec2 origin{0.0, 0.0};
  std::vector<std::uint8_t> cells;  // index j * width + i, 1 = occupied

  bool occupied(int i, int j) const { return cells[static_cast<size_t>(j) * width + i] != 0; }
  void set_occupied(int i, int j, bool v) { cells[static_cast<size_t>(j) * width + i] = v ? 1 : 0; }

  Vec2 cell_center(int i, int j) const {
    return origin + Vec2{(i + 0.5) * resolution, (j + 0.5) * resolution};
  }
  bool in_bounds(int i, int j) const { return i >= 0 && i < width && j >= 0 && j < height; }
  bool contains(const Vec2& p) const {
    return p.x() >= origin.x() && p.y() >= origin.y() &&
           p.x() < origin.x() + width * resolution &&
           p.y() < origin.y() + height * resolution;
  }
  /// Cell indices containing p; clamped into bounds when p sits on the
  /// far edge. Caller must ensure contains(p) for a meaningful result.
  std::pair<int, int> cell_at(const Vec2& p) const;
};

/// Parses a GMAP v1 document:
///   GMAP v1 <width> <height> <resolution> <origin_x> <origin_y>
/// followed by exactly <height> lines of <width> characters each,
/// '#' occupied and '.' free. The first data line is the top row
/// (largest y). Throws MapParseError on malformed input.
GridMap load_map(const std::string& text);
GridMap load_map_file(const std::string& path);

/// Inverse of load_map; load(serialize(m)) reproduces m exactly.
std::string serialize_map(const GridMap& map);

/// One disc per occupied cell, centered on the cell with radius
/// resolution * sqrt(2)/2 (circumscribed), so the union of discs covers
/// every occupied cell.
std::vector<Obstacle> obstacles_from_map(const GridMap& map);

/// Subset of obstacles_from_map keeping only occupied cells with at least
/// one free 8-neighbor inside the map. Interior wall cells are unreachable
/// behind these, which keeps planner constraint counts small.
std::vector<Obstacle> boundary_obstacles(const GridMap& map);

}  // namespace guidesim

#endif  // GUIDESIM_GRID_MAP_HPP

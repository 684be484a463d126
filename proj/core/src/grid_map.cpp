#include "guidesim/grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace guidesim {

std::pair<int, int> GridMap::cell_at(const Vec2& p) const {
  int i = static_cast<int>(std::floor((p.x() - origin.x()) / resolution));
  int j = static_cast<int>(std::floor((p.y() - origin.y()) / resolution));
  i = std::clamp(i, 0, width - 1);
  j = std::clamp(j, 0, height - 1);
  return {i, j};
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

GridMap load_map(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw MapParseError("empty map document", 1, 1);

  std::istringstream header(lines[0]);
  std::string magic, version;
  GridMap map;
  if (!(header >> magic >> version) || magic != "GMAP" || version != "v1") {
    throw MapParseError("expected header 'GMAP v1 ...'", 1, 1);
  }
  if (!(header >> map.width >> map.height >> map.resolution >> map.origin.x() >>
        map.origin.y())) {
    throw MapParseError("malformed header fields", 1, static_cast<int>(lines[0].size()) + 1);
  }
  std::string trailing;
  if (header >> trailing) {
    throw MapParseError("unexpected trailing header token '" + trailing + "'", 1, 1);
  }
  if (map.width < 1 || map.height < 1) {
    throw MapParseError("width and height must be >= 1", 1, 1);
  }
  if (!(map.resolution > 0.0)) {
    throw MapParseError("resolution must be > 0", 1, 1);
  }
  if (static_cast<int>(lines.size()) != map.height + 1) {
    throw MapParseError("expected " + std::to_string(map.height) + " data rows, found " +
                            std::to_string(lines.size() - 1),
                        static_cast<int>(lines.size()), 1);
  }

  map.cells.assign(static_cast<size_t>(map.width) * map.height, 0);
  for (int r = 0; r < map.height; ++r) {
    const std::string& row = lines[r + 1];
    const int line_no = r + 2;
    if (static_cast<int>(row.size()) != map.width) {
      throw MapParseError("row has " + std::to_string(row.size()) + " cells, expected " +
                              std::to_string(map.width),
                          line_no, static_cast<int>(row.size()) + 1);
    }
    const int j = map.height - 1 - r;  // first data line is the top row
    for (int i = 0; i < map.width; ++i) {
      const char c = row[static_cast<size_t>(i)];
      if (c == '#') {
        map.set_occupied(i, j, true);
      } else if (c != '.') {
        throw MapParseError(std::string("illegal cell character '") + c + "'", line_no, i + 1);
      }
    }
  }
  return map;
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_map(buf.str());
}

std::string serialize_map(const GridMap& map) {
  std::ostringstream out;
  out << "GMAP v1 " << map.width << ' ' << map.height << ' ' << map.resolution << ' '
      << map.origin.x() << ' ' << map.origin.y() << '\n';
  for (int r = 0; r < map.height; ++r) {
    const int j = map.height - 1 - r;
    for (int i = 0; i < map.width; ++i) out << (map.occupied(i, j) ? '#' : '.');
    out << '\n';
  }
  return out.str();
}

std::vector<Obstacle> obstacles_from_map(const GridMap& map) {
  std::vector<Obstacle> out;
  const double r = map.resolution * std::sqrt(2.0) / 2.0;
  for (int j = 0; j < map.height; ++j) {
    for (int i = 0; i < map.width; ++i) {
      if (map.occupied(i, j)) out.push_back({map.cell_center(i, j), r});
    }
  }
  return out;
}

std::vector<Obstacle> boundary_obstacles(const GridMap& map) {
  std::vector<Obstacle> out;
  const double r = map.resolution * std::sqrt(2.0) / 2.0;
  for (int j = 0; j < map.height; ++j) {
    for (int i = 0; i < map.width; ++i) {
      if (!map.occupied(i, j)) continue;
      bool exposed = false;
      for (int dj = -1; dj <= 1 && !exposed; ++dj) {
        for (int di = -1; di <= 1 && !exposed; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ni = i + di, nj = j + dj;
          if (map.in_bounds(ni, nj) && !map.occupied(ni, nj)) exposed = true;
        }
      }
      if (exposed) out.push_back({map.cell_center(i, j), r});
    }
  }
  return out;
}

}  // namespace guidesim

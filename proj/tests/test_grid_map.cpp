#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "guidesim/grid_map.hpp"

#include <random>

using namespace guidesim;

TEST_CASE("smallest legal map") {
  const GridMap m = load_map("GMAP v1 2 1 0.5 0 0\n.#\n");
  CHECK(m.width == 2);
  CHECK(m.height == 1);
  CHECK(m.resolution == doctest::Approx(0.5));
  CHECK_FALSE(m.occupied(0, 0));
  CHECK(m.occupied(1, 0));
  CHECK(m.cell_center(0, 0).x() == doctest::Approx(0.25));
  CHECK(m.cell_center(1, 0).x() == doctest::Approx(0.75));
}

TEST_CASE("first data line is the top row") {
  const GridMap m = load_map("GMAP v1 1 2 1 0 0\n#\n.\n");
  CHECK(m.occupied(0, 1));       // top row, largest y
  CHECK_FALSE(m.occupied(0, 0));
}

TEST_CASE("malformed inputs raise parse errors with position") {
  CHECK_THROWS_AS(load_map("GMAP v1 2 1 0.5 0 0\n.#X\n"), MapParseError);
  CHECK_THROWS_AS(load_map("GMAP v1 2 1 0.5 0 0\n.X\n"), MapParseError);
  CHECK_THROWS_AS(load_map("GMAP v1 2 1 0.5 0 0\n.\n"), MapParseError);
  CHECK_THROWS_AS(load_map("GMAP v2 2 1 0.5 0 0\n.#\n"), MapParseError);
  CHECK_THROWS_AS(load_map("GMAP v1 2 1 0.5 0\n.#\n"), MapParseError);
  CHECK_THROWS_AS(load_map("GMAP v1 0 1 0.5 0 0\n"), MapParseError);
  CHECK_THROWS_AS(load_map("GMAP v1 2 1 -1 0 0\n.#\n"), MapParseError);
  CHECK_THROWS_AS(load_map(""), MapParseError);
  try {
    load_map("GMAP v1 3 1 0.5 0 0\n.#X\n");
    FAIL("expected parse error");
  } catch (const MapParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("round trip preserves cell contents") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> dim(1, 30);
  std::bernoulli_distribution occ(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    GridMap m;
    m.width = dim(rng);
    m.height = dim(rng);
    m.resolution = 0.25;
    m.origin = {-1.5, 2.0};
    m.cells.assign(static_cast<size_t>(m.width) * m.height, 0);
    for (int j = 0; j < m.height; ++j) {
      for (int i = 0; i < m.width; ++i) m.set_occupied(i, j, occ(rng));
    }
    const GridMap back = load_map(serialize_map(m));
    REQUIRE(back.width == m.width);
    REQUIRE(back.height == m.height);
    CHECK(back.cells == m.cells);
    CHECK(back.origin == m.origin);
  }
}

TEST_CASE("obstacles_from_map radii and coverage") {
  {
    const GridMap m = load_map("GMAP v1 3 3 0.5 0 0\n...\n...\n...\n");
    CHECK(obstacles_from_map(m).empty());
  }
  {
    const GridMap m = load_map("GMAP v1 1 1 0.1 0 0\n#\n");
    const auto obs = obstacles_from_map(m);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].radius == doctest::Approx(0.1 * std::sqrt(2.0) / 2.0));
  }
  {
    // Coverage oracle: every sampled point inside an occupied cell has
    // clearance <= 0 against the circumscribed circles.
    const GridMap m = load_map("GMAP v1 4 3 0.3 -1 2\n..#.\n#...\n...#\n");
    const auto obs = obstacles_from_map(m);
    REQUIRE(obs.size() == 3);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int j = 0; j < m.height; ++j) {
      for (int i = 0; i < m.width; ++i) {
        if (!m.occupied(i, j)) continue;
        for (int s = 0; s < 10000; ++s) {
          const Vec2 p = m.origin + Vec2{(i + u01(rng)) * m.resolution,
                                         (j + u01(rng)) * m.resolution};
          REQUIRE(clearance(p, obs) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("corridor scenario map has a 1.0 m narrowest channel") {
  const GridMap m = load_map_file(std::string(GUIDESIM_SCENARIO_DIR) + "/corridor.gmap");
  // Narrowest free channel: vertical corridor, 10 cells at 0.1 m.
  auto channel_width = [&](int j) {
    int best = 0, run = 0;
    for (int i = 0; i < m.width; ++i) {
      run = m.occupied(i, j) ? 0 : run + 1;
      best = std::max(best, run);
    }
    return best * m.resolution;
  };
  double narrowest = 1e9;
  for (double y : {4.5, 5.5, 6.5, 7.5}) {
    narrowest = std::min(narrowest, channel_width(m.cell_at({11.0, y}).second));
  }
  CHECK(narrowest == doctest::Approx(1.0));
  // The wide corridor measures 1.5 m: free column run through (8.0, 3.0).
  const auto [i0, j0] = m.cell_at({8.0, 3.0});
  int lo = j0, hi = j0;
  while (lo > 0 && !m.occupied(i0, lo - 1)) --lo;
  while (hi + 1 < m.height && !m.occupied(i0, hi + 1)) ++hi;
  CHECK((hi - lo + 1) * m.resolution == doctest::Approx(1.5));
}

TEST_CASE("boundary obstacles keep only exposed cells") {
  // 5x5 occupied block: the center cell is interior.
  GridMap m;
  m.width = m.height = 5;
  m.resolution = 0.1;
  m.cells.assign(25, 1);
  CHECK(obstacles_from_map(m).size() == 25);
  CHECK(boundary_obstacles(m).empty());  // no free cells anywhere
  m.set_occupied(0, 0, false);
  const auto b = boundary_obstacles(m);
  CHECK(b.size() == 3);  // the three neighbors of the freed corner
}

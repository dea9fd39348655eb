#include <doctest.h>

#include <cmath>
#include <random>

#include "frontnav/fmm.hpp"
#include "frontnav/frontier.hpp"
#include "oracle.hpp"

using namespace frontnav;

namespace {

void explore_box(MapStack& m, int r0, int c0, int r1, int c1) {
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) m.mark(MapStack::kExplored, {r, c});
}

void wall(MapStack& m, Cell c) {
  m.mark(MapStack::kExplored, c);
  m.mark(MapStack::kObstacle, c);
}

// Frontier definition applied literally to every cell.
MaskGrid brute_mask(const MapStack& m, int dilation) {
  const int n = m.size();
  MaskGrid out(n, n, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (!m.is_explored({r, c}) || m.is_obstacle({r, c})) continue;
      bool near_obstacle = false, open_side = false;
      for (int dr = -dilation; dr <= dilation; ++dr)
        for (int dc = -dilation; dc <= dilation; ++dc) {
          const Cell x{r + dr, c + dc};
          if (m.in_bounds(x) && m.is_obstacle(x)) near_obstacle = true;
        }
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const Cell x{r + dr, c + dc};
          if (m.in_bounds(x) && !m.is_explored(x)) open_side = true;
        }
      out(r, c) = !near_obstacle && open_side;
    }
  return out;
}

}  // namespace

TEST_CASE("walled, fully explored room has no frontier") {
  MapStack m = new_map(60, 0.05, 1);
  for (int i = 10; i <= 40; ++i) {
    wall(m, {10, i});
    wall(m, {40, i});
    wall(m, {i, 10});
    wall(m, {i, 40});
  }
  explore_box(m, 11, 11, 39, 39);
  CHECK(extract_frontiers(m).empty());
}

TEST_CASE("half-explored square has one straight frontier") {
  MapStack m = new_map(100, 0.05, 1);
  for (int i = 20; i <= 79; ++i) {
    wall(m, {20, i});
    wall(m, {i, 20});
    wall(m, {i, 79});
  }
  explore_box(m, 21, 21, 49, 78);
  const auto fs = extract_frontiers(m);
  REQUIRE(fs.size() == 1);

  const MaskGrid mask = brute_mask(m, 1);
  std::vector<Cell> cells;
  for (int r = 0; r < 100; ++r)
    for (int c = 0; c < 100; ++c)
      if (mask(r, c)) cells.push_back({r, c});
  auto got = fs[0].cells;
  std::sort(got.begin(), got.end());
  CHECK(got == cells);
  for (const Cell& c : cells) CHECK(c.row == 49);

  double mc = 0.0;
  for (const Cell& c : cells) mc += c.col;
  mc /= cells.size();
  CHECK(fs[0].centroid.row == 49);
  CHECK(std::abs(fs[0].centroid.col - mc) <= 0.5);
}

TEST_CASE("two disjoint arcs give two frontiers") {
  MapStack m = new_map(100, 0.05, 1);
  explore_box(m, 10, 10, 10, 19);
  explore_box(m, 60, 30, 60, 39);
  const auto fs = extract_frontiers(m);
  CHECK(fs.size() == 2);
  CHECK(oracle::components8(brute_mask(m, 1)) == 2);
  for (const auto& f : fs) CHECK(f.cells.size() == 10);

  FrontierConfig big;
  big.min_cluster_size = 11;
  CHECK(extract_frontiers(m, big).empty());
}

TEST_CASE("frontier mask and clusters agree with brute force on random maps") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    MapStack m = new_map(64, 0.05, 1);
    std::bernoulli_distribution explored(0.6), obstacle(0.08);
    std::uniform_int_distribution<int> pos(0, 63);
    for (int k = 0; k < 12; ++k) {
      const int r = pos(rng), c = pos(rng);
      explore_box(m, std::max(0, r - 6), std::max(0, c - 6), std::min(63, r + 6), std::min(63, c + 6));
    }
    for (int r = 0; r < 64; ++r)
      for (int c = 0; c < 64; ++c)
        if (m.is_explored({r, c}) && obstacle(rng)) m.mark(MapStack::kObstacle, {r, c});

    const MaskGrid expect = brute_mask(m, 1);
    CHECK(frontier_mask(m, 1) == expect);

    Grid<int> labels;
    const int n = oracle::components8(expect, &labels);
    std::vector<int> sizes(n, 0);
    for (int v : labels.data())
      if (v >= 0) ++sizes[v];
    const auto fs = extract_frontiers(m);
    CHECK(static_cast<long>(fs.size()) == std::count_if(sizes.begin(), sizes.end(), [](int s) { return s >= 4; }));
    for (const auto& f : fs) {
      CHECK(f.cells.size() >= 4);
      CHECK(std::find(f.cells.begin(), f.cells.end(), f.centroid) != f.cells.end());
      for (const Cell& c : f.cells) CHECK(labels[c] == labels[f.cells.front()]);
    }
  }
}

TEST_CASE("cost-utility score") {
  CHECK(cost_utility(0.8, 0.4, 0.5) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(cost_utility(0.7, 0.9, 0.0) == 0.7);
}

TEST_CASE("unexplored fraction over a disk") {
  MapStack m = new_map(100, 0.05, 1);
  CHECK(unexplored_fraction(m, {50, 50}, 0.5) == 1.0);
  explore_box(m, 0, 0, 99, 49);
  // Disk of radius 10 cells: columns <= 49 are explored.
  int area = 0, open = 0;
  for (int dr = -10; dr <= 10; ++dr)
    for (int dc = -10; dc <= 10; ++dc)
      if (dr * dr + dc * dc <= 100) {
        ++area;
        open += 50 + dc > 49;
      }
  CHECK(unexplored_fraction(m, {50, 50}, 0.5) == doctest::Approx(static_cast<double>(open) / area));
}

TEST_CASE("frontier at the agent cell costs nothing") {
  MapStack m = new_map(100, 0.05, 1);
  explore_box(m, 40, 20, 40, 29);
  explore_box(m, 40, 70, 40, 79);
  auto fs = extract_frontiers(m);
  REQUIRE(fs.size() == 2);
  MaskGrid none(100, 100, 0);
  const Cell agent = fs[0].centroid;
  const Cell src[] = {agent};
  FmmOptions opt;
  opt.resolution = 0.05;
  const ArrivalField field = fmm_field(none, src, opt);
  score_frontiers(fs, m, field, FrontierConfig{});
  CHECK(fs[0].cost == 0.0);
  CHECK(fs[0].score_cu == fs[0].utility);
  CHECK(fs[1].cost == 1.0);
  CHECK_FALSE(fs[1].unreachable);
}

TEST_CASE("unreachable frontier gets the maximum cost") {
  MapStack m = new_map(100, 0.05, 1);
  explore_box(m, 40, 20, 40, 29);
  explore_box(m, 40, 70, 40, 79);
  auto fs = extract_frontiers(m);
  REQUIRE(fs.size() == 2);
  MaskGrid blocked(100, 100, 0);
  for (int r = 0; r < 100; ++r) blocked(r, 50) = 1;
  const Cell src[] = {Cell{40, 10}};
  FmmOptions opt;
  opt.resolution = 0.05;
  const ArrivalField field = fmm_field(blocked, src, opt);
  score_frontiers(fs, m, field, FrontierConfig{});
  CHECK_FALSE(fs[0].unreachable);
  CHECK(fs[0].cost == 1.0);
  CHECK(fs[1].unreachable);
  CHECK(fs[1].cost == 1.0);
}

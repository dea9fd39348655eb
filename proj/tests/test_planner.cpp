#include <doctest.h>

#include <cmath>

#include "frontnav/fmm.hpp"
#include "frontnav/planner.hpp"
#include "oracle.hpp"

using namespace frontnav;

namespace {

ArrivalField solve(const MaskGrid& blocked, std::vector<Cell> sources, FmmOptions opt = {}) {
  return fmm_field(blocked, sources, opt);
}

// U-shaped wall opening to the left, around the source at (50, 50).
MaskGrid u_wall() {
  MaskGrid g(101, 101, 0);
  for (int i = 30; i <= 70; ++i) {
    g(30, i) = 1;
    g(70, i) = 1;
    g(i, 70) = 1;
  }
  return g;
}

// Everything explored; `blocked` cells are obstacles.
MapStack full_map(const MaskGrid& blocked) {
  MapStack m = new_map(blocked.rows(), 0.05, 1);
  for (int r = 0; r < blocked.rows(); ++r)
    for (int c = 0; c < blocked.cols(); ++c) {
      m.mark(MapStack::kExplored, {r, c});
      if (blocked(r, c)) m.mark(MapStack::kObstacle, {r, c});
    }
  return m;
}

}  // namespace

TEST_CASE("source cell has time zero") {
  MaskGrid g(11, 11, 0);
  const auto f = solve(g, {{5, 5}});
  CHECK(f.at({5, 5}) == 0.0);
  CHECK(f.at({5, 6}) == doctest::Approx(1.0));
}

TEST_CASE("empty grid matches Euclidean distance") {
  MaskGrid g(201, 201, 0);
  const auto f = solve(g, {{100, 100}});
  double worst = 0.0;
  for (int r = 0; r < 201; ++r)
    for (int c = 0; c < 201; ++c) {
      const double e = std::hypot(r - 100, c - 100);
      if (e < 5.0) continue;
      worst = std::max(worst, std::abs(f.at({r, c}) - e) / e);
    }
  CHECK(worst <= 0.02);
}

TEST_CASE("U-shaped wall against the graph oracle") {
  const MaskGrid g = u_wall();
  const auto f = solve(g, {{50, 50}});
  const auto d = oracle::graph_distance(g, {{50, 50}});
  for (const Cell goal : {Cell{50, 90}, Cell{20, 90}, Cell{80, 80}, Cell{50, 100}}) {
    INFO(goal.row, ",", goal.col);
    CHECK(std::abs(f.at(goal) - d[goal]) / d[goal] <= 0.05);
  }
  CHECK(f.at({50, 90}) > 60.0);
}

TEST_CASE("arrival times bound the straight line and grow in acceptance order") {
  MaskGrid g = u_wall();
  for (int c = 0; c < 60; ++c) g(85, c) = 1;
  FmmOptions opt;
  opt.record_order = true;
  const auto f = solve(g, {{50, 50}}, opt);
  for (int r = 0; r < 101; ++r)
    for (int c = 0; c < 101; ++c) {
      const double t = f.at({r, c});
      if (g(r, c)) CHECK(t == kUnreachable);
      else CHECK(t >= std::hypot(r - 50, c - 50) - 1e-9);
    }
  REQUIRE(!f.order.empty());
  for (std::size_t i = 1; i < f.order.size(); ++i) CHECK(f.at(f.order[i]) >= f.at(f.order[i - 1]));
}

TEST_CASE("solver options") {
  MaskGrid g(60, 60, 0);
  g(30, 30) = 1;

  SUBCASE("resolution scales times") {
    FmmOptions opt;
    opt.resolution = 0.05;
    CHECK(solve(g, {{10, 10}}, opt).at({10, 50}) == doctest::Approx(2.0));
  }
  SUBCASE("inflation blocks a disk") {
    FmmOptions opt;
    opt.inflation_radius = 2.0;
    const auto f = solve(g, {{10, 10}}, opt);
    CHECK(f.is_blocked({32, 30}));
    CHECK(f.is_blocked({31, 31}));
    CHECK_FALSE(f.is_blocked({33, 30}));
    CHECK_FALSE(f.reachable({32, 30}));
  }
  SUBCASE("passable cells survive inflation") {
    MaskGrid pass(60, 60, 0);
    pass(32, 30) = 1;
    FmmOptions opt;
    opt.inflation_radius = 2.0;
    opt.passable = &pass;
    CHECK(solve(g, {{10, 10}}, opt).reachable({32, 30}));
  }
  SUBCASE("window") {
    FmmOptions opt;
    opt.roi = {0, 0, 20, 20};
    const auto f = solve(g, {{10, 10}}, opt);
    CHECK(f.reachable({20, 20}));
    CHECK_FALSE(f.reachable({21, 20}));
    CHECK(f.is_blocked({40, 40}));
    CHECK(f.at({15, 10}) == doctest::Approx(5.0));
  }
  SUBCASE("early stop keeps the stop cell exact") {
    const auto full = solve(g, {{10, 10}});
    FmmOptions opt;
    opt.stop_after = Cell{40, 45};
    const auto part = solve(g, {{10, 10}}, opt);
    CHECK(part.at({40, 45}) == full.at({40, 45}));
    CHECK_FALSE(part.reachable({59, 59}));
  }
  SUBCASE("no usable source") {
    CHECK_THROWS_AS(solve(g, {{30, 30}}), FmmError);
    CHECK_THROWS_AS(solve(g, {}), FmmError);
  }
}

TEST_CASE("line of sight") {
  MaskGrid g(20, 20, 0);
  CHECK(line_of_sight(g, {0, 0}, {19, 19}));
  g(10, 10) = 1;
  CHECK_FALSE(line_of_sight(g, {0, 0}, {19, 19}));
  CHECK(line_of_sight(g, {0, 19}, {19, 14}));
}

TEST_CASE("local policy: ahead, behind, trapped") {
  MaskGrid g(200, 200, 0);
  const MapStack m = full_map(g);
  const PlannerConfig cfg;
  const Cell agent{100, 100};
  const Vec2 p = m.grid_to_world(agent);
  const Cell goal[] = {Cell{100, 160}};
  const auto f = goal_field(m.obstacle(), m, goal, agent, cfg);

  auto step = next_action(f, m, {p, 0.0}, cfg, false);
  CHECK(step.status == PlanStatus::kAct);
  CHECK(step.action == Action::kMoveForward);

  step = next_action(f, m, {p, 180.0}, cfg, false);
  CHECK(step.status == PlanStatus::kAct);
  CHECK((step.action == Action::kTurnLeft || step.action == Action::kTurnRight));
  CHECK(next_action(f, m, {p, 60.0}, cfg, false).action == Action::kTurnLeft);
  CHECK(next_action(f, m, {p, 300.0}, cfg, false).action == Action::kTurnRight);

  // Goal reached and target stop.
  const Vec2 near = m.grid_to_world({100, 145});
  CHECK(next_action(f, m, {near, 0.0}, cfg, false).status == PlanStatus::kAct);
  CHECK(next_action(f, m, {m.grid_to_world({100, 158}), 0.0}, cfg, false).status == PlanStatus::kGoalReached);
  CHECK(next_action(f, m, {near, 0.0}, cfg, true).action == Action::kStop);

  // A cell outside the solved area cannot be planned from.
  const auto g2 = goal_field(m.obstacle(), m, goal, agent, cfg);
  CHECK(next_action(g2, m, {m.grid_to_world({5, 5}), 0.0}, cfg, false).status == PlanStatus::kReplan);
}

TEST_CASE("corridor corner") {
  // L-shaped corridor 0.6 m wide: east along rows 40-51, then north along columns 140-151.
  MaskGrid g(200, 200, 1);
  for (int r = 40; r <= 51; ++r)
    for (int c = 20; c <= 151; ++c) g(r, c) = 0;
  for (int r = 40; r <= 180; ++r)
    for (int c = 140; c <= 151; ++c) g(r, c) = 0;
  const MapStack m = full_map(g);
  const PlannerConfig cfg;
  const Cell start{45, 30}, target{170, 145};
  const Cell goals[] = {target};

  const double geo = oracle::graph_distance(g, {start})[target] * 0.05;
  // Straight runs plus the three 30 degree turns at the corner.
  const int optimal = static_cast<int>(std::ceil((geo - cfg.reach_distance) / 0.25)) + 3;

  Pose pose{m.grid_to_world(start), 0.0};
  int steps = 0;
  bool reached = false;
  while (steps < 10 * optimal) {
    const Cell agent = m.frame().to_cell(pose.position);
    const auto f = goal_field(m.obstacle(), m, goals, agent, cfg);
    const auto s = next_action(f, m, pose, cfg, false);
    REQUIRE(s.status != PlanStatus::kReplan);
    if (s.status == PlanStatus::kGoalReached) {
      reached = true;
      break;
    }
    ++steps;
    if (s.action == Action::kTurnLeft) pose.heading = wrap_degrees(pose.heading - 30.0);
    else if (s.action == Action::kTurnRight) pose.heading = wrap_degrees(pose.heading + 30.0);
    else if (s.action == Action::kMoveForward) {
      const Vec2 next = pose.position + heading_vector(pose.heading) * 0.25;
      REQUIRE_FALSE(m.is_obstacle(m.frame().to_cell(next)));
      pose.position = next;
    }
  }
  CHECK(reached);
  CHECK(steps <= 1.5 * optimal);
  MESSAGE("corner: ", steps, " steps, optimal ", optimal);
}

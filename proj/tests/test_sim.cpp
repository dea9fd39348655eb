#include <doctest.h>

#include <cmath>

#include "frontnav/sim.hpp"
#include "oracle.hpp"

using namespace frontnav;

namespace {

// 40 x 40 cells at 0.1 m with a "sofa" block and a wall at x = 3.0 m that
// stops short of the top edge.
Scene room() {
  Grid<std::int16_t> cells(40, 40, Scene::kFree);
  for (int r = 0; r < 35; ++r) cells(r, 30) = Scene::kWall;
  for (int r = 5; r < 8; ++r)
    for (int c = 5; c < 8; ++c) cells(r, c) = 1;
  return Scene(0.1, {"chair", "sofa", "tv"}, {0, 1}, cells);
}

EpisodeSpec spec_at(Vec2 p, double heading, std::string target = "sofa") {
  return {0, "room", p, heading, std::move(target), 3};
}

}  // namespace

TEST_CASE("reset places the agent and validates the spec") {
  const Scene s = room();
  Simulator sim(s);
  auto [state, obs] = sim.reset(spec_at({2.05, 2.05}, 0.0));
  CHECK(state.pose.position.x == 2.05);
  CHECK(state.pose.position.y == 2.05);
  CHECK(obs.rays.size() == 180);
  CHECK_THROWS_AS(sim.reset(spec_at({0.65, 0.65}, 0.0)), EpisodeError);
  CHECK_THROWS_AS(sim.reset(spec_at({2.05, 2.05}, 0.0, "tv")), EpisodeError);
  CHECK_THROWS_AS(sim.reset(spec_at({2.05, 2.05}, 0.0, "lamp")), EpisodeError);
}

TEST_CASE("forward moves 0.25 m along the heading") {
  const Scene s = room();
  Simulator sim(s);
  sim.reset(spec_at({1.05, 2.05}, 0.0));
  sim.step(Action::kMoveForward);
  CHECK(sim.state().pose.position.x == doctest::Approx(1.30).epsilon(1e-12));
  CHECK(sim.state().pose.position.y == doctest::Approx(2.05).epsilon(1e-12));
  CHECK(sim.state().path_length == doctest::Approx(0.25));

  sim.reset(spec_at({1.05, 2.05}, 90.0));
  sim.step(Action::kMoveForward);
  CHECK(sim.state().pose.position.y == doctest::Approx(2.30));
}

TEST_CASE("blocked forward leaves the position unchanged") {
  const Scene s = room();
  Simulator sim(s);
  sim.reset(spec_at({2.95, 2.05}, 0.0));
  sim.step(Action::kMoveForward);
  CHECK(sim.state().pose.position.x == 2.95);
  CHECK(sim.state().path_length == 0.0);
}

TEST_CASE("turn sign convention") {
  const Scene s = room();
  Simulator sim(s);
  sim.reset(spec_at({2.05, 2.05}, 0.0));
  sim.step(Action::kTurnLeft);
  CHECK(sim.state().pose.heading == 330.0);
  sim.step(Action::kTurnRight);
  sim.step(Action::kTurnRight);
  CHECK(sim.state().pose.heading == 30.0);
  sim.step(Action::kLookUp);
  sim.step(Action::kLookDown);
  CHECK(sim.state().pose.heading == 30.0);
  CHECK(sim.state().pose.position.x == 2.05);
}

TEST_CASE("twelve turns come back exactly") {
  const Scene s = room();
  Simulator sim(s);
  sim.reset(spec_at({2.05, 2.05}, 60.0));
  for (int i = 0; i < 12; ++i) sim.step(Action::kTurnRight);
  CHECK(sim.state().pose.heading == 60.0);
  for (int i = 0; i < 12; ++i) sim.step(Action::kTurnLeft);
  CHECK(sim.state().pose.heading == 60.0);
}

TEST_CASE("stop near the target succeeds") {
  const Scene s = room();
  // Sofa cells span columns 5-7; this point sits in column 11, four cells over.
  const Vec2 p{1.15, 0.65};
  MaskGrid blocked(s.rows(), s.cols(), 0);
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) blocked(r, c) = s.cells()(r, c) == Scene::kWall;
  const auto d = oracle::graph_distance(blocked, s.cells_of(1));
  const double geo = d[s.frame().to_cell(p)] * s.resolution();
  CHECK(geo == doctest::Approx(0.4));
  REQUIRE(geo <= 1.0);

  Simulator sim(s);
  sim.reset(spec_at(p, 0.0));
  sim.step(Action::kStop);
  CHECK(sim.outcome() == Outcome::kSuccess);
  CHECK_THROWS_AS(sim.step(Action::kMoveForward), EpisodeError);

  sim.reset(spec_at({2.85, 3.85}, 0.0));
  sim.step(Action::kStop);
  CHECK(sim.outcome() == Outcome::kFailure);
}

TEST_CASE("step cap ends the episode in failure") {
  const Scene s = room();
  SimConfig cfg;
  cfg.max_steps = 20;
  Simulator sim(s, cfg);
  sim.reset(spec_at({2.05, 2.05}, 0.0));
  for (int i = 0; i < 20; ++i) sim.step(Action::kTurnLeft);
  CHECK(sim.outcome() == Outcome::kFailure);
  CHECK(sim.state().steps_taken == 20);
  CHECK_THROWS_AS(sim.step(Action::kTurnLeft), EpisodeError);
}

TEST_CASE("ray to a wall 1 m ahead") {
  const Scene s = room();
  const Pose pose{{2.0, 2.05}, 0.0};
  const Observation obs = observe(s, pose, SimConfig{});
  const Ray* best = &obs.rays.front();
  for (const Ray& r : obs.rays)
    if (std::abs(r.bearing) < std::abs(best->bearing)) best = &r;
  REQUIRE(best->hit);
  const double expected = 1.0 / std::cos(best->bearing * M_PI / 180.0);
  CHECK(std::abs(best->hit_distance - expected) <= s.resolution() / 2);
  CHECK_FALSE(best->hit_category.has_value());
}

TEST_CASE("empty region sees nothing") {
  const Scene s(0.1, {"chair"}, {0}, Grid<std::int16_t>(100, 100, Scene::kFree));
  const Observation obs = observe(s, {{5.0, 5.0}, 45.0}, SimConfig{});
  for (const Ray& r : obs.rays) {
    CHECK_FALSE(r.hit);
    CHECK(r.hit_distance == 5.0);
    CHECK_FALSE(r.hit_category.has_value());
  }
}

TEST_CASE("observations are deterministic") {
  const Scene s = generate_scene(3);
  const Pose pose{{1.55, 1.55}, 120.0};
  SimConfig cfg;
  CHECK(observe(s, pose, cfg) == observe(s, pose, cfg));
  cfg.label_noise = 0.3;
  std::mt19937_64 a(5), b(5);
  CHECK(observe(s, pose, cfg, &a) == observe(s, pose, cfg, &b));
}

TEST_CASE("episode spec JSON round-trip") {
  const EpisodeSpec e{4, "scene_001", {1.25, 3.5}, 90.0, "bed", 99};
  const EpisodeSpec back = parse_episode_spec(serialize_episode_spec(e));
  CHECK(back.id == 4);
  CHECK(back.scene == "scene_001");
  CHECK(back.start.x == 1.25);
  CHECK(back.start.y == 3.5);
  CHECK(back.heading == 90.0);
  CHECK(back.target == "bed");
  CHECK(back.seed == 99);
}

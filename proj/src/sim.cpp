#include "frontnav/sim.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace frontnav {

using json = nlohmann::json;

std::string_view to_string(Action a) {
  switch (a) {
    case Action::kMoveForward: return "move_forward";
    case Action::kTurnLeft: return "turn_left";
    case Action::kTurnRight: return "turn_right";
    case Action::kLookUp: return "look_up";
    case Action::kLookDown: return "look_down";
    case Action::kStop: return "stop";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kRunning: return "running";
    case Outcome::kSuccess: return "success";
    case Outcome::kFailure: return "failure";
  }
  return "?";
}

bool operator==(const Observation& a, const Observation& b) {
  if (a.rays.size() != b.rays.size()) return false;
  if (a.agent_pose.position.x != b.agent_pose.position.x || a.agent_pose.position.y != b.agent_pose.position.y ||
      a.agent_pose.heading != b.agent_pose.heading)
    return false;
  for (std::size_t i = 0; i < a.rays.size(); ++i) {
    const auto& x = a.rays[i];
    const auto& y = b.rays[i];
    if (x.bearing != y.bearing || x.hit_distance != y.hit_distance || x.hit_category != y.hit_category ||
        x.hit != y.hit)
      return false;
  }
  return true;
}

EpisodeSpec parse_episode_spec(const std::string& json_line) {
  try {
    const auto j = json::parse(json_line);
    EpisodeSpec spec;
    spec.id = j.at("id").get<int>();
    spec.scene = j.value("scene", std::string{});
    const auto start = j.at("start").get<std::vector<double>>();
    if (start.size() != 2) throw EpisodeError("episode start must be [x, y]");
    spec.start = {start[0], start[1]};
    spec.heading = j.value("heading", 0.0);
    spec.target = j.at("target").get<std::string>();
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
  } catch (const json::exception& e) {
    throw EpisodeError(std::string("episode spec: ") + e.what());
  }
}

std::string serialize_episode_spec(const EpisodeSpec& spec) {
  json j = {{"id", spec.id},
            {"scene", spec.scene},
            {"start", {spec.start.x, spec.start.y}},
            {"heading", spec.heading},
            {"target", spec.target},
            {"seed", spec.seed}};
  return j.dump();
}

std::vector<EpisodeSpec> load_episode_specs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EpisodeError("cannot open episode file " + path);
  std::vector<EpisodeSpec> specs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    specs.push_back(parse_episode_spec(line));
  }
  return specs;
}

void save_episode_specs(const std::vector<EpisodeSpec>& specs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw EpisodeError("cannot write episode file " + path);
  for (const auto& s : specs) out << serialize_episode_spec(s) << '\n';
}

Observation observe(const Scene& scene, const Pose& pose, const SimConfig& config, std::mt19937_64* rng) {
  Observation obs;
  obs.agent_pose = pose;
  obs.rays.reserve(config.ray_count);
  const GridFrame frame = scene.frame();
  const double span = config.ray_count > 1 ? config.fov / (config.ray_count - 1) : 0.0;
  const double first = config.ray_count > 1 ? -0.5 * config.fov : 0.0;

  for (int i = 0; i < config.ray_count; ++i) {
    Ray ray;
    ray.bearing = first + i * span;
    ray.hit_distance = config.max_range;
    const Vec2 dir = heading_vector(pose.heading + ray.bearing);
    traverse_ray(frame, pose.position, dir, config.max_range, [&](Cell c, double t) {
      if (!scene.occupied_or_outside(c)) return true;
      ray.hit = true;
      ray.hit_distance = std::max(t, 1e-9);
      ray.hit_category = scene.category_at(c);
      return false;
    });
    if (ray.hit_category && config.label_noise > 0.0 && rng) {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      if (coin(*rng) < config.label_noise) {
        std::uniform_int_distribution<int> pick(0, scene.category_count() - 1);
        ray.hit_category = pick(*rng);
      }
    }
    obs.rays.push_back(ray);
  }
  return obs;
}

ArrivalField target_distance_field(const Scene& scene, CategoryId category) {
  MaskGrid blocked(scene.rows(), scene.cols(), 0);
  std::vector<Cell> sources;
  const auto& cells = scene.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto v = cells.data()[i];
    if (v == category) sources.push_back(cells.cell_of(i));
    else if (v != Scene::kFree) blocked.data()[i] = 1;
  }
  if (sources.empty()) throw EpisodeError("target category absent from scene");
  FmmOptions opt;
  opt.resolution = scene.resolution();
  return fmm_field(blocked, sources, opt);
}

Simulator::Simulator(const Scene& scene, SimConfig config) : scene_(scene), config_(config) {}

std::pair<AgentState, Observation> Simulator::reset(const EpisodeSpec& spec) {
  const auto target = scene_.find_category(spec.target);
  if (!target) throw EpisodeError("target '" + spec.target + "' is not a scene category");
  if (!scene_.has_category(*target)) throw EpisodeError("target '" + spec.target + "' does not occur in the scene");
  if (!scene_.free_at(spec.start)) throw EpisodeError("episode start is not a free cell");

  target_field_ = target_distance_field(scene_, *target);
  state_ = AgentState{};
  state_.pose = {spec.start, wrap_degrees(spec.heading)};
  state_.target = *target;
  outcome_ = Outcome::kRunning;
  noise_rng_.seed(config_.noise_seed ^ (spec.seed * 0x9E3779B97F4A7C15ULL));
  started_ = true;
  return {state_, observe(scene_, state_.pose, config_, &noise_rng_)};
}

bool Simulator::segment_free(Vec2 from, Vec2 to) const {
  const Vec2 d = to - from;
  const double len = d.norm();
  const int samples = std::max(1, static_cast<int>(std::ceil(len / (0.25 * scene_.resolution()))));
  for (int i = 1; i <= samples; ++i) {
    if (!scene_.free_at(from + d * (static_cast<double>(i) / samples))) return false;
  }
  return true;
}

Observation Simulator::step(Action action) {
  if (!started_ || outcome_ != Outcome::kRunning) throw EpisodeError("step called after the episode ended");

  switch (action) {
    case Action::kMoveForward: {
      const Vec2 next = state_.pose.position + heading_vector(state_.pose.heading) * config_.forward_step;
      if (segment_free(state_.pose.position, next)) {
        state_.pose.position = next;
        state_.path_length += config_.forward_step;
      }
      break;
    }
    case Action::kTurnLeft:
      state_.pose.heading = wrap_degrees(state_.pose.heading - config_.turn_angle);
      break;
    case Action::kTurnRight:
      state_.pose.heading = wrap_degrees(state_.pose.heading + config_.turn_angle);
      break;
    case Action::kLookUp:
    case Action::kLookDown:
      break;
    case Action::kStop:
      outcome_ = distance_to_target() <= config_.success_distance ? Outcome::kSuccess : Outcome::kFailure;
      break;
  }
  ++state_.steps_taken;
  if (outcome_ == Outcome::kRunning && state_.steps_taken >= config_.max_steps) outcome_ = Outcome::kFailure;
  return observe(scene_, state_.pose, config_, &noise_rng_);
}

double Simulator::distance_to_target(Vec2 position) const {
  return target_field_.at(scene_.frame().to_cell(position));
}

}  // namespace frontnav

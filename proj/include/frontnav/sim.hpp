#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frontnav/fmm.hpp"
#include "frontnav/scene.hpp"

namespace frontnav {

enum class Action { kMoveForward, kTurnLeft, kTurnRight, kLookUp, kLookDown, kStop };
inline constexpr int kActionCount = 6;

std::string_view to_string(Action a);

enum class Outcome { kRunning, kSuccess, kFailure };

std::string_view to_string(Outcome o);

struct SimConfig {
  double forward_step = 0.25;  // meters
  double turn_angle = 30.0;    // degrees
  int max_steps = 500;
  double success_distance = 1.0;  // meters, geodesic
  double fov = 90.0;              // degrees
  int ray_count = 180;
  double max_range = 5.0;  // meters
  double label_noise = 0.0;
  std::uint64_t noise_seed = 0;
};

struct Pose {
  Vec2 position;
  double heading = 0.0;  // degrees in [0, 360)
};

struct AgentState {
  Pose pose;
  int steps_taken = 0;
  CategoryId target = 0;
  double path_length = 0.0;  // meters actually travelled
};

struct Ray {
  double bearing = 0.0;  // degrees relative to heading, positive = clockwise
  double hit_distance = 0.0;
  std::optional<CategoryId> hit_category;
  bool hit = false;
};

struct Observation {
  std::vector<Ray> rays;
  Pose agent_pose;

  friend bool operator==(const Observation& a, const Observation& b);
};

struct EpisodeSpec {
  int id = 0;
  std::string scene;
  Vec2 start;
  double heading = 0.0;
  std::string target;
  std::uint64_t seed = 0;
};

class EpisodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EpisodeSpec parse_episode_spec(const std::string& json_line);
std::string serialize_episode_spec(const EpisodeSpec& spec);
std::vector<EpisodeSpec> load_episode_specs(const std::string& path);
void save_episode_specs(const std::vector<EpisodeSpec>& specs, const std::string& path);

/// Ray-casts the scene from `pose`. Label noise, when configured, draws from `rng`.
Observation observe(const Scene& scene, const Pose& pose, const SimConfig& config,
                    std::mt19937_64* rng = nullptr);

/// Geodesic distance field (meters) from every free cell to the nearest cell
/// of `category`, measured between cell centres.
ArrivalField target_distance_field(const Scene& scene, CategoryId category);

/// One episode against an immutable scene. Sequential; not thread-safe.
class Simulator {
 public:
  Simulator(const Scene& scene, SimConfig config = {});

  /// Starts an episode; throws EpisodeError if the spec does not fit the scene.
  std::pair<AgentState, Observation> reset(const EpisodeSpec& spec);
  /// Applies one action. Throws EpisodeError once the episode has ended.
  Observation step(Action action);

  const AgentState& state() const { return state_; }
  Outcome outcome() const { return outcome_; }
  const SimConfig& config() const { return config_; }
  const Scene& scene() const { return scene_; }

  /// Geodesic distance from a position to the episode's target (meters).
  double distance_to_target(Vec2 position) const;
  double distance_to_target() const { return distance_to_target(state_.pose.position); }

 private:
  bool segment_free(Vec2 from, Vec2 to) const;

  const Scene& scene_;
  SimConfig config_;
  AgentState state_;
  Outcome outcome_ = Outcome::kFailure;
  std::mt19937_64 noise_rng_;
  ArrivalField target_field_;
  bool started_ = false;
};

}  // namespace frontnav

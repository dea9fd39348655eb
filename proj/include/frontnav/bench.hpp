#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frontnav/frontier.hpp"
#include "frontnav/planner.hpp"
#include "frontnav/policy.hpp"
#include "frontnav/relevance.hpp"
#include "frontnav/scene.hpp"
#include "frontnav/sim.hpp"

namespace frontnav {

enum class PolicyKind {
  kZeroShot,
  kFeedForward,
  kOffline,
  kRandomWalk,
  kNearestFrontier,
  kRandomMapSample,
  kCuOnly,
};

std::string_view to_string(PolicyKind p);
/// Accepts the CLI names (l3mvn_offline, random_walk, ...); throws std::invalid_argument.
PolicyKind parse_policy(std::string_view name);
const std::vector<PolicyKind>& all_policies();

/// Oracle path length l_i: geodesic distance from `start` to the nearest
/// target cell minus the success distance, floored at 0. Throws
/// EpisodeError when the target cannot be reached.
double shortest_path(const Scene& scene, Vec2 start, CategoryId target, double success_distance);

struct AgentConfig {
  SimConfig sim;
  PlannerConfig planner;
  FrontierConfig frontier;
  ScoreBound bound;
  int replan_interval = 25;
  double object_window = 3.0;  // meters, side of the square searched for frontier objects
  int map_size = 480;
  double map_resolution = 0.05;
};

struct DecisionRecord {
  int step = 0;
  GoalDecision decision;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

/// One JSON object per decision:
/// {"policy", "episode", "step", "branch", "chosen", "scores": [{"id", "llm", "cu"}]}.
std::string decision_json(std::string_view policy, int episode, const DecisionRecord& record);

struct EpisodeResult {
  int spec_id = 0;
  bool success = false;
  double path_length = 0.0;     // p_i
  double oracle_length = 0.0;   // l_i
  double final_distance = 0.0;  // geodesic, meters
  int steps = 0;
  std::string reason;  // why a failed episode ended
  std::vector<DecisionRecord> decisions;

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

struct RenderOptions {
  std::filesystem::path dir;
};

/// Runs one episode. `scorer` supplies S^LLM for the l3mvn policies and is
/// ignored by the baselines.
EpisodeResult run_episode(const Scene& scene, const EpisodeSpec& spec, PolicyKind policy, const AgentConfig& config,
                          RelevanceScorer* scorer, const CoocTable* table, const RenderOptions* render = nullptr);

/// SPL term S_i l_i / max(l_i, p_i); the l_i = p_i = 0 case is S_i.
double spl_term(bool success, double oracle_length, double path_length);

struct PolicyReport {
  std::string policy;
  double sr = 0.0;
  double spl = 0.0;
  double dtg = 0.0;
  int episodes = 0;
};

PolicyReport aggregate(const std::vector<EpisodeResult>& results);

struct BenchmarkReport {
  std::vector<PolicyReport> rows;
  std::uint64_t seed = 0;

  /// Header `policy,SR,SPL,DTG,episodes,seed`, fixed 4-decimal floats.
  std::string to_csv() const;
};

/// Random start/target specs for one scene. Targets cycle through
/// `default_targets()` starting at `first_id`, skipping targets the scene
/// lacks; starts keep 0.2 m clearance
/// and lie at least `min_oracle` meters (oracle length) from the target.
std::vector<EpisodeSpec> generate_episodes(const Scene& scene, const std::string& scene_name, int count, int first_id,
                                           std::uint64_t seed, double min_oracle, double success_distance);

inline GeneratorParams bench_generator() {
  GeneratorParams g;
  g.min_room_rows = g.min_room_cols = 4;
  g.max_room_rows = g.max_room_cols = 5;
  return g;
}

struct BenchConfig {
  std::uint64_t seed = 7;
  int scenes = 100;
  int episodes_per_scene = 2;
  int train_scenes = 200;
  std::vector<PolicyKind> policies = all_policies();
  double min_oracle = 5.0;
  int threads = 1;
  AgentConfig agent;
  /// Apartments large enough that the step cap binds.
  GeneratorParams generator = bench_generator();
  std::optional<std::filesystem::path> head_model;
  std::optional<std::filesystem::path> embedding_cache;
  std::optional<std::string> lm_url;
  std::optional<std::filesystem::path> audit;
};

/// Reads a JSON bench config; missing keys keep their defaults. Throws
/// std::invalid_argument on unknown policies or bad values.
BenchConfig parse_bench_config(const std::string& json_text);
BenchConfig load_bench_config(const std::filesystem::path& path);

/// Seeds for evaluation and co-occurrence training scenes never overlap.
std::uint64_t eval_scene_seed(std::uint64_t seed, int index);
std::uint64_t train_scene_seed(std::uint64_t seed, int index);

using ProgressLog = std::function<void(const std::string&)>;

struct BenchOutput {
  BenchmarkReport report;
  /// Per policy, in config order; results in spec id order.
  std::vector<std::vector<EpisodeResult>> results;
};

BenchOutput run_benchmark(const BenchConfig& config, const ProgressLog& log = {});

/// Labelled rooms for head training: each present target labels the room's other objects.
std::vector<LabeledRoom> labeled_rooms(const std::vector<RoomSample>& rooms);

}  // namespace frontnav

#include "frontnav/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "frontnav/image_io.hpp"
#include "frontnav/map_stack.hpp"

namespace frontnav {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

struct PolicyName {
  PolicyKind kind;
  std::string_view name;
};

constexpr PolicyName kPolicyNames[] = {
    {PolicyKind::kZeroShot, "l3mvn_zero_shot"},
    {PolicyKind::kFeedForward, "l3mvn_feed_forward"},
    {PolicyKind::kOffline, "l3mvn_offline"},
    {PolicyKind::kRandomWalk, "random_walk"},
    {PolicyKind::kNearestFrontier, "nearest_frontier"},
    {PolicyKind::kRandomMapSample, "random_map_sample"},
    {PolicyKind::kCuOnly, "frontier_cu_only"},
};

bool uses_language(PolicyKind p) {
  return p == PolicyKind::kZeroShot || p == PolicyKind::kFeedForward || p == PolicyKind::kOffline;
}

}  // namespace

std::string_view to_string(PolicyKind p) {
  for (const auto& n : kPolicyNames)
    if (n.kind == p) return n.name;
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  for (const auto& n : kPolicyNames)
    if (n.name == name) return n.kind;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

const std::vector<PolicyKind>& all_policies() {
  static const std::vector<PolicyKind> all = [] {
    std::vector<PolicyKind> v;
    for (const auto& n : kPolicyNames) v.push_back(n.kind);
    return v;
  }();
  return all;
}

double shortest_path(const Scene& scene, Vec2 start, CategoryId target, double success_distance) {
  const ArrivalField field = target_distance_field(scene, target);
  const double d = field.at(scene.frame().to_cell(start));
  if (d == kUnreachable) throw EpisodeError("target unreachable from the start position");
  return std::max(0.0, d - success_distance);
}

double spl_term(bool success, double oracle_length, double path_length) {
  if (!success) return 0.0;
  const double denom = std::max(oracle_length, path_length);
  return denom > 0.0 ? oracle_length / denom : 1.0;
}

PolicyReport aggregate(const std::vector<EpisodeResult>& results) {
  PolicyReport r;
  r.episodes = static_cast<int>(results.size());
  if (results.empty()) return r;
  for (const auto& e : results) {
    r.sr += e.success ? 1.0 : 0.0;
    r.spl += spl_term(e.success, e.oracle_length, e.path_length);
    r.dtg += e.final_distance;
  }
  r.sr /= results.size();
  r.spl /= results.size();
  r.dtg /= results.size();
  return r;
}

std::string BenchmarkReport::to_csv() const {
  std::string out = "policy,SR,SPL,DTG,episodes,seed\n";
  char line[256];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%s,%.4f,%.4f,%.4f,%d,%llu\n", row.policy.c_str(), row.sr, row.spl, row.dtg,
                  row.episodes, static_cast<unsigned long long>(seed));
    out += line;
  }
  return out;
}

std::string decision_json(std::string_view policy, int episode, const DecisionRecord& record) {
  nlohmann::ordered_json j;
  j["policy"] = policy;
  j["episode"] = episode;
  j["step"] = record.step;
  j["branch"] = to_string(record.decision.branch);
  j["chosen"] = record.decision.chosen;
  if (record.decision.target_cell) j["target_cell"] = {record.decision.target_cell->row, record.decision.target_cell->col};
  auto scores = nlohmann::ordered_json::array();
  for (const auto& s : record.decision.scores) scores.push_back({{"id", s.id}, {"llm", s.llm}, {"cu", s.cu}});
  j["scores"] = std::move(scores);
  return j.dump();
}

// ---------------------------------------------------------------------------
// Episode loop

namespace {

struct Goal {
  std::vector<Cell> cells;
  Cell anchor;
  bool approach = false;
};

Grid<Rgb> composite(const MapStack& map, const std::vector<Frontier>& frontiers, Cell agent,
                    const std::optional<Goal>& goal) {
  const int M = map.size();
  Grid<Rgb> img(M, M, Rgb{200, 200, 200});
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < M; ++c) {
      if (map.obstacle()(r, c)) img(r, c) = {0, 0, 0};
      else if (map.explored()(r, c)) img(r, c) = {255, 255, 255};
    }
  for (CategoryId k = 0; k < map.category_count(); ++k) {
    if (map.semantic_counts()[k] == 0) continue;
    const std::uint64_t h = (static_cast<std::uint64_t>(k) + 1) * kGolden;
    const Rgb color{static_cast<std::uint8_t>(60 + (h >> 8) % 160), static_cast<std::uint8_t>(60 + (h >> 24) % 160),
                    static_cast<std::uint8_t>(60 + (h >> 40) % 160)};
    const auto& ch = map.semantic(k);
    for (std::size_t i = 0; i < ch.size(); ++i)
      if (ch.data()[i]) img.data()[i] = color;
  }
  for (const auto& f : frontiers)
    for (const Cell& c : f.cells) img[c] = {255, 0, 0};
  auto dot = [&](Cell at, Rgb color) {
    for (int dr = -2; dr <= 2; ++dr)
      for (int dc = -2; dc <= 2; ++dc)
        if (img.contains(at.row + dr, at.col + dc)) img(at.row + dr, at.col + dc) = color;
  };
  if (goal) dot(goal->anchor, {0, 180, 0});
  dot(agent, {0, 0, 255});
  // Rows grow with world y; flip so +y points up in the image.
  Grid<Rgb> flipped(M, M);
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < M; ++c) flipped(r, c) = img(M - 1 - r, c);
  return flipped;
}

class EpisodeRunner {
 public:
  EpisodeRunner(const Scene& scene, const EpisodeSpec& spec, PolicyKind policy, const AgentConfig& config,
                RelevanceScorer* scorer, const CoocTable* table, const RenderOptions* render)
      : scene_(scene),
        spec_(spec),
        policy_(policy),
        config_(config),
        scorer_(scorer),
        table_(table),
        render_(render),
        sim_(scene, config.sim),
        map_(config.map_size, config.map_resolution, scene.category_count(), spec.start),
        collisions_(config.map_size, config.map_size, 0),
        rng_(spec.seed * kGolden + static_cast<std::uint64_t>(policy) + 1) {
    if (uses_language(policy) && (!scorer || !table)) throw std::invalid_argument("language policies need a scorer and table");
  }

  EpisodeResult run() {
    EpisodeResult result;
    result.spec_id = spec_.id;
    target_ = scene_.category_id(spec_.target);
    result.oracle_length = shortest_path(scene_, spec_.start, target_, config_.sim.success_distance);
    if (table_) target_index_ = table_->target_index(spec_.target);

    auto [state, obs] = sim_.reset(spec_);
    map_.integrate(obs);
    try {
      while (sim_.outcome() == Outcome::kRunning) {
        const Action action = policy_ == PolicyKind::kRandomWalk ? random_action() : planned_action();
        const Pose before = sim_.state().pose;
        map_.integrate(sim_.step(action));
        if (action == Action::kMoveForward && sim_.state().pose.position.x == before.position.x &&
            sim_.state().pose.position.y == before.position.y) {
          mark_collision(before);
        }
        ++steps_since_plan_;
        if (stop_reason_.empty() && action == Action::kStop) stop_reason_ = "stopped outside the success distance";
      }
    } catch (const std::exception& e) {
      reason_ = e.what();
    }
    if (render_) write_render(sim_.state().steps_taken);

    result.success = sim_.outcome() == Outcome::kSuccess;
    result.path_length = sim_.state().path_length;
    result.final_distance = sim_.distance_to_target();
    result.steps = sim_.state().steps_taken;
    if (!result.success) {
      if (!reason_.empty()) result.reason = reason_;
      else if (!stop_reason_.empty() && result.steps < config_.sim.max_steps) result.reason = stop_reason_;
      else result.reason = "step limit";
    }
    result.decisions = std::move(decisions_);
    return result;
  }

 private:
  Action random_action() {
    std::uniform_int_distribution<int> pick(0, kActionCount - 1);
    return static_cast<Action>(pick(rng_));
  }

  Cell agent_cell() const { return map_.frame().to_cell(sim_.state().pose.position); }

  void mark_collision(const Pose& pose) {
    const Vec2 ahead = pose.position + heading_vector(pose.heading) * 0.15;
    const Cell c = map_.frame().to_cell(ahead);
    if (collisions_.contains(c) && !collisions_[c]) {
      collisions_[c] = 1;
      ++collision_version_;
    }
  }

  bool blacklisted(Cell c) const {
    for (const Cell& b : blacklist_)
      if (std::hypot(c.row - b.row, c.col - b.col) <= kBlacklistRadius) return true;
    return false;
  }

  std::optional<Goal> decide() {
    const int step = sim_.state().steps_taken;
    const Cell agent = agent_cell();
    const MaskGrid obstacles = planning_obstacles(map_, &collisions_);
    const ArrivalField from_agent = agent_field(obstacles, map_, agent, config_.planner);

    if (step >= suppress_target_until_) {
      if (const auto cell = check_target_visible(map_, target_, from_agent)) {
        GoalDecision d;
        d.branch = Branch::kTargetVisible;
        d.target_cell = cell;
        decisions_.push_back({step, d});
        return Goal{{*cell}, *cell, true};
      }
    }

    frontiers_ = extract_frontiers(map_, config_.frontier);
    std::erase_if(frontiers_, [&](const Frontier& f) { return blacklisted(f.centroid); });

    if (policy_ == PolicyKind::kRandomMapSample) {
      std::vector<Cell> pool;
      const CellBox box = map_.explored_box();
      for (int r = box.row0; r <= box.row1; ++r)
        for (int c = box.col0; c <= box.col1; ++c) {
          const Cell cell{r, c};
          if (map_.is_explored(cell) && !map_.is_obstacle(cell) && from_agent.reachable(cell) && !blacklisted(cell))
            pool.push_back(cell);
        }
      if (pool.empty()) return std::nullopt;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const Cell chosen = pool[pick(rng_)];
      GoalDecision d;
      d.branch = Branch::kCu;
      d.chosen = -1;
      d.target_cell = chosen;
      decisions_.push_back({step, d});
      return Goal{{chosen}, chosen, false};
    }

    if (frontiers_.empty()) return std::nullopt;
    score_frontiers(frontiers_, map_, from_agent, config_.frontier);

    std::vector<double> raw;
    for (const auto& f : frontiers_) raw.push_back(f.score_cu);
    const std::vector<double> cu = normalize_cu(raw);
    std::vector<CandidateScore> candidates;
    for (std::size_t i = 0; i < frontiers_.size(); ++i) candidates.push_back({frontiers_[i].id, 0.0, cu[i]});

    GoalDecision d;
    if (policy_ == PolicyKind::kNearestFrontier) {
      d.branch = Branch::kCu;
      d.scores = candidates;
      std::size_t best = 0;
      for (std::size_t i = 1; i < frontiers_.size(); ++i)
        if (frontiers_[i].cost < frontiers_[best].cost) best = i;
      d.chosen = frontiers_[best].id;
    } else {
      if (uses_language(policy_)) {
        for (std::size_t i = 0; i < frontiers_.size(); ++i) {
          auto& f = frontiers_[i];
          f.nearby_objects = objects_near(map_, f, config_.object_window, *table_, scene_.category_names());
          std::vector<std::string> names;
          for (CategoryId k : f.nearby_objects) names.push_back(scene_.category_names()[k]);
          f.score_llm = target_index_ ? scorer_->score(names, *target_index_) : 0.0;
          candidates[i].llm = f.score_llm;
        }
      }
      d = select_frontier(candidates, config_.bound);
    }
    decisions_.push_back({step, d});
    const auto it = std::find_if(frontiers_.begin(), frontiers_.end(), [&](const Frontier& f) { return f.id == d.chosen; });
    return Goal{{it->centroid}, it->centroid, false};
  }

  void drop_goal() {
    if (goal_ && !goal_->approach) blacklist_.push_back(goal_->anchor);
    if (goal_ && goal_->approach) suppress_target_until_ = sim_.state().steps_taken + config_.replan_interval;
    goal_.reset();
    field_.reset();
  }

  // Called on reaching a frontier goal. The frontier only clears once the
  // sensor faces it, so queue the turns toward the nearby unexplored mass.
  // A place reached twice is blacklisted.
  void arrive() {
    const Cell anchor = goal_->anchor;
    const bool again = std::any_of(reached_.begin(), reached_.end(), [&](Cell c) {
      return std::hypot(c.row - anchor.row, c.col - anchor.col) <= kBlacklistRadius;
    });
    if (again) blacklist_.push_back(anchor);
    reached_.push_back(anchor);
    goal_.reset();
    field_.reset();

    const Pose& pose = sim_.state().pose;
    const Cell a = agent_cell();
    const int R = static_cast<int>(std::round(1.5 / map_.resolution()));
    double sx = 0.0, sy = 0.0;
    for (int dr = -R; dr <= R; ++dr)
      for (int dc = -R; dc <= R; ++dc) {
        const Cell c{a.row + dr, a.col + dc};
        if (dr * dr + dc * dc > R * R || !map_.in_bounds(c) || map_.is_explored(c)) continue;
        sx += dc;
        sy += dr;
      }
    if (sx == 0.0 && sy == 0.0) return;
    const double error = wrap_signed_degrees(std::atan2(sy, sx) * 180.0 / M_PI - pose.heading);
    const int turns = static_cast<int>(std::round(std::abs(error) / config_.sim.turn_angle));
    queued_.assign(turns, error > 0.0 ? Action::kTurnRight : Action::kTurnLeft);
  }

  Action planned_action() {
    if (!queued_.empty()) {
      const Action a = queued_.back();
      queued_.pop_back();
      return a;
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (!goal_ || steps_since_plan_ >= config_.replan_interval) {
        goal_ = decide();
        steps_since_plan_ = 0;
        field_.reset();
        if (render_) write_render(sim_.state().steps_taken);
        if (!goal_) {
          // Nothing to explore from here; look around before giving up.
          if (++empty_decisions_ <= 12) return Action::kTurnRight;
          stop_reason_ = "exploration complete without finding the target";
          return Action::kStop;
        }
        empty_decisions_ = 0;
      }
      const Cell agent = agent_cell();
      if (!field_ || field_version_ != version() || !field_->reachable(agent)) {
        try {
          field_ = goal_field(planning_obstacles(map_, &collisions_), map_, goal_->cells, agent, config_.planner);
          field_version_ = version();
        } catch (const FmmError&) {
          drop_goal();
          continue;
        }
      }
      const PlannerStep ps = next_action(*field_, map_, sim_.state().pose, config_.planner, goal_->approach);
      if (ps.status == PlanStatus::kAct) return ps.action;
      if (ps.status == PlanStatus::kGoalReached) {
        arrive();
        if (!queued_.empty()) {
          const Action a = queued_.back();
          queued_.pop_back();
          return a;
        }
        continue;
      }
      drop_goal();
    }
    return Action::kTurnRight;
  }

  std::uint64_t version() const { return map_.obstacle_version() * 1000003ULL + collision_version_; }

  void write_render(int step) const {
    std::filesystem::create_directories(render_->dir);
    map_.export_channels(render_->dir, step);
    char name[64];
    std::snprintf(name, sizeof name, "step_%04d.png", step);
    write_png(render_->dir / name, composite(map_, frontiers_, agent_cell(), goal_));
  }

  static constexpr double kBlacklistRadius = 10.0;  // cells

  const Scene& scene_;
  const EpisodeSpec& spec_;
  PolicyKind policy_;
  const AgentConfig& config_;
  RelevanceScorer* scorer_;
  const CoocTable* table_;
  const RenderOptions* render_;

  Simulator sim_;
  MapStack map_;
  MaskGrid collisions_;
  std::uint64_t collision_version_ = 0;
  std::mt19937_64 rng_;
  CategoryId target_ = 0;
  std::optional<std::size_t> target_index_;

  std::optional<Goal> goal_;
  std::optional<ArrivalField> field_;
  std::uint64_t field_version_ = 0;
  std::vector<Frontier> frontiers_;
  std::vector<Cell> blacklist_;
  std::vector<Cell> reached_;
  std::vector<Action> queued_;
  int steps_since_plan_ = 0;
  int suppress_target_until_ = 0;
  int empty_decisions_ = 0;
  std::vector<DecisionRecord> decisions_;
  std::string reason_;
  std::string stop_reason_;
};

}  // namespace

EpisodeResult run_episode(const Scene& scene, const EpisodeSpec& spec, PolicyKind policy, const AgentConfig& config,
                          RelevanceScorer* scorer, const CoocTable* table, const RenderOptions* render) {
  return EpisodeRunner(scene, spec, policy, config, scorer, table, render).run();
}

// ---------------------------------------------------------------------------
// Episode generation

std::vector<EpisodeSpec> generate_episodes(const Scene& scene, const std::string& scene_name, int count, int first_id,
                                           std::uint64_t seed, double min_oracle, double success_distance) {
  std::mt19937_64 rng(seed);
  const auto& targets = default_targets();
  const int clearance = static_cast<int>(std::ceil(0.2 / scene.resolution()));
  std::vector<EpisodeSpec> specs;
  for (int k = 0; k < count; ++k) {
    const int id = first_id + k;
    // Round-robin over targets; one missing from this scene passes its turn on.
    std::string target;
    std::optional<CategoryId> category;
    for (std::size_t k2 = 0; k2 < targets.size() && !category; ++k2) {
      target = targets[(static_cast<std::size_t>(id) + k2) % targets.size()];
      category = scene.find_category(target);
      if (category && !scene.has_category(*category)) category.reset();
    }
    if (!category) throw GenerationError("scene " + scene_name + " contains no target category");
    const ArrivalField field = target_distance_field(scene, *category);

    std::vector<Cell> pool;
    std::vector<Cell> fallback;
    double fallback_d = -1.0;
    for (int r = 0; r < scene.rows(); ++r)
      for (int c = 0; c < scene.cols(); ++c) {
        bool clear = true;
        for (int dr = -clearance; dr <= clearance && clear; ++dr)
          for (int dc = -clearance; dc <= clearance && clear; ++dc) {
            const Cell n{r + dr, c + dc};
            clear = scene.cells().contains(n) && !scene.occupied(n);
          }
        if (!clear) continue;
        const double d = field.at({r, c});
        if (d == kUnreachable) continue;
        if (d - success_distance >= min_oracle) pool.push_back({r, c});
        if (d > fallback_d) {
          fallback_d = d;
          fallback = {{r, c}};
        }
      }
    if (pool.empty()) pool = fallback;
    if (pool.empty()) throw GenerationError("no valid start cell in scene " + scene_name);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> turn(0, 11);
    EpisodeSpec spec;
    spec.id = id;
    spec.scene = scene_name;
    spec.start = scene.frame().center_of(pool[pick(rng)]);
    spec.heading = 30.0 * turn(rng);
    spec.target = target;
    spec.seed = rng();
    specs.push_back(spec);
  }
  return specs;
}

std::vector<LabeledRoom> labeled_rooms(const std::vector<RoomSample>& rooms) {
  std::vector<LabeledRoom> out;
  for (const auto& room : rooms)
    for (const auto& t : room.targets_present) {
      LabeledRoom l;
      l.target = t;
      for (const auto& o : room.objects)
        if (o != t) l.objects.push_back(o);
      out.push_back(std::move(l));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark driver

std::uint64_t eval_scene_seed(std::uint64_t seed, int index) { return (seed << 20) + static_cast<std::uint64_t>(index); }

std::uint64_t train_scene_seed(std::uint64_t seed, int index) {
  return (seed << 20) + (1ULL << 19) + static_cast<std::uint64_t>(index);
}

BenchConfig parse_bench_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bench config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("bench config must be a JSON object");
  BenchConfig c;
  auto positive_int = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 1)
      throw std::invalid_argument(std::string(key) + " must be a positive integer");
    out = j[key].get<int>();
  };
  auto non_negative = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number() || j[key].get<double>() < 0.0)
      throw std::invalid_argument(std::string(key) + " must be a non-negative number");
    out = j[key].get<double>();
  };
  static const std::set<std::string> known = {
      "seed", "scenes", "episodes_per_scene", "train_scenes", "policies", "min_oracle", "threads",
      "max_steps", "success_distance", "replan_interval", "local_range", "inflation_radius", "bound",
      "label_noise", "room_rows", "room_cols", "room_size", "head_model", "embedding_cache", "lm_url", "audit"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown bench config key '" + key + "'");

  try {
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
        throw std::invalid_argument("seed must be a non-negative integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    positive_int("scenes", c.scenes);
    positive_int("episodes_per_scene", c.episodes_per_scene);
    positive_int("train_scenes", c.train_scenes);
    positive_int("threads", c.threads);
    positive_int("max_steps", c.agent.sim.max_steps);
    positive_int("replan_interval", c.agent.replan_interval);
    non_negative("min_oracle", c.min_oracle);
    non_negative("success_distance", c.agent.sim.success_distance);
    non_negative("local_range", c.agent.planner.local_range);
    non_negative("inflation_radius", c.agent.planner.inflation_radius);
    non_negative("label_noise", c.agent.sim.label_noise);
    if (c.agent.sim.label_noise > 1.0) throw std::invalid_argument("label_noise must lie in [0, 1]");
    if (j.contains("policies")) {
      if (!j["policies"].is_array() || j["policies"].empty())
        throw std::invalid_argument("policies must be a non-empty array");
      c.policies.clear();
      for (const auto& p : j["policies"]) c.policies.push_back(parse_policy(p.get<std::string>()));
    }
    if (j.contains("bound")) {
      const auto& b = j["bound"];
      if (!b.is_array() || b.size() != 2) throw std::invalid_argument("bound must be [lower, upper]");
      c.agent.bound = {b[0].get<double>(), b[1].get<double>()};
      if (!(c.agent.bound.lower <= c.agent.bound.upper)) throw std::invalid_argument("bound lower exceeds upper");
    }
    auto range = [&](const char* key, auto& lo, auto& hi) {
      if (!j.contains(key)) return;
      const auto& v = j[key];
      if (!v.is_array() || v.size() != 2) throw std::invalid_argument(std::string(key) + " must be [min, max]");
      lo = v[0].get<std::remove_reference_t<decltype(lo)>>();
      hi = v[1].get<std::remove_reference_t<decltype(hi)>>();
      if (!(lo > 0 && lo <= hi)) throw std::invalid_argument(std::string(key) + " must satisfy 0 < min <= max");
    };
    range("room_rows", c.generator.min_room_rows, c.generator.max_room_rows);
    range("room_cols", c.generator.min_room_cols, c.generator.max_room_cols);
    range("room_size", c.generator.min_room_size, c.generator.max_room_size);
    if (j.contains("head_model")) c.head_model = j["head_model"].get<std::string>();
    if (j.contains("embedding_cache")) c.embedding_cache = j["embedding_cache"].get<std::string>();
    if (j.contains("lm_url")) c.lm_url = j["lm_url"].get<std::string>();
    if (j.contains("audit")) c.audit = j["audit"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad bench config value: ") + e.what());
  }
  return c;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read bench config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bench_config(ss.str());
}

namespace {

/// Serialises access to an embedder shared across worker threads.
class LockedEmbedder : public EmbeddingSource {
 public:
  explicit LockedEmbedder(std::shared_ptr<EmbeddingSource> inner) : inner_(std::move(inner)) {}
  std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) override {
    std::lock_guard lock(mu_);
    return inner_->embed(sentences);
  }
  int dim() const override { return inner_->dim(); }

 private:
  std::shared_ptr<EmbeddingSource> inner_;
  mutable std::mutex mu_;
};

}  // namespace

BenchOutput run_benchmark(const BenchConfig& config, const ProgressLog& log) {
  std::mutex log_mu;
  auto say = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(log_mu);
    log(msg);
  };

  std::vector<RoomSample> rooms;
  for (int i = 0; i < config.train_scenes; ++i) {
    const auto samples = room_samples(generate_scene(train_scene_seed(config.seed, i), config.generator));
    rooms.insert(rooms.end(), samples.begin(), samples.end());
  }
  const CoocTable table = build_cooc(rooms, default_targets(), default_categories());

  std::vector<Scene> scenes;
  std::vector<EpisodeSpec> specs;
  for (int i = 0; i < config.scenes; ++i) {
    scenes.push_back(generate_scene(eval_scene_seed(config.seed, i), config.generator));
    char name[32];
    std::snprintf(name, sizeof name, "scene_%03d", i);
    const auto s = generate_episodes(scenes.back(), name, config.episodes_per_scene, i * config.episodes_per_scene,
                                     eval_scene_seed(config.seed, i) * kGolden, config.min_oracle,
                                     config.agent.sim.success_distance);
    specs.insert(specs.end(), s.begin(), s.end());
  }

  const bool need_remote = std::any_of(config.policies.begin(), config.policies.end(), [](PolicyKind p) {
    return p == PolicyKind::kZeroShot || p == PolicyKind::kFeedForward;
  });
  std::shared_ptr<LmClient> client;
  if (config.lm_url && need_remote) client = std::make_shared<LmClient>(*config.lm_url);

  std::shared_ptr<EmbeddingSource> embedder;
  std::optional<HeadModel> head;
  if (std::count(config.policies.begin(), config.policies.end(), PolicyKind::kFeedForward)) {
    std::shared_ptr<EmbeddingSource> base;
    if (client) base = std::make_shared<RemoteEmbedder>(client);
    else base = std::make_shared<HashingEmbedder>();
    if (config.embedding_cache) base = std::make_shared<CachedEmbedder>(*config.embedding_cache, base);
    embedder = std::make_shared<LockedEmbedder>(base);
    if (config.head_model) {
      head = HeadModel::load(*config.head_model);
    } else {
      say("training feed-forward head on " + std::to_string(rooms.size()) + " rooms");
      head = train_head(labeled_rooms(rooms), default_targets(), *embedder, HeadHyper{});
    }
  }
  if (need_remote && !client) say("no lm_url configured; language-model policies use offline co-occurrence scores");

  const std::size_t P = config.policies.size();
  const std::size_t E = specs.size();
  BenchOutput out;
  out.results.assign(P, std::vector<EpisodeResult>(E));
  std::vector<std::vector<std::string>> audit(P, std::vector<std::string>(E));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < P * E; task = next++) {
      const std::size_t p = task / E, e = task % E;
      const PolicyKind policy = config.policies[p];
      const EpisodeSpec& spec = specs[e];
      const Scene& scene = scenes[static_cast<std::size_t>(spec.id / config.episodes_per_scene)];
      DowngradeLog downgrade = [&](const std::string& msg) { say(msg); };
      std::unique_ptr<RelevanceScorer> scorer;
      switch (policy) {
        case PolicyKind::kZeroShot: scorer = std::make_unique<ZeroShotScorer>(client, table, downgrade); break;
        case PolicyKind::kFeedForward:
          scorer = std::make_unique<FeedForwardScorer>(*head, embedder, table, downgrade);
          break;
        default: scorer = std::make_unique<OfflineScorer>(table); break;
      }
      EpisodeResult r;
      try {
        r = run_episode(scene, spec, policy, config.agent, scorer.get(), &table);
      } catch (const std::exception& ex) {
        r.spec_id = spec.id;
        r.reason = ex.what();
      }
      if (config.audit) {
        std::string lines;
        for (const auto& d : r.decisions) lines += decision_json(to_string(policy), spec.id, d) + "\n";
        audit[p][e] = std::move(lines);
      }
      out.results[p][e] = std::move(r);
      const std::size_t n = ++done;
      if (n % 50 == 0 || n == P * E) say("episodes finished: " + std::to_string(n) + "/" + std::to_string(P * E));
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  out.report.seed = config.seed;
  for (std::size_t p = 0; p < P; ++p) {
    PolicyReport row = aggregate(out.results[p]);
    row.policy = std::string(to_string(config.policies[p]));
    out.report.rows.push_back(row);
  }
  if (config.audit) {
    std::ofstream f(*config.audit, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write audit log " + config.audit->string());
    for (const auto& per_policy : audit)
      for (const auto& lines : per_policy) f << lines;
  }
  return out;
}

}  // namespace frontnav

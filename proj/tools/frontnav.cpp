// Command-line entry points: run, bench, gen-scenes, train-head, build-cooc.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "frontnav/bench.hpp"
#include "frontnav/embedding.hpp"
#include "frontnav/head_model.hpp"
#include "frontnav/semantics.hpp"

using namespace frontnav;

namespace {

// Exit codes: 0 done, 1 runtime failure, 2 configuration error.
constexpr int kConfigError = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CoocTable default_table(std::uint64_t seed, int train_scenes) {
  std::vector<RoomSample> rooms;
  for (int i = 0; i < train_scenes; ++i) {
    const auto s = room_samples(generate_scene(train_scene_seed(seed, i)));
    rooms.insert(rooms.end(), s.begin(), s.end());
  }
  return build_cooc(rooms, default_targets(), default_categories());
}

std::shared_ptr<EmbeddingSource> make_embedder(const std::string& lm_url, const std::string& cache) {
  std::shared_ptr<EmbeddingSource> base;
  if (!lm_url.empty()) base = std::make_shared<RemoteEmbedder>(std::make_shared<LmClient>(lm_url));
  else base = std::make_shared<HashingEmbedder>();
  if (!cache.empty()) base = std::make_shared<CachedEmbedder>(cache, base);
  return base;
}

std::string result_json(std::string_view policy, const EpisodeResult& r) {
  nlohmann::ordered_json j{{"policy", policy},
                           {"id", r.spec_id},
                           {"success", r.success},
                           {"path_length", r.path_length},
                           {"oracle_length", r.oracle_length},
                           {"final_distance", r.final_distance},
                           {"steps", r.steps},
                           {"reason", r.reason},
                           {"decisions", r.decisions.size()}};
  return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frontnav: semantic frontier navigation in 2D scenes"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run episodes from a spec file on one scene");
  std::string scene_path, spec_path, policy_name, render_dir, cooc_path, head_path, lm_url, cache_path;
  std::optional<std::uint64_t> seed_override;
  run->add_option("--scene", scene_path, "Scene JSON")->required();
  run->add_option("--spec", spec_path, "Episode specs (JSON lines)")->required();
  run->add_option("--policy", policy_name, "Policy name")->required();
  run->add_option("--seed", seed_override, "Override the episode seed");
  run->add_option("--render", render_dir, "Write map channels and composite images here");
  run->add_option("--cooc", cooc_path, "Co-occurrence CSV (default: built from generated rooms)");
  run->add_option("--head", head_path, "Feed-forward head model");
  run->add_option("--lm-url", lm_url, "Sentence scoring service base URL");
  run->add_option("--embedding-cache", cache_path, "Embedding cache file");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark and write the report CSV");
  std::string config_path, out_path;
  std::optional<int> threads;
  std::string episodes_out;
  bench->add_option("--config", config_path, "Bench config JSON")->required();
  bench->add_option("--out", out_path, "Report CSV")->required();
  bench->add_option("--threads", threads, "Worker threads (overrides config)");
  bench->add_option("--episodes-out", episodes_out, "Per-episode results (JSON lines)");

  // gen-scenes
  auto* gen = app.add_subcommand("gen-scenes", "Generate scenes, episode specs and room records");
  int count = 0, episodes = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  double min_oracle = 2.0;
  gen->add_option("--count", count, "Number of scenes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Base seed")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--episodes", episodes, "Episodes per scene")->check(CLI::NonNegativeNumber);
  gen->add_option("--min-oracle", min_oracle, "Minimum oracle path length (m)");
  std::vector<int> room_rows, room_cols;
  gen->add_option("--room-rows", room_rows, "Room lattice rows: min max")->expected(2);
  gen->add_option("--room-cols", room_cols, "Room lattice columns: min max")->expected(2);

  // train-head
  auto* train = app.add_subcommand("train-head", "Train the feed-forward relevance head");
  std::string rooms_path, model_out;
  int epochs = 60;
  train->add_option("--rooms", rooms_path, "Room records (JSON lines)")->required();
  train->add_option("--out", model_out, "Model JSON")->required();
  train->add_option("--epochs", epochs)->check(CLI::PositiveNumber);
  train->add_option("--lm-url", lm_url, "Embedding service base URL");
  train->add_option("--embedding-cache", cache_path, "Embedding cache file");

  // build-cooc
  auto* cooc = app.add_subcommand("build-cooc", "Build the co-occurrence table from room records");
  std::string cooc_rooms, cooc_out;
  cooc->add_option("--rooms", cooc_rooms, "Room records (JSON lines)")->required();
  cooc->add_option("--out", cooc_out, "CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      PolicyKind policy;
      Scene scene;
      std::vector<EpisodeSpec> specs;
      try {
        policy = parse_policy(policy_name);
        scene = load_scene(scene_path);
        specs = load_episode_specs(spec_path);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const CoocTable table = cooc_path.empty() ? default_table(7, 200) : CoocTable::load(cooc_path);
      AgentConfig agent;
      auto log = [](const std::string& msg) { std::cerr << msg << "\n"; };
      std::unique_ptr<RelevanceScorer> scorer;
      if (policy == PolicyKind::kZeroShot) {
        std::shared_ptr<LmClient> client;
        if (!lm_url.empty()) client = std::make_shared<LmClient>(lm_url);
        scorer = std::make_unique<ZeroShotScorer>(client, table, log);
      } else if (policy == PolicyKind::kFeedForward) {
        auto embedder = make_embedder(lm_url, cache_path);
        HeadModel head;
        if (!head_path.empty()) {
          head = HeadModel::load(head_path);
        } else {
          std::vector<RoomSample> rooms;
          for (int i = 0; i < 200; ++i) {
            const auto s = room_samples(generate_scene(train_scene_seed(7, i)));
            rooms.insert(rooms.end(), s.begin(), s.end());
          }
          head = train_head(labeled_rooms(rooms), default_targets(), *embedder, HeadHyper{});
        }
        scorer = std::make_unique<FeedForwardScorer>(head, embedder, table, log);
      } else {
        scorer = std::make_unique<OfflineScorer>(table);
      }

      std::vector<EpisodeResult> results;
      for (auto spec : specs) {
        if (seed_override) spec.seed = *seed_override;
        std::optional<RenderOptions> render;
        if (!render_dir.empty()) render = RenderOptions{std::filesystem::path(render_dir) / ("episode_" + std::to_string(spec.id))};
        const EpisodeResult r = run_episode(scene, spec, policy, agent, scorer.get(), &table, render ? &*render : nullptr);
        std::cout << result_json(policy_name, r) << "\n";
        results.push_back(r);
      }
      const PolicyReport rep = aggregate(results);
      std::printf("SR=%.4f SPL=%.4f DTG=%.4f episodes=%d\n", rep.sr, rep.spl, rep.dtg, rep.episodes);
    } else if (*bench) {
      BenchConfig config;
      try {
        config = load_bench_config(config_path);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (threads) {
        if (*threads < 1) throw ConfigError("--threads must be positive");
        config.threads = *threads;
      }
      const BenchOutput out = run_benchmark(config, [](const std::string& msg) { std::cerr << msg << "\n"; });
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + out_path);
      f << out.report.to_csv();
      if (!episodes_out.empty()) {
        std::ofstream ep(episodes_out, std::ios::binary);
        for (std::size_t p = 0; p < out.results.size(); ++p)
          for (const auto& r : out.results[p]) ep << result_json(to_string(config.policies[p]), r) << "\n";
      }
      std::cout << out.report.to_csv();
    } else if (*gen) {
      GeneratorParams params;
      if (!room_rows.empty()) std::tie(params.min_room_rows, params.max_room_rows) = std::pair(room_rows[0], room_rows[1]);
      if (!room_cols.empty()) std::tie(params.min_room_cols, params.max_room_cols) = std::pair(room_cols[0], room_cols[1]);
      std::filesystem::create_directories(gen_out);
      std::vector<EpisodeSpec> specs;
      std::vector<RoomSample> rooms;
      for (int i = 0; i < count; ++i) {
        const Scene scene = generate_scene(eval_scene_seed(gen_seed, i), params);
        char name[32];
        std::snprintf(name, sizeof name, "scene_%03d", i);
        save_scene(scene, std::filesystem::path(gen_out) / (std::string(name) + ".json"));
        const auto s = generate_episodes(scene, name, episodes, i * episodes, eval_scene_seed(gen_seed, i) * 0x9E3779B97F4A7C15ULL,
                                         min_oracle, SimConfig{}.success_distance);
        specs.insert(specs.end(), s.begin(), s.end());
        const auto r = room_samples(scene);
        rooms.insert(rooms.end(), r.begin(), r.end());
      }
      save_episode_specs(specs, (std::filesystem::path(gen_out) / "episodes.jsonl").string());
      save_room_samples(rooms, std::filesystem::path(gen_out) / "rooms.jsonl");
      std::printf("wrote %d scenes, %zu episodes, %zu rooms to %s\n", count, specs.size(), rooms.size(), gen_out.c_str());
    } else if (*train) {
      std::vector<RoomSample> rooms;
      try {
        rooms = load_room_samples(rooms_path);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      auto embedder = make_embedder(lm_url, cache_path);
      HeadHyper hyper;
      hyper.epochs = epochs;
      std::vector<double> trace;
      const HeadModel head = train_head(labeled_rooms(rooms), default_targets(), *embedder, hyper, &trace);
      head.save(model_out);
      std::printf("trained on %zu rooms, final loss %.6f\n", rooms.size(), head.final_loss);
    } else if (*cooc) {
      std::vector<RoomSample> rooms;
      try {
        rooms = load_room_samples(cooc_rooms);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const CoocTable table = build_cooc(rooms, default_targets(), default_categories());
      table.save(cooc_out);
      std::printf("%zu objects x %zu targets from %zu rooms\n", table.object_count(), table.target_count(), rooms.size());
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "frontnav/scene.hpp"

namespace frontnav {
namespace {

struct CategorySpec {
  const char* name;
  double width;   // meters
  double length;  // meters
};

// Targets first; their order defines the target list.
constexpr std::array<CategorySpec, 20> kCatalog{{
    {"chair", 0.5, 0.5},        {"couch", 0.9, 1.9},        {"potted plant", 0.4, 0.4},
    {"bed", 1.4, 1.9},          {"toilet", 0.5, 0.7},       {"tv", 0.2, 1.0},
    {"sink", 0.5, 0.6},         {"bathtub", 0.7, 1.6},      {"shower", 0.8, 0.8},
    {"mirror", 0.1, 0.6},       {"nightstand", 0.4, 0.4},   {"wardrobe", 0.6, 1.2},
    {"refrigerator", 0.7, 0.7}, {"oven", 0.6, 0.6},         {"dining table", 0.9, 1.4},
    {"bookshelf", 0.3, 1.0},    {"desk", 0.6, 1.2},         {"lamp", 0.3, 0.3},
    {"window", 0.1, 1.0},       {"cabinet", 0.5, 0.8},
}};
constexpr int kTargetCount = 6;

struct RoomType {
  const char* name;
  double weight;
  std::vector<std::pair<const char*, double>> objects;
};

const std::vector<RoomType>& room_types() {
  static const std::vector<RoomType> types{
      {"bathroom", 1.0,
       {{"toilet", 0.95}, {"sink", 0.9}, {"bathtub", 0.55}, {"shower", 0.45}, {"mirror", 0.6},
        {"cabinet", 0.3}, {"window", 0.4}, {"potted plant", 0.1}}},
      {"bedroom", 1.2,
       {{"bed", 0.95}, {"nightstand", 0.8}, {"wardrobe", 0.7}, {"lamp", 0.55}, {"chair", 0.25},
        {"tv", 0.2}, {"window", 0.6}, {"mirror", 0.3}, {"desk", 0.2}, {"potted plant", 0.15}}},
      {"living room", 1.0,
       {{"couch", 0.95}, {"tv", 0.85}, {"chair", 0.35}, {"potted plant", 0.5}, {"lamp", 0.55},
        {"bookshelf", 0.4}, {"window", 0.7}, {"cabinet", 0.4}}},
      {"kitchen", 0.9,
       {{"refrigerator", 0.9}, {"oven", 0.9}, {"sink", 0.8}, {"cabinet", 0.8}, {"chair", 0.3},
        {"dining table", 0.25}, {"window", 0.5}, {"potted plant", 0.2}}},
      {"office", 0.7,
       {{"desk", 0.9}, {"chair", 0.9}, {"bookshelf", 0.7}, {"lamp", 0.5}, {"tv", 0.1},
        {"window", 0.6}, {"cabinet", 0.4}, {"potted plant", 0.3}}},
      {"dining room", 0.7,
       {{"dining table", 0.9}, {"chair", 0.95}, {"potted plant", 0.3}, {"cabinet", 0.4},
        {"window", 0.6}, {"lamp", 0.3}}},
  };
  return types;
}

int catalog_index(const std::string& name) {
  for (std::size_t i = 0; i < kCatalog.size(); ++i)
    if (name == kCatalog[i].name) return static_cast<int>(i);
  throw std::logic_error("catalog has no '" + name + "'");
}

struct Room {
  CellBox interior;
  int type = 0;
};

class Builder {
 public:
  Builder(std::uint64_t seed, const GeneratorParams& p) : rng_(seed), p_(p) {}

  Scene build() {
    layout();
    place_doors();
    assign_types();
    furnish();
    ensure_targets();
    return finish();
  }

 private:
  int cells(double meters) const { return std::max(1, static_cast<int>(std::lround(meters / p_.resolution))); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double prob) { return uniform(0.0, 1.0) < prob; }

  void layout() {
    n_rows_ = uniform_int(p_.min_room_rows, p_.max_room_rows);
    n_cols_ = uniform_int(p_.min_room_cols, p_.max_room_cols);
    std::vector<int> heights(n_rows_), widths(n_cols_);
    for (auto& h : heights) h = cells(uniform(p_.min_room_size, p_.max_room_size));
    for (auto& w : widths) w = cells(uniform(p_.min_room_size, p_.max_room_size));

    const int rows = 1 + std::accumulate(heights.begin(), heights.end(), 0) + n_rows_;
    const int cols = 1 + std::accumulate(widths.begin(), widths.end(), 0) + n_cols_;
    grid_ = Grid<std::int16_t>(rows, cols, Scene::kWall);
    reserved_ = MaskGrid(rows, cols, 0);

    int r0 = 1;
    for (int i = 0; i < n_rows_; ++i) {
      int c0 = 1;
      for (int j = 0; j < n_cols_; ++j) {
        Room room;
        room.interior = {r0, c0, r0 + heights[i] - 1, c0 + widths[j] - 1};
        for (int r = room.interior.row0; r <= room.interior.row1; ++r)
          for (int c = room.interior.col0; c <= room.interior.col1; ++c) grid_(r, c) = Scene::kFree;
        rooms_.push_back(room);
        c0 += widths[j] + 1;
      }
      r0 += heights[i] + 1;
    }
  }

  int room_at(int i, int j) const { return i * n_cols_ + j; }

  void place_doors() {
    struct Edge {
      int a, b;
      bool horizontal;  // neighbours share a vertical wall
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n_rows_; ++i)
      for (int j = 0; j < n_cols_; ++j) {
        if (j + 1 < n_cols_) edges.push_back({room_at(i, j), room_at(i, j + 1), true});
        if (i + 1 < n_rows_) edges.push_back({room_at(i, j), room_at(i + 1, j), false});
      }
    std::shuffle(edges.begin(), edges.end(), rng_);

    std::vector<int> parent(rooms_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : edges) {
      const int ra = find(e.a), rb = find(e.b);
      const bool tree_edge = ra != rb;
      if (tree_edge) parent[ra] = rb;
      if (tree_edge || chance(p_.extra_door_probability)) carve_door(rooms_[e.a], rooms_[e.b], e.horizontal);
    }
  }

  void carve_door(const Room& a, const Room& b, bool horizontal) {
    const int width = cells(p_.door_width);
    const int depth = cells(p_.object_gap) + 2;
    if (horizontal) {
      const int wall_col = a.interior.col1 + 1;
      const int len = a.interior.row1 - a.interior.row0 + 1;
      const int offset = uniform_int(1, std::max(1, len - width - 1));
      for (int r = a.interior.row0 + offset; r < a.interior.row0 + offset + width; ++r) {
        grid_(r, wall_col) = Scene::kFree;
        for (int c = wall_col - depth; c <= wall_col + depth; ++c) reserved_(r, c) = 1;
      }
    } else {
      const int wall_row = a.interior.row1 + 1;
      const int len = a.interior.col1 - a.interior.col0 + 1;
      const int offset = uniform_int(1, std::max(1, len - width - 1));
      for (int c = a.interior.col0 + offset; c < a.interior.col0 + offset + width; ++c) {
        grid_(wall_row, c) = Scene::kFree;
        for (int r = wall_row - depth; r <= wall_row + depth; ++r) reserved_(r, c) = 1;
      }
    }
    (void)b;
  }

  int type_index(const char* name) const {
    const auto& types = room_types();
    for (std::size_t i = 0; i < types.size(); ++i)
      if (std::string(types[i].name) == name) return static_cast<int>(i);
    throw std::logic_error("unknown room type");
  }

  void assign_types() {
    const auto& types = room_types();
    std::vector<int> assignment{type_index("bedroom"), type_index("bathroom"), type_index("living room")};
    std::vector<double> weights;
    for (const auto& t : types) weights.push_back(t.weight);
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    while (assignment.size() < rooms_.size()) assignment.push_back(pick(rng_));
    assignment.resize(rooms_.size());
    std::shuffle(assignment.begin(), assignment.end(), rng_);
    for (std::size_t i = 0; i < rooms_.size(); ++i) rooms_[i].type = assignment[i];
  }

  // Objects keep either zero or at least `object_gap` clearance to each wall
  // and at least `object_gap` to every other object, so passages stay open.
  bool try_place(Room& room, int category) {
    const auto& spec = kCatalog[category];
    const int gap = cells(p_.object_gap);
    const auto& in = room.interior;
    const int room_h = in.row1 - in.row0 + 1;
    const int room_w = in.col1 - in.col0 + 1;

    for (int attempt = 0; attempt < 80; ++attempt) {
      int h = cells(spec.width), w = cells(spec.length);
      if (chance(0.5)) std::swap(h, w);
      if (h > room_h || w > room_w) continue;

      int r = uniform_int(in.row0, in.row1 - h + 1);
      int c = uniform_int(in.col0, in.col1 - w + 1);
      if (chance(0.7)) {
        switch (uniform_int(0, 3)) {
          case 0: r = in.row0; break;
          case 1: r = in.row1 - h + 1; break;
          case 2: c = in.col0; break;
          default: c = in.col1 - w + 1; break;
        }
      }
      if (r - in.row0 < gap) r = in.row0;
      if (in.row1 - (r + h - 1) < gap) r = in.row1 - h + 1;
      if (c - in.col0 < gap) c = in.col0;
      if (in.col1 - (c + w - 1) < gap) c = in.col1 - w + 1;
      if (r - in.row0 < gap && r != in.row0) continue;
      if (c - in.col0 < gap && c != in.col0) continue;

      bool ok = true;
      for (int rr = std::max(in.row0, r - gap); ok && rr <= std::min(in.row1, r + h - 1 + gap); ++rr)
        for (int cc = std::max(in.col0, c - gap); cc <= std::min(in.col1, c + w - 1 + gap); ++cc) {
          const bool inside = rr >= r && rr < r + h && cc >= c && cc < c + w;
          if (grid_(rr, cc) != Scene::kFree || (inside && reserved_(rr, cc))) {
            ok = false;
            break;
          }
        }
      // Door clearance zones also reach into the gap ring.
      for (int rr = std::max(in.row0, r - 1); ok && rr <= std::min(in.row1, r + h); ++rr)
        for (int cc = std::max(in.col0, c - 1); cc <= std::min(in.col1, c + w); ++cc)
          if (reserved_(rr, cc)) {
            ok = false;
            break;
          }
      if (!ok) continue;

      for (int rr = r; rr < r + h; ++rr)
        for (int cc = c; cc < c + w; ++cc) grid_(rr, cc) = static_cast<std::int16_t>(category);
      return true;
    }
    return false;
  }

  void furnish() {
    placed_.assign(rooms_.size(), {});
    for (std::size_t i = 0; i < rooms_.size(); ++i) {
      const auto& type = room_types()[rooms_[i].type];
      for (const auto& [name, prob] : type.objects) {
        if (!chance(prob)) continue;
        const int cat = catalog_index(name);
        if (try_place(rooms_[i], cat)) placed_[i].insert(cat);
      }
    }
  }

  void ensure_targets() {
    for (int t = 0; t < kTargetCount; ++t) {
      bool present = false;
      for (const auto& s : placed_) present = present || s.count(t);
      if (present) continue;

      // Prefer rooms whose type most often holds this target.
      std::vector<std::pair<double, std::size_t>> order;
      for (std::size_t i = 0; i < rooms_.size(); ++i) {
        double prior = 0.0;
        for (const auto& [name, prob] : room_types()[rooms_[i].type].objects)
          if (catalog_index(name) == t) prior = prob;
        order.push_back({-prior, i});
      }
      std::stable_sort(order.begin(), order.end());
      for (const auto& [neg_prior, i] : order) {
        if (try_place(rooms_[i], t)) {
          placed_[i].insert(t);
          break;
        }
      }
    }
  }

  Scene finish() {
    std::vector<std::string> names;
    for (const auto& c : kCatalog) names.emplace_back(c.name);
    std::vector<CategoryId> targets(kTargetCount);
    std::iota(targets.begin(), targets.end(), 0);
    std::vector<RoomRecord> records;
    for (std::size_t i = 0; i < rooms_.size(); ++i)
      records.push_back({room_types()[rooms_[i].type].name, rooms_[i].interior, placed_[i]});
    return Scene(p_.resolution, std::move(names), std::move(targets), std::move(grid_), std::move(records));
  }

  std::mt19937_64 rng_;
  GeneratorParams p_;
  int n_rows_ = 0;
  int n_cols_ = 0;
  Grid<std::int16_t> grid_;
  MaskGrid reserved_;
  std::vector<Room> rooms_;
  std::vector<std::set<CategoryId>> placed_;
};

}  // namespace

const std::vector<std::string>& default_categories() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : kCatalog) v.emplace_back(c.name);
    return v;
  }();
  return names;
}

const std::vector<std::string>& default_targets() {
  static const std::vector<std::string> names(default_categories().begin(),
                                              default_categories().begin() + kTargetCount);
  return names;
}

Scene generate_scene(std::uint64_t seed, const GeneratorParams& params) {
  if (params.min_room_rows < 1 || params.min_room_cols < 1 || params.max_room_rows < params.min_room_rows ||
      params.max_room_cols < params.min_room_cols || !(params.min_room_size > 0.0) ||
      params.max_room_size < params.min_room_size || !(params.resolution > 0.0))
    throw GenerationError("generator parameter ranges are empty or invalid");
  if (params.min_room_size < params.door_width + 2.0 * params.resolution + 0.5)
    throw GenerationError("rooms are too small to fit a door and clearance");

  // A layout whose furniture splits free space is discarded; retries derive
  // new streams from the seed so the result stays deterministic.
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    try {
      return Builder(seed * 0x9E3779B97F4A7C15ULL + attempt, params).build();
    } catch (const SceneInvariantError&) {
    }
  }
  throw GenerationError("could not generate a connected scene for seed " + std::to_string(seed));
}

}  // namespace frontnav

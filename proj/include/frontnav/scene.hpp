#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontnav/geometry.hpp"

namespace frontnav {

using CategoryId = int;

class SceneParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SceneInvariantError : public std::runtime_error {
 public:
  enum class Kind {
    kEmptyGrid,
    kRaggedGrid,
    kCategoryOutOfRange,
    kUnknownTarget,
    kNoFreeCell,
    kDisconnectedFreeSpace,
  };
  SceneInvariantError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground-truth annotation of one generated room: its extent and the object
/// categories placed inside it.
struct RoomRecord {
  std::string type;
  CellBox bounds;
  std::set<CategoryId> objects;

  friend bool operator==(const RoomRecord&, const RoomRecord&) = default;
};

/// Ground-truth 2D semantic world. Cell codes: kFree, kWall, or a category id
/// (>= 0) for an object cell. Object cells are occupied.
class Scene {
 public:
  static constexpr std::int16_t kFree = -1;
  static constexpr std::int16_t kWall = -2;

  Scene() = default;
  Scene(double resolution, std::vector<std::string> categories, std::vector<CategoryId> targets,
        Grid<std::int16_t> cells, std::vector<RoomRecord> rooms = {});

  double resolution() const { return resolution_; }
  int rows() const { return cells_.rows(); }
  int cols() const { return cells_.cols(); }
  const Grid<std::int16_t>& cells() const { return cells_; }
  const std::vector<std::string>& category_names() const { return categories_; }
  int category_count() const { return static_cast<int>(categories_.size()); }
  const std::vector<CategoryId>& targets() const { return targets_; }
  const std::vector<RoomRecord>& rooms() const { return rooms_; }
  GridFrame frame() const { return {{0.0, 0.0}, resolution_, rows(), cols()}; }

  bool occupied(Cell c) const { return cells_[c] != kFree; }
  /// Out-of-bounds cells count as free space, so rays leaving the grid see nothing.
  bool occupied_or_outside(Cell c) const { return cells_.contains(c) && occupied(c); }
  std::optional<CategoryId> category_at(Cell c) const {
    const auto v = cells_[c];
    if (v >= 0) return v;
    return std::nullopt;
  }
  bool free_at(Vec2 p) const;

  std::optional<CategoryId> find_category(const std::string& name) const;
  CategoryId category_id(const std::string& name) const;
  std::vector<Cell> cells_of(CategoryId category) const;
  bool has_category(CategoryId category) const;

  friend bool operator==(const Scene&, const Scene&) = default;

 private:
  void validate() const;

  double resolution_ = 0.1;
  std::vector<std::string> categories_;
  std::vector<CategoryId> targets_;
  Grid<std::int16_t> cells_;
  std::vector<RoomRecord> rooms_;
};

Scene load_scene(const std::filesystem::path& path);
Scene parse_scene(const std::string& json_text);
void save_scene(const Scene& scene, const std::filesystem::path& path);
std::string serialize_scene(const Scene& scene);

/// Generation parameters. Rooms are laid out on a rows x cols lattice.
struct GeneratorParams {
  int min_room_rows = 2;
  int max_room_rows = 3;
  int min_room_cols = 2;
  int max_room_cols = 3;
  double min_room_size = 2.6;  // meters
  double max_room_size = 3.6;
  double resolution = 0.1;
  double door_width = 0.9;
  double extra_door_probability = 0.25;
  double object_gap = 0.4;
};

/// Category vocabulary used by the generator. The first six are the targets.
const std::vector<std::string>& default_categories();
const std::vector<std::string>& default_targets();

Scene generate_scene(std::uint64_t seed, const GeneratorParams& params = {});

}  // namespace frontnav

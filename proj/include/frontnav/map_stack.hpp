#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "frontnav/geometry.hpp"
#include "frontnav/sim.hpp"

namespace frontnav {

class MapBoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The agent's K x M x M layered map: channel 0 obstacle, channel 1
/// explored, channel 2 + k semantic category k. Channels are binary and
/// only ever gain cells. The map does not scroll.
class MapStack {
 public:
  static constexpr int kObstacle = 0;
  static constexpr int kExplored = 1;
  static constexpr int kFirstSemantic = 2;

  /// Centres the map on `origin`: world_to_grid(origin) == (M/2, M/2).
  MapStack(int size, double resolution, int category_count, Vec2 origin = {});

  int size() const { return size_; }
  double resolution() const { return resolution_; }
  int category_count() const { return category_count_; }
  int channel_count() const { return static_cast<int>(channels_.size()); }
  Vec2 origin() const { return origin_; }
  const GridFrame& frame() const { return frame_; }

  const MaskGrid& channel(int k) const { return channels_.at(k); }
  const MaskGrid& obstacle() const { return channels_[kObstacle]; }
  const MaskGrid& explored() const { return channels_[kExplored]; }
  const MaskGrid& semantic(CategoryId category) const { return channels_.at(kFirstSemantic + category); }

  bool is_obstacle(Cell c) const { return channels_[kObstacle][c] != 0; }
  bool is_explored(Cell c) const { return channels_[kExplored][c] != 0; }

  Cell world_to_grid(Vec2 p) const;
  Vec2 grid_to_world(Cell c) const;
  bool in_bounds(Cell c) const { return frame_.in_bounds(c); }

  /// Sets one cell of one channel. integrate() goes through here; fixtures may too.
  void mark(int channel, Cell c);

  /// Projects an observation into the map. Idempotent.
  void integrate(const Observation& obs);

  /// Bounding box of explored cells (empty before the first integrate).
  const CellBox& explored_box() const { return explored_box_; }
  /// Number of semantic cells per category.
  const std::vector<std::size_t>& semantic_counts() const { return semantic_counts_; }
  /// Incremented whenever an obstacle cell is added.
  std::uint64_t obstacle_version() const { return obstacle_version_; }
  std::size_t total_set() const;

  /// Writes `step_{t}_{channel}.pgm` for every channel into `dir`.
  void export_channels(const std::filesystem::path& dir, int step) const;

 private:

  int size_;
  double resolution_;
  int category_count_;
  Vec2 origin_;
  GridFrame frame_;
  std::vector<MaskGrid> channels_;
  CellBox explored_box_;
  std::vector<std::size_t> semantic_counts_;
  std::uint64_t obstacle_version_ = 0;
};

MapStack new_map(int size, double resolution, int category_count, Vec2 origin = {});

}  // namespace frontnav

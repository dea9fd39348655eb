#include "frontnav/map_stack.hpp"

#include <string>

#include "frontnav/image_io.hpp"

namespace frontnav {

MapStack::MapStack(int size, double resolution, int category_count, Vec2 origin)
    : size_(size), resolution_(resolution), category_count_(category_count), origin_(origin) {
  if (size <= 0) throw std::invalid_argument("map size must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("map resolution must be positive");
  if (category_count < 0) throw std::invalid_argument("negative category count");
  // Origin lands on the lower corner of cell (M/2, M/2).
  const double offset = (size / 2) * resolution;
  frame_ = {{origin.x - offset, origin.y - offset}, resolution, size, size};
  channels_.assign(category_count + 2, MaskGrid(size, size, 0));
  semantic_counts_.assign(category_count, 0);
}

MapStack new_map(int size, double resolution, int category_count, Vec2 origin) {
  return MapStack(size, resolution, category_count, origin);
}

Cell MapStack::world_to_grid(Vec2 p) const {
  const Cell c = frame_.to_cell(p);
  if (!frame_.in_bounds(c))
    throw MapBoundsError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is outside the map");
  return c;
}

Vec2 MapStack::grid_to_world(Cell c) const {
  if (!frame_.in_bounds(c)) throw MapBoundsError("cell outside the map");
  return frame_.center_of(c);
}

void MapStack::mark(int channel, Cell c) {
  auto& v = channels_[channel][c];
  if (v) return;
  v = 1;
  if (channel == kExplored) explored_box_.expand_to(c);
  else if (channel == kObstacle) ++obstacle_version_;
  else semantic_counts_[channel - kFirstSemantic]++;
}

void MapStack::integrate(const Observation& obs) {
  const Pose& pose = obs.agent_pose;
  const Cell agent = world_to_grid(pose.position);
  mark(kExplored, agent);

  for (const Ray& ray : obs.rays) {
    const Vec2 dir = heading_vector(pose.heading + ray.bearing);
    const double free_until = ray.hit ? ray.hit_distance - 1e-9 : ray.hit_distance;
    traverse_ray(frame_, pose.position, dir, free_until, [&](Cell c, double t) {
      if (t < free_until && frame_.in_bounds(c)) mark(kExplored, c);
      return true;
    });
    if (!ray.hit) continue;

    // Step a quarter cell past the surface so the point lands in the hit cell.
    const Cell hit = frame_.to_cell(pose.position + dir * (ray.hit_distance + 0.25 * resolution_));
    if (!frame_.in_bounds(hit) || hit == agent) continue;
    mark(kExplored, hit);
    mark(kObstacle, hit);
    if (ray.hit_category && *ray.hit_category >= 0 && *ray.hit_category < category_count_)
      mark(kFirstSemantic + *ray.hit_category, hit);
  }
}

std::size_t MapStack::total_set() const {
  std::size_t n = 0;
  for (const auto& ch : channels_)
    for (auto v : ch.data()) n += v != 0;
  return n;
}

void MapStack::export_channels(const std::filesystem::path& dir, int step) const {
  std::filesystem::create_directories(dir);
  for (int k = 0; k < channel_count(); ++k)
    write_pgm(dir / ("step_" + std::to_string(step) + "_" + std::to_string(k) + ".pgm"), channels_[k]);
}

}  // namespace frontnav

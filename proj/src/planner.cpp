#include "frontnav/planner.hpp"

#include <algorithm>
#include <cmath>

#include "frontnav/image_io.hpp"

namespace frontnav {

MaskGrid planning_obstacles(const MapStack& map, const MaskGrid* extra) {
  MaskGrid out = map.obstacle();
  if (extra) {
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] |= extra->data()[i];
  }
  return out;
}

CellBox planning_window(const MapStack& map, std::span<const Cell> cells, int margin) {
  CellBox box = map.explored_box();
  for (const Cell& c : cells) box.expand_to(c);
  return box.grown(margin, map.size(), map.size());
}

namespace {

void carve(MaskGrid& passable, const MaskGrid& obstacles, Cell center, int radius) {
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc) {
      const Cell c{center.row + dr, center.col + dc};
      if (dr * dr + dc * dc > radius * radius || !obstacles.contains(c) || obstacles[c]) continue;
      passable[c] = 1;
    }
}

}  // namespace

ArrivalField goal_field(const MaskGrid& obstacles, const MapStack& map, std::span<const Cell> goals, Cell agent,
                        const PlannerConfig& config, bool stop_at_agent) {
  const int r = static_cast<int>(std::ceil(config.inflation_radius)) + 1;
  MaskGrid passable(obstacles.rows(), obstacles.cols(), 0);
  std::vector<Cell> ends(goals.begin(), goals.end());
  for (const Cell& g : goals) {
    if (!passable.contains(g)) continue;
    carve(passable, obstacles, g, r);
    passable[g] = 1;
  }
  if (passable.contains(agent)) carve(passable, obstacles, agent, r);
  ends.push_back(agent);

  FmmOptions opt;
  opt.resolution = map.resolution();
  opt.inflation_radius = config.inflation_radius;
  opt.passable = &passable;
  opt.roi = planning_window(map, ends, config.roi_margin);
  if (stop_at_agent) opt.stop_after = agent;
  return fmm_field(obstacles, goals, opt);
}

ArrivalField agent_field(const MaskGrid& obstacles, const MapStack& map, Cell agent, const PlannerConfig& config) {
  const int r = static_cast<int>(std::ceil(config.inflation_radius)) + 1;
  MaskGrid passable(obstacles.rows(), obstacles.cols(), 0);
  carve(passable, obstacles, agent, r);
  passable[agent] = 1;

  FmmOptions opt;
  opt.resolution = map.resolution();
  opt.inflation_radius = config.inflation_radius;
  opt.passable = &passable;
  const Cell sources[] = {agent};
  opt.roi = planning_window(map, sources, config.roi_margin);
  return fmm_field(obstacles, sources, opt);
}

PlannerStep next_action(const ArrivalField& field, const MapStack& map, const Pose& pose, const PlannerConfig& config,
                        bool approach_target) {
  PlannerStep step;
  const Cell agent = map.frame().to_cell(pose.position);
  const double t_agent = field.at(agent);
  step.local_goal = agent;
  if (t_agent == kUnreachable) {
    step.status = PlanStatus::kReplan;
    return step;
  }
  if (approach_target && t_agent <= config.stop_distance) {
    step.action = Action::kStop;
    return step;
  }
  if (!approach_target && t_agent <= config.reach_distance) {
    step.status = PlanStatus::kGoalReached;
    return step;
  }

  const int R = static_cast<int>(std::floor(config.local_range / map.resolution()));
  const Cell la = field.local(agent);
  Cell best = agent;
  double best_t = t_agent;
  for (int dr = -R; dr <= R; ++dr)
    for (int dc = -R; dc <= R; ++dc) {
      if (dr * dr + dc * dc > R * R) continue;
      const Cell c{agent.row + dr, agent.col + dc};
      const double t = field.at(c);
      if (t >= best_t) continue;
      if (!line_of_sight(field.blocked, la, field.local(c))) continue;
      best = c;
      best_t = t;
    }

  if (best == agent) {
    // Local minimum: nothing in reach gets closer.
    if (approach_target) step.action = Action::kStop;
    else step.status = PlanStatus::kGoalReached;
    return step;
  }
  step.local_goal = best;
  const Vec2 d = map.frame().center_of(best) - pose.position;
  const double bearing = std::atan2(d.y, d.x) * 180.0 / M_PI;
  const double error = wrap_signed_degrees(bearing - pose.heading);
  if (std::abs(error) > config.heading_tolerance) {
    step.action = error > 0.0 ? Action::kTurnRight : Action::kTurnLeft;
  } else {
    step.action = Action::kMoveForward;
  }
  return step;
}

void dump_field(const ArrivalField& field, const std::filesystem::path& path) {
  double max_t = 0.0;
  for (double t : field.times.data())
    if (t < kUnreachable) max_t = std::max(max_t, t);
  Grid<std::uint16_t> img(field.times.rows(), field.times.cols(), 65535);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double t = field.times.data()[i];
    if (t < kUnreachable) img.data()[i] = static_cast<std::uint16_t>(max_t > 0.0 ? std::lround(t / max_t * 65534.0) : 0);
  }
  write_pgm16(path, img);
}

}  // namespace frontnav

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "frontnav/fmm.hpp"
#include "frontnav/map_stack.hpp"
#include "frontnav/sim.hpp"

namespace frontnav {

struct PlannerConfig {
  double inflation_radius = 2.0;   // cells
  double local_range = 1.0;        // meters
  double heading_tolerance = 15.0; // degrees
  /// Stop threshold when approaching a target, kept under the success
  /// distance to absorb the gap between map and scene distances.
  double stop_distance = 0.85;
  /// A frontier goal counts as reached within this distance (meters).
  double reach_distance = 0.3;
  /// Cells of slack around the explored area for the solve window.
  int roi_margin = 40;
};

enum class PlanStatus { kAct, kGoalReached, kReplan };

struct PlannerStep {
  PlanStatus status = PlanStatus::kAct;
  Action action = Action::kMoveForward;
  Cell local_goal;
};

/// Map obstacles plus extra blocked cells (collisions), unexplored = free.
MaskGrid planning_obstacles(const MapStack& map, const MaskGrid* extra = nullptr);

/// Window that covers the explored area, `cells` and the margin.
CellBox planning_window(const MapStack& map, std::span<const Cell> cells, int margin);

/// Arrival field toward `goals`. Cells close to a goal or to the agent are
/// carved out of the inflation so both ends stay connected. With
/// `stop_at_agent` the solve ends once the agent cell is reached.
ArrivalField goal_field(const MaskGrid& obstacles, const MapStack& map, std::span<const Cell> goals, Cell agent,
                        const PlannerConfig& config, bool stop_at_agent = true);

/// Arrival field from the agent cell over the explored window.
ArrivalField agent_field(const MaskGrid& obstacles, const MapStack& map, Cell agent, const PlannerConfig& config);

/// Greedy local policy on a goal field. `approach_target` enables stopping
/// within PlannerConfig::stop_distance.
PlannerStep next_action(const ArrivalField& field, const MapStack& map, const Pose& pose, const PlannerConfig& config,
                        bool approach_target);

/// 16-bit PGM of the field; unreachable cells are white.
void dump_field(const ArrivalField& field, const std::filesystem::path& path);

}  // namespace frontnav

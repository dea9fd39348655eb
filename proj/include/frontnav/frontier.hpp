#pragma once

#include <vector>

#include "frontnav/fmm.hpp"
#include "frontnav/map_stack.hpp"

namespace frontnav {

struct FrontierConfig {
  int min_cluster_size = 4;   // cells
  int obstacle_dilation = 1;  // cells, square (8-neighbour) dilation
  double lambda_cu = 1.0;
  double sensor_range = 5.0;  // meters, radius of the utility disk
};

/// A clustered frontier candidate. Scores are filled by score_frontiers.
struct Frontier {
  int id = 0;
  std::vector<Cell> cells;
  Cell centroid;
  double utility = 0.0;  // U in [0, 1]
  double cost = 0.0;     // C in [0, 1]
  double score_cu = 0.0;
  double score_llm = 0.0;
  bool unreachable = false;
  std::vector<CategoryId> nearby_objects;
};

/// Frontier cells before clustering: explored, not obstacle, outside the
/// dilated obstacle map, with an unexplored 8-neighbour.
MaskGrid frontier_mask(const MapStack& map, int obstacle_dilation = 1);

/// Clusters frontier cells (8-connectivity), drops small clusters, and picks
/// the member nearest each cluster mean as centroid. Ids follow row-major
/// order of each cluster's first cell.
std::vector<Frontier> extract_frontiers(const MapStack& map, const FrontierConfig& config = {});

/// Cost-utility score U - lambda * C.
double cost_utility(double utility, double cost, double lambda);

/// Fraction of unexplored cells inside the disk of `radius` meters around `center`.
double unexplored_fraction(const MapStack& map, Cell center, double radius);

/// Travel distance (meters) from the agent to a frontier centroid. The
/// centroid may sit inside the planner's obstacle inflation, so the nearest
/// reachable cell within `slack` cells stands in for it.
double distance_to_cell(const ArrivalField& from_agent, Cell target, int slack);

/// Fills utility, normalised cost (max over reachable candidates = 1),
/// score_cu and the unreachable flag (unreachable => C = 1).
void score_frontiers(std::vector<Frontier>& frontiers, const MapStack& map, const ArrivalField& from_agent,
                     const FrontierConfig& config, int slack = 3);

}  // namespace frontnav

#include "frontnav/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace frontnav {

MaskGrid frontier_mask(const MapStack& map, int obstacle_dilation) {
  const int M = map.size();
  MaskGrid mask(M, M, 0);
  const CellBox box = map.explored_box().grown(1, M, M);
  if (box.empty()) return mask;
  const auto& explored = map.explored();
  const auto& obstacle = map.obstacle();

  auto near_obstacle = [&](int r, int c) {
    for (int dr = -obstacle_dilation; dr <= obstacle_dilation; ++dr)
      for (int dc = -obstacle_dilation; dc <= obstacle_dilation; ++dc) {
        const int rr = r + dr, cc = c + dc;
        if (obstacle.contains(rr, cc) && obstacle(rr, cc)) return true;
      }
    return false;
  };
  auto touches_unexplored = [&](int r, int c) {
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int rr = r + dr, cc = c + dc;
        if (explored.contains(rr, cc) && !explored(rr, cc)) return true;
      }
    return false;
  };

  for (int r = box.row0; r <= box.row1; ++r)
    for (int c = box.col0; c <= box.col1; ++c) {
      if (!explored(r, c) || obstacle(r, c)) continue;
      if (!touches_unexplored(r, c) || near_obstacle(r, c)) continue;
      mask(r, c) = 1;
    }
  return mask;
}

std::vector<Frontier> extract_frontiers(const MapStack& map, const FrontierConfig& config) {
  MaskGrid mask = frontier_mask(map, config.obstacle_dilation);
  const CellBox box = map.explored_box().grown(1, map.size(), map.size());
  std::vector<Frontier> out;
  if (box.empty()) return out;

  for (int r = box.row0; r <= box.row1; ++r)
    for (int c = box.col0; c <= box.col1; ++c) {
      if (!mask(r, c)) continue;
      Frontier f;
      std::queue<Cell> open;
      open.push({r, c});
      mask(r, c) = 0;
      while (!open.empty()) {
        const Cell cur = open.front();
        open.pop();
        f.cells.push_back(cur);
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const Cell n{cur.row + dr, cur.col + dc};
            if (mask.contains(n) && mask[n]) {
              mask[n] = 0;
              open.push(n);
            }
          }
      }
      if (static_cast<int>(f.cells.size()) < config.min_cluster_size) continue;

      double mr = 0.0, mc = 0.0;
      for (const Cell& cell : f.cells) {
        mr += cell.row;
        mc += cell.col;
      }
      mr /= f.cells.size();
      mc /= f.cells.size();
      double best = std::numeric_limits<double>::infinity();
      for (const Cell& cell : f.cells) {
        const double d = (cell.row - mr) * (cell.row - mr) + (cell.col - mc) * (cell.col - mc);
        if (d < best) {
          best = d;
          f.centroid = cell;
        }
      }
      f.id = static_cast<int>(out.size());
      out.push_back(std::move(f));
    }
  return out;
}

double cost_utility(double utility, double cost, double lambda) { return utility - lambda * cost; }

double unexplored_fraction(const MapStack& map, Cell center, double radius) {
  const int R = static_cast<int>(std::floor(radius / map.resolution()));
  const auto& explored = map.explored();
  std::size_t area = 0, unexplored = 0;
  for (int dr = -R; dr <= R; ++dr) {
    const int r = center.row + dr;
    if (r < 0 || r >= map.size()) continue;
    const int half = static_cast<int>(std::floor(std::sqrt(static_cast<double>(R) * R - dr * dr)));
    const int c0 = std::max(0, center.col - half);
    const int c1 = std::min(map.size() - 1, center.col + half);
    for (int c = c0; c <= c1; ++c) {
      ++area;
      unexplored += explored(r, c) == 0;
    }
  }
  return area ? static_cast<double>(unexplored) / area : 0.0;
}

double distance_to_cell(const ArrivalField& from_agent, Cell target, int slack) {
  double best = from_agent.at(target);
  if (best < kUnreachable) return best;
  for (int dr = -slack; dr <= slack; ++dr)
    for (int dc = -slack; dc <= slack; ++dc) {
      const Cell c{target.row + dr, target.col + dc};
      const double t = from_agent.at(c);
      if (t == kUnreachable) continue;
      best = std::min(best, t + std::hypot(dr, dc) * from_agent.resolution);
    }
  return best;
}

void score_frontiers(std::vector<Frontier>& frontiers, const MapStack& map, const ArrivalField& from_agent,
                     const FrontierConfig& config, int slack) {
  std::vector<double> dist(frontiers.size());
  double max_dist = 0.0;
  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    dist[i] = distance_to_cell(from_agent, frontiers[i].centroid, slack);
    if (dist[i] < kUnreachable) max_dist = std::max(max_dist, dist[i]);
  }
  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    auto& f = frontiers[i];
    f.utility = unexplored_fraction(map, f.centroid, config.sensor_range);
    f.unreachable = dist[i] == kUnreachable;
    if (f.unreachable) f.cost = 1.0;
    else f.cost = max_dist > 0.0 ? dist[i] / max_dist : 0.0;
    f.score_cu = cost_utility(f.utility, f.cost, config.lambda_cu);
  }
}

}  // namespace frontnav

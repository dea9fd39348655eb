#include "frontnav/policy.hpp"

#include <algorithm>
#include <cmath>

namespace frontnav {

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::kLlm: return "llm";
    case Branch::kMixed: return "mixed";
    case Branch::kCu: return "cu";
    case Branch::kTargetVisible: return "target_visible";
  }
  return "?";
}

std::vector<double> normalize_cu(const std::vector<double>& raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_cu needs at least one score");
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  std::vector<double> out(raw.size(), 1.0);
  if (*hi - *lo <= 0.0) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - *lo) / (*hi - *lo);
  return out;
}

Branch branch_for(double max_llm, const ScoreBound& bound) {
  if (max_llm > bound.upper) return Branch::kLlm;
  if (max_llm < bound.lower) return Branch::kCu;
  return Branch::kMixed;
}

GoalDecision select_frontier(const std::vector<CandidateScore>& candidates, const ScoreBound& bound) {
  if (candidates.empty()) throw ExplorationComplete();
  double max_llm = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) max_llm = std::max(max_llm, c.llm);

  GoalDecision d;
  d.branch = branch_for(max_llm, bound);
  d.scores = candidates;
  auto value = [&](const CandidateScore& c) {
    switch (d.branch) {
      case Branch::kLlm: return c.llm;
      case Branch::kCu: return c.cu;
      default: return 0.5 * c.llm + 0.5 * c.cu;
    }
  };
  const CandidateScore* best = nullptr;
  for (const auto& c : candidates) {
    if (!best || value(c) > value(*best) || (value(c) == value(*best) && c.id < best->id)) best = &c;
  }
  d.chosen = best->id;
  return d;
}

std::optional<Cell> check_target_visible(const MapStack& map, CategoryId target, const ArrivalField& from_agent) {
  if (target < 0 || target >= map.category_count() || map.semantic_counts()[target] == 0) return std::nullopt;
  const auto& ch = map.semantic(target);
  const CellBox box = map.explored_box();
  std::optional<Cell> best;
  double best_t = kUnreachable;
  std::optional<Cell> closest;
  double closest_d = kUnreachable;
  for (int r = box.row0; r <= box.row1; ++r)
    for (int c = box.col0; c <= box.col1; ++c) {
      if (!ch(r, c)) continue;
      const Cell cell{r, c};
      const double t = distance_to_cell(from_agent, cell, 3);
      if (t < best_t) {
        best_t = t;
        best = cell;
      }
      if (!from_agent.sources.empty()) {
        const Cell a = from_agent.sources.front();
        const double d = std::hypot(r - a.row, c - a.col);
        if (d < closest_d) {
          closest_d = d;
          closest = cell;
        }
      }
    }
  return best ? best : closest;
}

}  // namespace frontnav

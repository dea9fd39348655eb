#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frontnav/fmm.hpp"
#include "frontnav/frontier.hpp"
#include "frontnav/map_stack.hpp"

namespace frontnav {

class ExplorationComplete : public std::runtime_error {
 public:
  ExplorationComplete() : std::runtime_error("no frontier candidates left") {}
};

/// Score bound B = [lower, upper] on the language score.
struct ScoreBound {
  double lower = 0.15;
  double upper = 0.3;
};

enum class Branch { kLlm, kMixed, kCu, kTargetVisible };

std::string_view to_string(Branch b);

struct CandidateScore {
  int id = 0;
  double llm = 0.0;
  double cu = 0.0;

  friend bool operator==(const CandidateScore&, const CandidateScore&) = default;
};

struct GoalDecision {
  int chosen = -1;  // candidate id, -1 for a target cell
  std::optional<Cell> target_cell;
  Branch branch = Branch::kCu;
  std::vector<CandidateScore> scores;

  friend bool operator==(const GoalDecision&, const GoalDecision&) = default;
};

/// Min-max normalisation into [0, 1]; a single value or all-equal values map to 1.
std::vector<double> normalize_cu(const std::vector<double>& raw);

/// Three-way fusion of language and cost-utility scores:
///   max llm > upper  -> argmax llm
///   max llm < lower  -> argmax cu
///   otherwise        -> argmax 0.5 llm + 0.5 cu
/// Ties go to the lower id. Throws ExplorationComplete on an empty list.
GoalDecision select_frontier(const std::vector<CandidateScore>& candidates, const ScoreBound& bound = {});

/// Branch implied by the bound conditions for a given maximum language score.
Branch branch_for(double max_llm, const ScoreBound& bound);

/// Nearest mapped cell of `target` by travel distance in `from_agent`
/// (object cells are obstacles, so the nearest reachable cell beside each one
/// stands in). Falls back to straight-line order if none is reachable.
std::optional<Cell> check_target_visible(const MapStack& map, CategoryId target, const ArrivalField& from_agent);

}  // namespace frontnav

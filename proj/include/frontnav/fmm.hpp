#pragma once

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "frontnav/geometry.hpp"

namespace frontnav {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

class FmmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FmmOptions {
  /// Meters per cell; arrival times are reported in meters (unit speed).
  double resolution = 1.0;
  /// Obstacles are grown by a disk of this radius (cells) before solving.
  double inflation_radius = 0.0;
  /// Cells set here stay passable even if inflated or marked blocked.
  const MaskGrid* passable = nullptr;
  /// Cells within this radius (cells) of a source with a clear line of sight
  /// start from their exact Euclidean distance. This removes the
  /// point-source error of the first-order scheme.
  int seed_radius = 8;
  /// Solves only inside this window (empty = whole grid); outside is blocked.
  CellBox roi{};
  /// Stops once every cell no later than this one has been accepted. Cells
  /// not accepted by then report kUnreachable.
  std::optional<Cell> stop_after;
  bool record_order = false;
};

/// Arrival-time field of a unit-speed front started at the sources. Storage
/// covers the solve window only; lookups take full-grid cells.
struct ArrivalField {
  Grid<double> times;  // window-local
  MaskGrid blocked;    // window-local, after inflation
  Cell offset;         // full-grid cell of window (0, 0)
  std::vector<Cell> sources;
  double resolution = 1.0;
  /// Acceptance order, filled when FmmOptions::record_order is set.
  std::vector<Cell> order;

  Cell local(Cell c) const { return {c.row - offset.row, c.col - offset.col}; }
  double at(Cell c) const {
    const Cell l = local(c);
    return times.contains(l) ? times[l] : kUnreachable;
  }
  bool reachable(Cell c) const { return at(c) < kUnreachable; }
  /// Outside the window counts as blocked.
  bool is_blocked(Cell c) const {
    const Cell l = local(c);
    return !blocked.contains(l) || blocked[l] != 0;
  }
};

/// Grows `obstacles` by a Euclidean disk of `radius` cells.
MaskGrid inflate(const MaskGrid& obstacles, double radius);

/// First-order upwind Eikonal solve (4-neighbour quadratic update) with a
/// min-heap narrow band. Throws FmmError when no source is passable.
ArrivalField fmm_field(const MaskGrid& obstacles, std::span<const Cell> sources, const FmmOptions& options = {});

/// True if the straight segment between two cell centres crosses no blocked cell.
bool line_of_sight(const MaskGrid& blocked, Cell from, Cell to);

}  // namespace frontnav

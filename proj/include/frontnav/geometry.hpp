#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace frontnav {

/// Grid index. Rows grow with world y, columns with world x.
struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

/// Unit vector for a heading in degrees. Heading 0 points along +x and
/// heading 90 along +y; with rows drawn top-down this is clockwise.
inline Vec2 heading_vector(double heading_deg) {
  const double rad = heading_deg * M_PI / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

/// Wraps an angle into [0, 360).
inline double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

/// Wraps an angle difference into (-180, 180].
inline double wrap_signed_degrees(double deg) {
  double w = wrap_degrees(deg);
  return w > 180.0 ? w - 360.0 : w;
}

/// Dense row-major 2D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative grid size");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  bool contains(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < rows_ && c.col < cols_; }
  bool contains(int r, int c) const { return contains(Cell{r, c}); }

  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }
  T& operator[](Cell c) { return data_[index(c.row, c.col)]; }
  const T& operator[](Cell c) const { return data_[index(c.row, c.col)]; }

  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }
  Cell cell_of(std::size_t i) const {
    return {static_cast<int>(i / cols_), static_cast<int>(i % cols_)};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using MaskGrid = Grid<std::uint8_t>;

/// Axis-aligned cell rectangle, inclusive bounds.
struct CellBox {
  int row0 = 0;
  int col0 = 0;
  int row1 = -1;
  int col1 = -1;

  bool empty() const { return row1 < row0 || col1 < col0; }
  friend bool operator==(const CellBox&, const CellBox&) = default;
  bool contains(Cell c) const {
    return c.row >= row0 && c.row <= row1 && c.col >= col0 && c.col <= col1;
  }
  void expand_to(Cell c) {
    if (empty()) {
      *this = {c.row, c.col, c.row, c.col};
      return;
    }
    row0 = std::min(row0, c.row);
    col0 = std::min(col0, c.col);
    row1 = std::max(row1, c.row);
    col1 = std::max(col1, c.col);
  }
  CellBox grown(int margin, int rows, int cols) const {
    if (empty()) return *this;
    return {std::max(0, row0 - margin), std::max(0, col0 - margin),
            std::min(rows - 1, row1 + margin), std::min(cols - 1, col1 + margin)};
  }
};

/// Maps world coordinates onto a square or rectangular cell lattice whose
/// cell (0,0) has its lower corner at `lower`.
struct GridFrame {
  Vec2 lower;
  double resolution = 1.0;
  int rows = 0;
  int cols = 0;

  // The small bias keeps points that sit on a cell corner by construction
  // from falling into the previous cell through rounding.
  Cell to_cell(Vec2 p) const {
    return {static_cast<int>(std::floor((p.y - lower.y) / resolution + 1e-9)),
            static_cast<int>(std::floor((p.x - lower.x) / resolution + 1e-9))};
  }
  Vec2 center_of(Cell c) const {
    return {lower.x + (c.col + 0.5) * resolution, lower.y + (c.row + 0.5) * resolution};
  }
  bool in_bounds(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < rows && c.col < cols; }
};

/// Walks the cells a ray passes through (Amanatides-Woo traversal), in order,
/// up to parametric distance `max_t`. `visit(cell, t_enter)` returns false to
/// stop. Cells outside the frame are still visited so callers decide what
/// "outside" means.
template <typename Visit>
void traverse_ray(const GridFrame& frame, Vec2 origin, Vec2 dir, double max_t, Visit&& visit) {
  const double res = frame.resolution;
  const double gx = (origin.x - frame.lower.x) / res;
  const double gy = (origin.y - frame.lower.y) / res;
  int col = static_cast<int>(std::floor(gx));
  int row = static_cast<int>(std::floor(gy));

  const int step_c = dir.x > 0 ? 1 : (dir.x < 0 ? -1 : 0);
  const int step_r = dir.y > 0 ? 1 : (dir.y < 0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const double t_delta_c = step_c != 0 ? res / std::abs(dir.x) : kInf;
  const double t_delta_r = step_r != 0 ? res / std::abs(dir.y) : kInf;
  double t_max_c = kInf;
  double t_max_r = kInf;
  if (step_c > 0) t_max_c = (std::floor(gx) + 1.0 - gx) * res / dir.x;
  if (step_c < 0) t_max_c = (gx - std::floor(gx)) * res / -dir.x;
  if (step_r > 0) t_max_r = (std::floor(gy) + 1.0 - gy) * res / dir.y;
  if (step_r < 0) t_max_r = (gy - std::floor(gy)) * res / -dir.y;

  double t = 0.0;
  while (t <= max_t) {
    if (!visit(Cell{row, col}, t)) return;
    if (t_max_c < t_max_r) {
      t = t_max_c;
      t_max_c += t_delta_c;
      col += step_c;
    } else {
      t = t_max_r;
      t_max_r += t_delta_r;
      row += step_r;
    }
  }
}

}  // namespace frontnav

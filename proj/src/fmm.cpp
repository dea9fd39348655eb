#include "frontnav/fmm.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace frontnav {

MaskGrid inflate(const MaskGrid& obstacles, double radius) {
  if (radius <= 0.0) return obstacles;
  const int r = static_cast<int>(std::floor(radius));
  std::vector<std::pair<int, int>> disk;
  for (int dr = -r; dr <= r; ++dr)
    for (int dc = -r; dc <= r; ++dc)
      if (dr * dr + dc * dc <= radius * radius) disk.emplace_back(dr, dc);

  MaskGrid out(obstacles.rows(), obstacles.cols(), 0);
  for (int row = 0; row < obstacles.rows(); ++row)
    for (int col = 0; col < obstacles.cols(); ++col) {
      if (!obstacles(row, col)) continue;
      for (const auto& [dr, dc] : disk) {
        const int rr = row + dr, cc = col + dc;
        if (out.contains(rr, cc)) out(rr, cc) = 1;
      }
    }
  return out;
}

bool line_of_sight(const MaskGrid& blocked, Cell from, Cell to) {
  const GridFrame frame{{0.0, 0.0}, 1.0, blocked.rows(), blocked.cols()};
  const Vec2 a{from.col + 0.5, from.row + 0.5};
  const Vec2 b{to.col + 0.5, to.row + 0.5};
  const Vec2 d = b - a;
  const double len = d.norm();
  if (len == 0.0) return blocked.contains(from) && !blocked[from];
  bool clear = true;
  traverse_ray(frame, a, d * (1.0 / len), len, [&](Cell c, double) {
    if (!blocked.contains(c) || blocked[c]) {
      clear = false;
      return false;
    }
    return c != to;
  });
  return clear;
}

namespace {

struct Entry {
  double time;
  std::size_t index;
  bool operator>(const Entry& o) const { return time > o.time || (time == o.time && index > o.index); }
};

}  // namespace

ArrivalField fmm_field(const MaskGrid& obstacles, std::span<const Cell> sources, const FmmOptions& options) {
  CellBox win = options.roi;
  if (win.empty()) win = {0, 0, obstacles.rows() - 1, obstacles.cols() - 1};
  win.row0 = std::max(win.row0, 0);
  win.col0 = std::max(win.col0, 0);
  win.row1 = std::min(win.row1, obstacles.rows() - 1);
  win.col1 = std::min(win.col1, obstacles.cols() - 1);
  const int rows = std::max(0, win.row1 - win.row0 + 1);
  const int cols = std::max(0, win.col1 - win.col0 + 1);

  ArrivalField field;
  field.resolution = options.resolution;
  field.offset = {win.row0, win.col0};

  MaskGrid crop(rows, cols, 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) crop(r, c) = obstacles(r + win.row0, c + win.col0) ? 1 : 0;
  field.blocked = inflate(crop, options.inflation_radius);
  if (options.passable) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if ((*options.passable)(r + win.row0, c + win.col0)) field.blocked(r, c) = 0;
  }
  const MaskGrid& blocked = field.blocked;

  for (const Cell& s : sources) {
    const Cell l = field.local(s);
    if (blocked.contains(l) && !blocked[l]) field.sources.push_back(s);
  }
  if (field.sources.empty()) throw FmmError("every source cell is blocked or outside the grid");

  // Work in cell units; scale on output.
  Grid<double> t(rows, cols, kUnreachable);
  MaskGrid accepted(rows, cols, 0);
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  for (const Cell& s : field.sources) {
    const Cell l = field.local(s);
    t[l] = 0.0;
    heap.push({0.0, t.index(l.row, l.col)});
  }
  if (options.seed_radius > 0) {
    const int R = options.seed_radius;
    for (const Cell& s : field.sources) {
      const Cell ls = field.local(s);
      for (int dr = -R; dr <= R; ++dr)
        for (int dc = -R; dc <= R; ++dc) {
          const Cell c{ls.row + dr, ls.col + dc};
          const double d = std::hypot(dr, dc);
          if (d > R || !t.contains(c) || blocked[c] || d >= t[c]) continue;
          if (!line_of_sight(blocked, ls, c)) continue;
          t[c] = d;
          heap.push({d, t.index(c.row, c.col)});
        }
    }
  }

  auto known = [&](int r, int c) {
    return (r >= 0 && c >= 0 && r < rows && c < cols && accepted(r, c)) ? t(r, c) : kUnreachable;
  };

  std::optional<Cell> stop_local;
  if (options.stop_after) stop_local = field.local(*options.stop_after);
  double stop_time = kUnreachable;
  constexpr int dr[] = {1, -1, 0, 0};
  constexpr int dc[] = {0, 0, 1, -1};
  while (!heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    if (top.time > stop_time) break;
    if (accepted.data()[top.index] || top.time > t.data()[top.index]) continue;
    accepted.data()[top.index] = 1;
    const Cell cur = t.cell_of(top.index);
    if (options.record_order) field.order.push_back({cur.row + win.row0, cur.col + win.col0});
    if (stop_local && *stop_local == cur) stop_time = top.time;

    for (int k = 0; k < 4; ++k) {
      const int nr = cur.row + dr[k], nc = cur.col + dc[k];
      if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
      if (accepted(nr, nc) || blocked(nr, nc)) continue;
      const double a = std::min(known(nr - 1, nc), known(nr + 1, nc));
      const double b = std::min(known(nr, nc - 1), known(nr, nc + 1));
      double candidate;
      if (std::abs(a - b) >= 1.0) {
        candidate = std::min(a, b) + 1.0;
      } else {
        candidate = 0.5 * (a + b + std::sqrt(2.0 - (a - b) * (a - b)));
      }
      if (candidate < t(nr, nc)) {
        t(nr, nc) = candidate;
        heap.push({candidate, t.index(nr, nc)});
      }
    }
  }

  for (std::size_t i = 0; i < t.size(); ++i) {
    if (accepted.data()[i]) t.data()[i] *= options.resolution;
    else t.data()[i] = kUnreachable;
  }
  field.times = std::move(t);
  return field;
}

}  // namespace frontnav

#include "ladmov/ground.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ladmov {

namespace {

struct Plane {
  // z = a*x + b*y + c
  double a = 0.0, b = 0.0, c = 0.0;
  bool valid = false;

  double distance(const Vec3& p) const {
    return std::abs(p.z() - a * p.x() - b * p.y() - c) / std::sqrt(1.0 + a * a + b * b);
  }
  double tilt() const { return std::atan(std::hypot(a, b)); }
};

int64_t cell_key(int32_t cx, int32_t cy) {
  return (static_cast<int64_t>(cx) << 32) ^ static_cast<int64_t>(static_cast<uint32_t>(cy));
}

/// Least-squares z = a*x + b*y + c over the selected points, centered for
/// conditioning. Nearly collinear sets degrade to a horizontal plane through
/// the mean height, which is the right answer for thin grazing arcs on
/// level ground.
Plane fit_plane(const std::vector<WorldPoint>& points, const std::vector<int>& idx) {
  Plane plane;
  const size_t n = idx.size();
  if (n == 0) return plane;

  Vec3 mean = Vec3::Zero();
  for (int i : idx) mean += points[i].position;
  mean /= static_cast<double>(n);

  double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
  for (int i : idx) {
    const Vec3 d = points[i].position - mean;
    sxx += d.x() * d.x();
    sxy += d.x() * d.y();
    syy += d.y() * d.y();
    sxz += d.x() * d.z();
    syz += d.y() * d.z();
  }
  const double det = sxx * syy - sxy * sxy;
  const double scale = sxx + syy;
  if (n < 3 || det <= 1e-6 * scale * scale + 1e-12) {
    plane.a = 0.0;
    plane.b = 0.0;
    plane.c = mean.z();
    plane.valid = true;
    return plane;
  }
  plane.a = (syy * sxz - sxy * syz) / det;
  plane.b = (sxx * syz - sxy * sxz) / det;
  plane.c = mean.z() - plane.a * mean.x() - plane.b * mean.y();
  plane.valid = true;
  return plane;
}

}  // namespace

std::vector<bool> classify_ground(const std::vector<WorldPoint>& points,
                                  const GroundParams& params) {
  if (points.empty()) throw std::invalid_argument("classify_ground: empty point list");
  if (params.cell_size <= 0.0 || params.height_tolerance <= 0.0 || params.max_tilt < 0.0 ||
      params.max_tilt >= M_PI / 2.0) {
    throw std::invalid_argument("classify_ground: parameters out of range");
  }

  struct Cell {
    std::vector<int> idx;
    Plane plane;
  };
  std::unordered_map<int64_t, Cell> cells;
  std::vector<std::pair<int32_t, int32_t>> coords(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    const int32_t cx = static_cast<int32_t>(std::floor(points[i].position.x() / params.cell_size));
    const int32_t cy = static_cast<int32_t>(std::floor(points[i].position.y() / params.cell_size));
    coords[i] = {cx, cy};
    cells[cell_key(cx, cy)].idx.push_back(static_cast<int>(i));
  }

  for (auto& [key, cell] : cells) {
    // Canonical in-cell order so the fit is independent of input permutation.
    std::sort(cell.idx.begin(), cell.idx.end(), [&](int lhs, int rhs) {
      const Vec3& a = points[lhs].position;
      const Vec3& b = points[rhs].position;
      if (a.z() != b.z()) return a.z() < b.z();
      if (a.x() != b.x()) return a.x() < b.x();
      return a.y() < b.y();
    });
    if (cell.idx.size() < static_cast<size_t>(params.min_points_per_cell)) continue;

    const size_t seed_count = std::max<size_t>(3, cell.idx.size() / 4);
    std::vector<int> active(cell.idx.begin(), cell.idx.begin() + seed_count);
    Plane plane = fit_plane(points, active);
    for (int iter = 0; iter < 2 && plane.valid; ++iter) {
      active.clear();
      for (int i : cell.idx) {
        if (plane.distance(points[i].position) <= params.height_tolerance) active.push_back(i);
      }
      if (active.size() < 3) break;
      plane = fit_plane(points, active);
    }
    if (plane.valid && plane.tilt() <= params.max_tilt) cell.plane = plane;
  }

  std::vector<bool> labels(points.size(), false);
  for (size_t i = 0; i < points.size(); ++i) {
    const auto [cx, cy] = coords[i];
    const Cell& cell = cells.at(cell_key(cx, cy));
    if (cell.plane.valid) {
      labels[i] = cell.plane.distance(points[i].position) <= params.height_tolerance;
      continue;
    }
    // No local plane: sparse or degenerate cell. Test against neighbor
    // planes so thin far-range ground strips do not survive as objects.
    for (int32_t dx = -1; dx <= 1 && !labels[i]; ++dx) {
      for (int32_t dy = -1; dy <= 1 && !labels[i]; ++dy) {
        if (dx == 0 && dy == 0) continue;
        auto it = cells.find(cell_key(cx + dx, cy + dy));
        if (it == cells.end() || !it->second.plane.valid) continue;
        labels[i] = it->second.plane.distance(points[i].position) <= params.height_tolerance;
      }
    }
  }
  return labels;
}

}  // namespace ladmov

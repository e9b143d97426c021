#include "ladmov/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ladmov {

namespace {

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  size_t find(size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so representatives follow scan order.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<size_t> parent_;
};

}  // namespace

double depth_threshold(double depth, const ClusterParams& params) {
  if (!(depth > 0.0)) throw std::invalid_argument("depth_threshold: depth must be positive");
  return std::max(params.dt_floor, params.dt_coefficient * depth);
}

std::vector<ObjectCluster> cluster_frame(const LadarFrame& frame,
                                         const std::vector<bool>& nonground,
                                         const SensorPose& pose, const ClusterParams& params) {
  if (nonground.size() != frame.cell_count()) {
    throw std::invalid_argument("cluster_frame: mask size does not match frame grid");
  }
  if (params.neighborhood != 4 && params.neighborhood != 8) {
    throw std::invalid_argument("cluster_frame: neighborhood must be 4 or 8");
  }

  const uint32_t rows = frame.rows;
  const uint32_t cols = frame.cols;
  auto usable = [&](uint32_t r, uint32_t c) {
    const size_t idx = static_cast<size_t>(r) * cols + c;
    return nonground[idx] && std::isfinite(frame.ranges[idx]);
  };

  UnionFind uf(frame.cell_count());
  // Join each usable cell with its already-scanned neighbors; the resulting
  // partition is independent of traversal order.
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      if (!usable(r, c)) continue;
      const size_t idx = static_cast<size_t>(r) * cols + c;
      const double range = frame.ranges[idx];

      struct Offset {
        int dr, dc;
      };
      static constexpr Offset kEight[] = {{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
      static constexpr Offset kFour[] = {{0, -1}, {-1, 0}};
      const Offset* offsets = params.neighborhood == 8 ? kEight : kFour;
      const int count = params.neighborhood == 8 ? 4 : 2;
      for (int k = 0; k < count; ++k) {
        const int nr = static_cast<int>(r) + offsets[k].dr;
        const int nc = static_cast<int>(c) + offsets[k].dc;
        if (nr < 0 || nc < 0 || nc >= static_cast<int>(cols)) continue;
        if (!usable(nr, nc)) continue;
        const size_t nidx = static_cast<size_t>(nr) * cols + nc;
        const double nrange = frame.ranges[nidx];
        if (std::abs(range - nrange) < depth_threshold(std::min(range, nrange), params)) {
          uf.unite(idx, nidx);
        }
      }
    }
  }

  // Gather components keyed by root; roots are minimal cell indices, so
  // ordering roots ascending assigns ids in scan order.
  std::vector<std::vector<size_t>> members;
  std::vector<size_t> root_of(frame.cell_count(), std::numeric_limits<size_t>::max());
  std::vector<size_t> roots;
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      if (!usable(r, c)) continue;
      const size_t idx = static_cast<size_t>(r) * cols + c;
      const size_t root = uf.find(idx);
      if (root_of[root] == std::numeric_limits<size_t>::max()) {
        root_of[root] = members.size();
        roots.push_back(root);
        members.emplace_back();
      }
      members[root_of[root]].push_back(idx);
    }
  }

  const Mat3 rot = pose.rotation();
  std::vector<ObjectCluster> clusters;
  int next_id = 0;
  for (const std::vector<size_t>& cells : members) {
    if (cells.size() < static_cast<size_t>(params.min_cluster_points)) continue;
    ObjectCluster cluster;
    cluster.cluster_id = next_id++;
    cluster.points.reserve(cells.size());
    Vec3 sum = Vec3::Zero();
    double range_sum = 0.0;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (size_t idx : cells) {
      const uint32_t r = static_cast<uint32_t>(idx / cols);
      const uint32_t c = static_cast<uint32_t>(idx % cols);
      const double range = frame.ranges[idx];
      WorldPoint p;
      p.position = pose.position + rot * (range * beam_direction(frame, r, c));
      p.sensor_distance = range;
      p.grid_row = r;
      p.grid_col = c;
      sum += p.position;
      range_sum += range;
      lo = lo.cwiseMin(p.position);
      hi = hi.cwiseMax(p.position);
      cluster.points.push_back(std::move(p));
    }
    cluster.centroid = sum / static_cast<double>(cluster.points.size());
    cluster.mean_sensor_distance = range_sum / static_cast<double>(cluster.points.size());
    cluster.bounding_box = BoundingBox{lo, hi};
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace ladmov

#pragma once

#include <vector>

#include "ladmov/frame.hpp"

namespace ladmov {

struct ClusterParams {
  double dt_coefficient = 0.03;  // d_T = dt_coefficient * depth
  double dt_floor = 0.1;         // meters, minimum separation threshold
  int min_cluster_points = 5;
  int neighborhood = 8;  // 4 or 8 connected grid adjacency
};

struct BoundingBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array() - 1e-12).all() && (p.array() <= max.array() + 1e-12).all();
  }
  Vec3 extent() const { return max - min; }
};

struct ObjectCluster {
  int cluster_id = 0;
  std::vector<WorldPoint> points;
  Vec3 centroid = Vec3::Zero();
  double mean_sensor_distance = 0.0;
  BoundingBox bounding_box;
};

/// Depth-proportional separation threshold: max(dt_floor, dt_coefficient * depth).
double depth_threshold(double depth, const ClusterParams& params);

/// Region growing over the angle-depth grid. Adjacent non-ground cells merge
/// when their range difference stays under the depth threshold evaluated at
/// the nearer of the two ranges. `nonground` is row-major over the frame
/// grid; cells without a return are ignored regardless of the mask. Clusters
/// smaller than min_cluster_points are dropped; ids follow scan order.
std::vector<ObjectCluster> cluster_frame(const LadarFrame& frame,
                                         const std::vector<bool>& nonground,
                                         const SensorPose& pose, const ClusterParams& params);

}  // namespace ladmov

#pragma once

#include <vector>

#include "ladmov/frame.hpp"

namespace ladmov {

struct GroundParams {
  double cell_size = 2.0;          // meters, horizontal tiling
  double height_tolerance = 0.15;  // meters, point-to-plane distance
  double max_tilt = 20.0 * M_PI / 180.0;  // radians, normal deviation from vertical
  int min_points_per_cell = 5;
};

/// Labels each point true when it lies on the local ground surface.
///
/// Points are tiled into horizontal cells of cell_size. Each cell with enough
/// points gets a least-squares plane seeded from its lowest-z quartile and
/// refined with two inlier-reselection passes. Cells whose plane tilts more
/// than max_tilt from vertical, or that have too few points, label nothing;
/// their points are then tested against valid neighbor-cell planes so sparse
/// far-range ground does not leak into clustering.
std::vector<bool> classify_ground(const std::vector<WorldPoint>& points,
                                  const GroundParams& params);

}  // namespace ladmov

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ladmov/types.hpp"

namespace ladmov {

/// One sweep of the scanning Ladar: a rows x cols grid of range returns
/// indexed by (elevation row, azimuth column). NaN marks a no-return cell.
struct LadarFrame {
  uint32_t rows = 0;
  uint32_t cols = 0;
  double az_start = 0.0;  // azimuth of column 0, radians, +left
  double az_step = 0.0;
  double el_start = 0.0;  // elevation of row 0, radians, +up
  double el_step = 0.0;
  std::vector<float> ranges;  // row-major, meters
  double timestamp = 0.0;
  uint32_t frame_id = 0;

  float range_at(uint32_t row, uint32_t col) const {
    return ranges[static_cast<size_t>(row) * cols + col];
  }
  float& range_at(uint32_t row, uint32_t col) {
    return ranges[static_cast<size_t>(row) * cols + col];
  }
  size_t cell_count() const { return static_cast<size_t>(rows) * cols; }
};

/// World-frame sensor pose at one frame time. Axis convention is
/// forward-x / left-y / up-z; rotation composes as yaw(z) * pitch(y) * roll(x).
struct SensorPose {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  double timestamp = 0.0;

  Mat3 rotation() const {
    return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
            Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
            Eigen::AngleAxisd(roll, Vec3::UnitX()))
        .toRotationMatrix();
  }
};

/// A single range hit projected into the world frame. Keeps the source grid
/// indices so labels can be mapped back onto the angle-depth grid.
struct WorldPoint {
  Vec3 position = Vec3::Zero();
  double sensor_distance = 0.0;
  uint32_t grid_row = 0;
  uint32_t grid_col = 0;
};

/// Unit direction of the (row, col) beam in the sensor frame.
/// Boresight (az = el = 0) is +x; positive azimuth turns toward +y.
Vec3 beam_direction(const LadarFrame& frame, uint32_t row, uint32_t col);

/// Project every finite-range cell into the world frame using the pose.
/// Pose and frame timestamps must agree.
std::vector<WorldPoint> project_frame(const LadarFrame& frame, const SensorPose& pose);

}  // namespace ladmov

#include "ladmov/frame.hpp"

#include <stdexcept>

namespace ladmov {

Vec3 beam_direction(const LadarFrame& frame, uint32_t row, uint32_t col) {
  if (row >= frame.rows || col >= frame.cols) {
    throw std::out_of_range("beam_direction: cell (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside " + std::to_string(frame.rows) +
                            "x" + std::to_string(frame.cols) + " frame");
  }
  const double az = frame.az_start + col * frame.az_step;
  const double el = frame.el_start + row * frame.el_step;
  const double ce = std::cos(el);
  return Vec3(ce * std::cos(az), ce * std::sin(az), std::sin(el));
}

std::vector<WorldPoint> project_frame(const LadarFrame& frame, const SensorPose& pose) {
  if (std::abs(pose.timestamp - frame.timestamp) > 1e-9) {
    throw std::invalid_argument("project_frame: pose timestamp " +
                                std::to_string(pose.timestamp) + " does not match frame " +
                                std::to_string(frame.timestamp));
  }
  const Mat3 rot = pose.rotation();
  std::vector<WorldPoint> points;
  points.reserve(frame.cell_count());
  for (uint32_t r = 0; r < frame.rows; ++r) {
    for (uint32_t c = 0; c < frame.cols; ++c) {
      const float range = frame.range_at(r, c);
      if (!std::isfinite(range)) continue;
      WorldPoint p;
      p.position = pose.position + rot * (static_cast<double>(range) * beam_direction(frame, r, c));
      p.sensor_distance = range;
      p.grid_row = r;
      p.grid_col = c;
      points.push_back(p);
    }
  }
  return points;
}

}  // namespace ladmov

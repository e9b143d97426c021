#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ladmov/frame.hpp"

namespace ladmov {

/// A frame paired with the sensor pose it was captured from.
struct FrameRecord {
  LadarFrame frame;
  SensorPose pose;
};

/// Binary sequence file, little-endian. Layout: magic "LDR1", then per frame:
/// frame_id u32, timestamp f64, pose 6 x f64 (x, y, z, yaw, pitch, roll),
/// rows u32, cols u32, az_start/az_step/el_start/el_step f64,
/// ranges rows*cols x f32 with NaN marking no return.
void write_sequence(const std::string& path, const std::vector<FrameRecord>& records);

/// Reads a whole sequence. Throws ParseError with the byte offset of the
/// offending frame on malformed input, and enforces strictly increasing
/// timestamps and frame ids.
std::vector<FrameRecord> read_sequence(const std::string& path);

void write_record(std::ostream& out, const FrameRecord& record);

}  // namespace ladmov

#include "ladmov/frame_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

namespace ladmov {

namespace {

constexpr char kMagic[4] = {'L', 'D', 'R', '1'};
constexpr uint64_t kMaxCells = 64u * 1024u * 1024u;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return static_cast<bool>(in);
}

}  // namespace

void write_record(std::ostream& out, const FrameRecord& record) {
  const LadarFrame& f = record.frame;
  const SensorPose& p = record.pose;
  put(out, f.frame_id);
  put(out, f.timestamp);
  put(out, p.position.x());
  put(out, p.position.y());
  put(out, p.position.z());
  put(out, p.yaw);
  put(out, p.pitch);
  put(out, p.roll);
  put(out, f.rows);
  put(out, f.cols);
  put(out, f.az_start);
  put(out, f.az_step);
  put(out, f.el_start);
  put(out, f.el_step);
  out.write(reinterpret_cast<const char*>(f.ranges.data()),
            static_cast<std::streamsize>(f.ranges.size() * sizeof(float)));
}

void write_sequence(const std::string& path, const std::vector<FrameRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  for (const FrameRecord& rec : records) write_record(out, rec);
  if (!out) throw std::runtime_error("write failed on " + path);
}

std::vector<FrameRecord> read_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("bad magic in " + path, 0);
  }

  std::vector<FrameRecord> records;
  double prev_time = -std::numeric_limits<double>::infinity();
  long long prev_id = -1;
  for (;;) {
    const long long offset = static_cast<long long>(in.tellg());
    FrameRecord rec;
    LadarFrame& f = rec.frame;
    SensorPose& p = rec.pose;
    if (!get(in, f.frame_id)) {
      if (in.eof()) break;
      throw ParseError("truncated frame header in " + path, offset);
    }
    bool ok = get(in, f.timestamp);
    double px = 0, py = 0, pz = 0;
    ok = ok && get(in, px) && get(in, py) && get(in, pz);
    ok = ok && get(in, p.yaw) && get(in, p.pitch) && get(in, p.roll);
    ok = ok && get(in, f.rows) && get(in, f.cols);
    ok = ok && get(in, f.az_start) && get(in, f.az_step);
    ok = ok && get(in, f.el_start) && get(in, f.el_step);
    if (!ok) throw ParseError("truncated frame header in " + path, offset);
    p.position = Vec3(px, py, pz);
    p.timestamp = f.timestamp;

    if (f.rows < 1 || f.cols < 1 || f.az_step <= 0.0 || f.el_step <= 0.0 ||
        static_cast<uint64_t>(f.rows) * f.cols > kMaxCells) {
      throw ParseError("invalid frame geometry in " + path, offset);
    }
    if (static_cast<long long>(f.frame_id) <= prev_id || f.timestamp <= prev_time) {
      throw ParseError("frame ids / timestamps not strictly increasing in " + path, offset);
    }
    prev_id = f.frame_id;
    prev_time = f.timestamp;

    f.ranges.resize(f.cell_count());
    in.read(reinterpret_cast<char*>(f.ranges.data()),
            static_cast<std::streamsize>(f.ranges.size() * sizeof(float)));
    if (!in) throw ParseError("truncated range block in " + path, offset);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace ladmov

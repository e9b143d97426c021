#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ladmov {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Thrown when a discretization produces no mass on the target grid,
/// typically because the observation fell entirely outside it. Callers in
/// the tracker treat this as an occlusion / failed observation.
class EmptyGridError : public std::runtime_error {
 public:
  explicit EmptyGridError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure in a frame file, scene file or config file. `offset` is a
/// byte offset for binary inputs and a line number for text inputs.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long long offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  long long offset() const { return offset_; }

 private:
  long long offset_;
};

/// Config or scene value outside its declared bounds, or an unknown key.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ladmov

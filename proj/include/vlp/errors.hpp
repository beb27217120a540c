#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vlp {

/// Degenerate anchor geometry: too few anchors, collinear layout, or an
/// anchor outside the emitter/receiver cones.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Received power is unusable (non-positive or below the detection floor).
class SignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or plan; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data; maps to CLI exit code 3.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace vlp

#pragma once

#include <stdexcept>
#include <string>

namespace geopath {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  OpenCurve,
  Domain,
  SweepTooLarge,
  FrameNotOrthonormal,
  NonCyclicFrame,
  NonCyclic,
  UnitarityLost,
  ComplexEnvelope,
  CutoffTooSmall,
  DetuningTooSmall,
  Config,
  Io,
};

/// Stable snake_case name, used in machine-readable error output.
const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace geopath

#include "geopath/error.hpp"

namespace geopath {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::OpenCurve: return "open_curve";
    case ErrorKind::Domain: return "domain_error";
    case ErrorKind::SweepTooLarge: return "sweep_too_large";
    case ErrorKind::FrameNotOrthonormal: return "frame_not_orthonormal";
    case ErrorKind::NonCyclicFrame: return "non_cyclic_frame";
    case ErrorKind::NonCyclic: return "non_cyclic";
    case ErrorKind::UnitarityLost: return "unitarity_lost";
    case ErrorKind::ComplexEnvelope: return "complex_envelope";
    case ErrorKind::CutoffTooSmall: return "cutoff_too_small";
    case ErrorKind::DetuningTooSmall: return "detuning_too_small";
    case ErrorKind::Config: return "config_error";
    case ErrorKind::Io: return "io_error";
  }
  return "unknown";
}

}  // namespace geopath

#include "armpose/error.hpp"

namespace armpose {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::UnsupportedDesign: return "UnsupportedDesign";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::InvalidAxis: return "InvalidAxis";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LimitViolation: return "LimitViolation";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::OutOfBound: return "OutOfBound";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace armpose

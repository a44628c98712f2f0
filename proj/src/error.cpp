#include "xcflab/error.hpp"

namespace xcf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveMetric: return "NonPositiveMetric";
    case ErrorCode::StencilUnderflow: return "StencilUnderflow";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::NonPositiveEin: return "NonPositiveEin";
    case ErrorCode::NonSymmetricA: return "NonSymmetricA";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::EinDegenerate: return "EinDegenerate";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::MismatchedGrids: return "MismatchedGrids";
    case ErrorCode::ZeroCovector: return "ZeroCovector";
    case ErrorCode::NonConvergentExtraction: return "NonConvergentExtraction";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace xcf

#include "rescomp/core/error.hpp"

namespace rescomp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyKeepSet: return "EmptyKeepSet";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InfeasibleAtUpperBound: return "InfeasibleAtUpperBound";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::TargetIsFree: return "TargetIsFree";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rescomp

#include "qslab/error.hpp"

namespace qslab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::NonRealExpectation: return "NonRealExpectation";
    case ErrorCode::VanishingPostselection: return "VanishingPostselection";
    case ErrorCode::SingularReference: return "SingularReference";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::DegenerateObservable: return "DegenerateObservable";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ValidationDrift: return "ValidationDrift";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace qslab

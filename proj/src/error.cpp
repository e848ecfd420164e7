#include "coherence/error.hpp"

namespace coherence {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::DegenerateDiagonal: return "DegenerateDiagonal";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::EmptyState: return "EmptyState";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace coherence

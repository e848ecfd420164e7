#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coherence {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  NotUnitTrace,
  NotPSD,
  NotFinite,
  DimensionTooSmall,
  EigenSolverFailure,
  InvalidRank,
  WrongDimension,
  DegenerateDiagonal,
  AllZero,
  InternalInvariantViolation,
  EmptyState,
  NotNormalized,
  GridTooCoarse,
  InvalidParameter,
  GridMismatch,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code identifies the failure.
class CoherenceError : public std::runtime_error {
 public:
  CoherenceError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Validation-type failures (bad input) vs. logic failures.
  bool is_internal() const noexcept {
    return code_ == ErrorCode::InternalInvariantViolation ||
           code_ == ErrorCode::EigenSolverFailure;
  }

 private:
  ErrorCode code_;
};

}  // namespace coherence

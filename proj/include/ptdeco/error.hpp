#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptdeco {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonDiagonalizable,
  Overflow,
  NotHermitian,
  NegativeEigenvalue,
  InvalidParity,
  BrokenPhase,
  ExceptionalPoint,
  IllConditioned,
  DegenerateSpectrum,
  PhaseNotReal,
  NotDensityMatrix,
  QuadratureFailure,
  InvalidExponent,
  InconsistentInitialState,
  DimensionCap,
  TruncationWarning,
  LengthMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ptdeco

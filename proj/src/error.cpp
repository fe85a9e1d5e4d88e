#include "ptdeco/error.hpp"

namespace ptdeco {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonDiagonalizable: return "NonDiagonalizable";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::InvalidParity: return "InvalidParity";
    case ErrorCode::BrokenPhase: return "BrokenPhase";
    case ErrorCode::ExceptionalPoint: return "ExceptionalPoint";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::PhaseNotReal: return "PhaseNotReal";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InconsistentInitialState: return "InconsistentInitialState";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::TruncationWarning: return "TruncationWarning";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace ptdeco

#include "nlkl/errors.hpp"

namespace nlkl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::DegenerateSupport: return "DegenerateSupport";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::AllSpacesSingular: return "AllSpacesSingular";
    case ErrorCode::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::NoPositiveSpectrum: return "NoPositiveSpectrum";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::ZeroTruth: return "ZeroTruth";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidRange:
    case ErrorCode::LengthMismatch:
    case ErrorCode::Config:
    case ErrorCode::Io:
      return 2;
    case ErrorCode::EmptySupport:
    case ErrorCode::DegenerateData:
    case ErrorCode::DegenerateSupport:
    case ErrorCode::ZeroTruth:
      return 3;
    case ErrorCode::SingularBasis:
    case ErrorCode::AllSpacesSingular:
    case ErrorCode::QuadratureNoConvergence:
    case ErrorCode::FactorizationFailure:
    case ErrorCode::NoPositiveSpectrum:
    case ErrorCode::StabilityViolation:
      return 4;
  }
  return 4;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace nlkl

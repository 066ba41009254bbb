#pragma once

#include <stdexcept>
#include <string>

namespace nlkl {

enum class ErrorCode {
  InvalidArgument,
  InvalidSpec,
  InvalidRange,
  LengthMismatch,
  Config,
  Io,
  EmptySupport,
  DegenerateData,
  DegenerateSupport,
  SingularBasis,
  AllSpacesSingular,
  QuadratureNoConvergence,
  FactorizationFailure,
  NoPositiveSpectrum,
  StabilityViolation,
  ZeroTruth,
};

const char* to_string(ErrorCode code);

/// Process exit code for an error: 2 configuration, 3 degenerate data,
/// 4 numerical failure.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlkl

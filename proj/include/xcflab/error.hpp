#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xcf {

/// Failure categories shared by every module. The CLI maps these onto exit
/// codes; tests match on them.
enum class ErrorCode {
  NonPositiveMetric,
  StencilUnderflow,
  DegeneratePlane,
  NonPositiveEin,
  NonSymmetricA,
  JacobiViolation,
  EinDegenerate,
  CflViolation,
  MismatchedGrids,
  ZeroCovector,
  NonConvergentExtraction,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the flow integrators when the smallest Einstein eigenvalue drops
/// below the degeneracy floor. Carries the flow time.
class EinDegenerateError : public Error {
 public:
  EinDegenerateError(double t, const std::string& what)
      : Error(ErrorCode::EinDegenerate, what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace xcf

#pragma once

#include <stdexcept>
#include <string>

namespace cmono {

enum class ErrorCode {
  InvalidSpec,
  CauchyHasNoMoments,
  NonpositiveScale,
  BranchCutHit,
  DegreeOverflow,
  NotAProbabilityH,
  NotFiniteVariance,
  NonconvergentLadder,
  NoSignChange,
  SizeCap,
  InconsistentSystem,
  NonPolynomialGrowth,
  TransformInapplicable,
  NotInvertible,
  MalformedWord,
  LeftUpperHalfPlane,
  InsufficientOrder,
  NotNormalized,
};

// Validation errors come from bad input; numeric errors from a computation that
// could not meet its own postcondition.
enum class ErrorClass { Validation, Numeric };

const char* error_name(ErrorCode code);
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorClass klass() const noexcept { return error_class(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace cmono

#pragma once

#include <stdexcept>
#include <string>

namespace lundberg {

enum class ErrorCode {
  invalid_parameter,
  non_positive_mean,
  no_negative_mass,
  moment_diverges,
  empty_conditioning_set,
  empty_tail,
  no_root,
  tolerance_not_met,
  step_limit_exceeded,
  overflow_guard,
  parse_error,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_parameter: return "InvalidParameter";
    case ErrorCode::non_positive_mean: return "NonPositiveMean";
    case ErrorCode::no_negative_mass: return "NoNegativeMass";
    case ErrorCode::moment_diverges: return "MomentDiverges";
    case ErrorCode::empty_conditioning_set: return "EmptyConditioningSet";
    case ErrorCode::empty_tail: return "EmptyTail";
    case ErrorCode::no_root: return "NoRoot";
    case ErrorCode::tolerance_not_met: return "ToleranceNotMet";
    case ErrorCode::step_limit_exceeded: return "StepLimitExceeded";
    case ErrorCode::overflow_guard: return "OverflowGuard";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace lundberg

#pragma once

#include <stdexcept>
#include <string>

namespace hrc {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  ForceBudgetExceeded,
  SamplingExhausted,
  InvalidEndpoint,
  PlanningFailed,
  NoBimanualPose,
  NoHandoverPose,
  OwnerMismatch,
  ParseError,
  InvariantViolation,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ForceBudgetExceeded: return "ForceBudgetExceeded";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::InvalidEndpoint: return "InvalidEndpoint";
    case ErrorCode::PlanningFailed: return "PlanningFailed";
    case ErrorCode::NoBimanualPose: return "NoBimanualPose";
    case ErrorCode::NoHandoverPose: return "NoHandoverPose";
    case ErrorCode::OwnerMismatch: return "OwnerMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace hrc

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace commute {

enum class ErrorCode {
  OrderingViolation,
  NonPositiveCapacity,
  NegativeParameter,
  FareDominance,
  DivisionByZeroPopulation,
  PrecondModeMix,
  PrecondViolation,
  NoConsistentPattern,
  InconsistentOutcome,
  ParseError,
  ValidationError,
  VerificationFailed,
};

std::string_view to_string(ErrorCode code);

// All model errors carry a machine-checkable code next to the message.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::NonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::NegativeParameter: return "NegativeParameter";
    case ErrorCode::FareDominance: return "FareDominance";
    case ErrorCode::DivisionByZeroPopulation: return "DivisionByZeroPopulation";
    case ErrorCode::PrecondModeMix: return "PrecondModeMix";
    case ErrorCode::PrecondViolation: return "PrecondViolation";
    case ErrorCode::NoConsistentPattern: return "NoConsistentPattern";
    case ErrorCode::InconsistentOutcome: return "InconsistentOutcome";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

}  // namespace commute

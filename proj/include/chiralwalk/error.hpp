#pragma once

#include <stdexcept>
#include <string>

namespace chiralwalk {

// Failure codes shared across the library. CLI exit codes are mapped from
// these in tools/; library code reports them through Error.
enum class ErrorCode {
  NonSquare,
  NotHermitian,
  ConvergenceFailure,
  NonUnitPhase,
  TooLarge,
  PeriodMismatch,
  NonFinite,
  CurveThroughOrigin,
  RefinementExhausted,
  NotHermitianFamily,
  OutOfDomain,
  UndefinedQuotient,
  NotFredholm,
  UnsupportedPeriod,
  SupremumViolated,
  FredholmViolated,
  ZeroIndex,
  WindowTooSmall,
  SandwichFailure,
  NotPeriodic,
  NonPositive,
  SchemaError,
  RangeError,
  IoError,
  InternalError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NonUnitPhase: return "NonUnitPhase";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::CurveThroughOrigin: return "CurveThroughOrigin";
    case ErrorCode::RefinementExhausted: return "RefinementExhausted";
    case ErrorCode::NotHermitianFamily: return "NotHermitianFamily";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::UndefinedQuotient: return "UndefinedQuotient";
    case ErrorCode::NotFredholm: return "NotFredholm";
    case ErrorCode::UnsupportedPeriod: return "UnsupportedPeriod";
    case ErrorCode::SupremumViolated: return "SupremumViolated";
    case ErrorCode::FredholmViolated: return "FredholmViolated";
    case ErrorCode::ZeroIndex: return "ZeroIndex";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::SandwichFailure: return "SandwichFailure";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chiralwalk

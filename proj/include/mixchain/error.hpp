#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixchain {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NonSquare,
  InvalidDimension,
  NegativeEntry,
  RowSumOutOfTolerance,
  NotIrreducible,
  SingularSystem,
  InvariantViolation,
  StateOutOfRange,
  InvalidCaseParams,
  EpsilonOutOfRange,
  SupportMismatch,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumOutOfTolerance: return "RowSumOutOfTolerance";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::StateOutOfRange: return "StateOutOfRange";
    case ErrorCode::InvalidCaseParams: return "InvalidCaseParams";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message holds the human-readable detail (row/column, offending value).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixchain

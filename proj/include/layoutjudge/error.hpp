#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace layoutjudge {

enum class ErrorCode {
  kParseError,
  kInvariantViolation,
  kDisconnectedGraph,
  kGraphTooLarge,
  kSizeTooSmall,
  kDegenerateLayout,
  kZeroLengthEdge,
  kDimensionMismatch,
  kEmptyInput,
  kVersionMismatch,
  kChecksumMismatch,
  kTooFewGraphs,
  kUnknownGroup,
  kIoError,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kGraphTooLarge: return "GraphTooLarge";
    case ErrorCode::kSizeTooSmall: return "SizeTooSmall";
    case ErrorCode::kDegenerateLayout: return "DegenerateLayout";
    case ErrorCode::kZeroLengthEdge: return "ZeroLengthEdge";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kTooFewGraphs: return "TooFewGraphs";
    case ErrorCode::kUnknownGroup: return "UnknownGroup";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported as an Error carrying
/// a code. The CLI maps any Error to exit status 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace layoutjudge

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdlrt {

enum class ErrorCode {
  NotPositiveDefinite,
  DegenerateColumn,
  IndexOutOfRange,
  NegativeEigenvalue,
  DimensionExceedsSample,
  DimensionMismatch,
  InvalidDesign,
  InvalidAlpha,
  InvalidPlan,
  InvalidArgument,
  ZeroVariance,
  SingularMatrix,
  IoError,
  ParseError,
  RaggedRows,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; the code tells
// callers (the CLI in particular) which class of failure occurred.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hdlrt

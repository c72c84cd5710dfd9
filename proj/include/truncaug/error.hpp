#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace truncaug {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidRow,
  kSupportMismatch,
  kEmptySet,
  kWindowSuspect,
  kNotStochastic,
  kDominanceViolation,
  kMissingRow,
  kClassNotClosed,
  kNoConvergence,
  kMultipleClosedClasses,
  kInfiniteSupportNoBound,
  kNotStronglyUniformlyRecurrent,
  kInvalidMinorization,
  kConfig,
  kParse,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure
/// class so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace truncaug

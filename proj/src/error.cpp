#include "truncaug/error.hpp"

namespace truncaug {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidRow: return "InvalidRow";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kWindowSuspect: return "WindowSuspect";
    case ErrorCode::kNotStochastic: return "NotStochastic";
    case ErrorCode::kDominanceViolation: return "DominanceViolation";
    case ErrorCode::kMissingRow: return "MissingRow";
    case ErrorCode::kClassNotClosed: return "ClassNotClosed";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kMultipleClosedClasses: return "MultipleClosedClasses";
    case ErrorCode::kInfiniteSupportNoBound: return "InfiniteSupportNoBound";
    case ErrorCode::kNotStronglyUniformlyRecurrent: return "NotStronglyUniformlyRecurrent";
    case ErrorCode::kInvalidMinorization: return "InvalidMinorization";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace truncaug

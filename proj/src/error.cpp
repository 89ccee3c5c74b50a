#include "qvar/error.hpp"

namespace qvar {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNotSorted: return "NotSorted";
    case ErrorCode::kDuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::kFirstServiceNotImmediate: return "FirstServiceNotImmediate";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kNotBijection: return "NotBijection";
    case ErrorCode::kNotRealizable: return "NotRealizable";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNoBadPairs: return "NoBadPairs";
    case ErrorCode::kMalformedTrace: return "MalformedTrace";
    case ErrorCode::kEmptyAfterWarmup: return "EmptyAfterWarmup";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kUnstable: return "Unstable";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace qvar

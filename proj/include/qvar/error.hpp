#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qvar {

enum class ErrorCode {
  kLengthMismatch,
  kNotSorted,
  kDuplicateTimestamp,
  kFirstServiceNotImmediate,
  kInfeasible,
  kEmptyInput,
  kSizeMismatch,
  kNotBijection,
  kNotRealizable,
  kTooLarge,
  kNoBadPairs,
  kMalformedTrace,
  kEmptyAfterWarmup,
  kInvalidConfig,
  kInvalidRate,
  kUnstable,
  kParse,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qvar

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrgame {

enum class ErrorCode {
  kDomain,
  kNonInvertible,
  kUnknownName,
  kParamOutOfRange,
  kOrderingViolation,
  kInvalidGFunction,
  kUndefinedCorrelation,
  kConfig,
  kFormat,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corrgame

#include "corrgame/types.hpp"

#include <string>

#include <fmt/format.h>

#include "corrgame/error.hpp"

namespace corrgame {

namespace {
constexpr double kClampSlack = 1e-12;

double clamp_checked(double v, double lo, double hi, const char* what) {
  if (!(v >= lo - kClampSlack && v <= hi + kClampSlack)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("{} {} outside [{}, {}]", what, v, lo, hi));
  }
  if (v < lo) return lo;
  if (v > hi) return hi;
  return v;
}
}  // namespace

Angle::Angle(double radians)
    : value_(clamp_checked(radians, 0.0, kPi, "angle")) {}

Probability::Probability(double p)
    : value_(clamp_checked(p, 0.0, 1.0, "probability")) {}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kNonInvertible: return "non_invertible";
    case ErrorCode::kUnknownName: return "unknown_name";
    case ErrorCode::kParamOutOfRange: return "param_out_of_range";
    case ErrorCode::kOrderingViolation: return "ordering_violation";
    case ErrorCode::kInvalidGFunction: return "invalid_gfunction";
    case ErrorCode::kUndefinedCorrelation: return "undefined_correlation";
    case ErrorCode::kConfig: return "config_error";
    case ErrorCode::kFormat: return "format_error";
  }
  return "unknown";
}

}  // namespace corrgame

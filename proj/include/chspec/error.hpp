#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chspec {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  non_event,
  singular_interpolation,
  nonpositive_length,
  negative_mass,
  location_mismatch,
  root_count_mismatch,
  duplicate_eigenvalue,
  weight_nonpositive,
  not_an_eigenvalue,
  pole_hit,
  degree_stall,
  negative_length,
  round_trip_failure,
  nonpositive_product,
  support_not_covered,
  cross_check_failure,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::non_event: return "NonEvent";
    case ErrorCode::singular_interpolation: return "SingularInterpolation";
    case ErrorCode::nonpositive_length: return "NonpositiveLength";
    case ErrorCode::negative_mass: return "NegativeMass";
    case ErrorCode::location_mismatch: return "LocationMismatch";
    case ErrorCode::root_count_mismatch: return "RootCountMismatch";
    case ErrorCode::duplicate_eigenvalue: return "DuplicateEigenvalue";
    case ErrorCode::weight_nonpositive: return "WeightNonpositive";
    case ErrorCode::not_an_eigenvalue: return "NotAnEigenvalue";
    case ErrorCode::pole_hit: return "PoleHit";
    case ErrorCode::degree_stall: return "DegreeStall";
    case ErrorCode::negative_length: return "NegativeLength";
    case ErrorCode::round_trip_failure: return "RoundTripFailure";
    case ErrorCode::nonpositive_product: return "NonpositiveProduct";
    case ErrorCode::support_not_covered: return "SupportNotCovered";
    case ErrorCode::cross_check_failure: return "CrossCheckFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Failures caused by running out of working precision rather than by bad input.
  bool numerical() const noexcept {
    switch (code_) {
      case ErrorCode::root_count_mismatch:
      case ErrorCode::weight_nonpositive:
      case ErrorCode::degree_stall:
      case ErrorCode::negative_length:
      case ErrorCode::negative_mass:
      case ErrorCode::round_trip_failure:
      case ErrorCode::cross_check_failure:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace chspec

#pragma once

#include <stdexcept>
#include <string>

namespace delaycert {

/// Failure conditions surfaced by the library. Names mirror the error labels
/// used in reports and in the CLI exit-code mapping.
enum class Errc {
  // usage / validation
  delay_non_positive,
  eigenvalue_out_of_range,
  parse_error,
  validation_error,
  invalid_argument,
  index_error,
  off_grid,
  incompatible_init,
  step_too_coarse,
  // mathematical hypothesis not satisfied
  not_in_region,
  no_root,
  degenerate_region,
  // numerical failure
  contour_too_close,
  no_convergence,
  denominator_near_zero,
  near_degenerate,
  tolerance_not_met,
};

/// Coarse classification used by callers (the CLI maps these to exit codes).
enum class FailureClass { usage, hypothesis, numerical };

[[nodiscard]] constexpr FailureClass classify(Errc code) noexcept {
  switch (code) {
    case Errc::not_in_region:
    case Errc::no_root:
    case Errc::degenerate_region:
      return FailureClass::hypothesis;
    case Errc::contour_too_close:
    case Errc::no_convergence:
    case Errc::denominator_near_zero:
    case Errc::near_degenerate:
    case Errc::tolerance_not_met:
      return FailureClass::numerical;
    default:
      return FailureClass::usage;
  }
}

[[nodiscard]] constexpr const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::delay_non_positive: return "DelayNonPositive";
    case Errc::eigenvalue_out_of_range: return "EigenvalueOutOfRange";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::index_error: return "IndexError";
    case Errc::off_grid: return "OffGrid";
    case Errc::incompatible_init: return "IncompatibleInit";
    case Errc::step_too_coarse: return "StepTooCoarse";
    case Errc::not_in_region: return "NotInRegion";
    case Errc::no_root: return "NoRoot";
    case Errc::degenerate_region: return "DegenerateRegion";
    case Errc::contour_too_close: return "ContourTooClose";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::denominator_near_zero: return "DenominatorNearZero";
    case Errc::near_degenerate: return "NearDegenerate";
    case Errc::tolerance_not_met: return "ToleranceNotMet";
  }
  return "UnknownError";
}

/// Library exception type. what() is "<Name>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }
  [[nodiscard]] FailureClass failure_class() const noexcept { return classify(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace delaycert

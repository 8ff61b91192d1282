#pragma once

#include <stdexcept>
#include <string>

namespace ptor {

enum class errc {
  resolution_too_coarse,
  unsupported_dimension,
  unsupported_kind,
  invalid_mask,
  nonpositive_scale,
  no_convergence,
  negative_value_with_fractional_power,
  zero_denominator,
  non_positive_iterate,
  non_convex_domain_refused,
  supercritical_refused,
  no_zero_found,
  no_bracket,
  negative_field,
  not_nested,
  point_outside_domain,
  invalid_path_count,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::resolution_too_coarse: return "ResolutionTooCoarse";
    case errc::unsupported_dimension: return "UnsupportedDimension";
    case errc::unsupported_kind: return "UnsupportedKind";
    case errc::invalid_mask: return "InvalidMask";
    case errc::nonpositive_scale: return "NonpositiveScale";
    case errc::no_convergence: return "NoConvergence";
    case errc::negative_value_with_fractional_power:
      return "NegativeValueWithFractionalPower";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::non_positive_iterate: return "NonPositiveIterate";
    case errc::non_convex_domain_refused: return "NonConvexDomainRefused";
    case errc::supercritical_refused: return "SupercriticalRefused";
    case errc::no_zero_found: return "NoZeroFound";
    case errc::no_bracket: return "NoBracket";
    case errc::negative_field: return "NegativeField";
    case errc::not_nested: return "NotNested";
    case errc::point_outside_domain: return "PointOutsideDomain";
    case errc::invalid_path_count: return "InvalidPathCount";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

/// Library-wide exception type; `code()` identifies the failure class so
/// callers (and the CLI's error JSON) can react without string matching.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ptor

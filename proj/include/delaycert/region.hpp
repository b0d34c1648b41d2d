#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"

namespace delaycert {

// ============================================================================
// Stability set for reduced delay feedback
// ============================================================================
//
// For a component with reduced drift a = Re(lambda) and delay tau, the set of
// rotated feedback gains eta for which the closed loop is exponentially stable
// splits into three regimes by the sign of a. Every inequality below is
// strict: points on the bounding curves are classified as non-members, and
// distance_hint reports the slack of the binding inequality (positive inside,
// negative outside).

enum class RegionBranch { negative_re, zero_re, positive_re };

[[nodiscard]] constexpr const char* branch_name(RegionBranch b) noexcept {
  switch (b) {
    case RegionBranch::negative_re: return "negative_re";
    case RegionBranch::zero_re: return "zero_re";
    case RegionBranch::positive_re: return "positive_re";
  }
  return "negative_re";
}

struct RegionParams {
  double tau = 1.0;
  double a = 0.0;
};

inline const RegionParams& validate_region_params(const RegionParams& rp) {
  if (!std::isfinite(rp.tau) || !(rp.tau > 0.0))
    raise(Errc::delay_non_positive, "delay must be positive, got tau=" + std::to_string(rp.tau));
  if (!std::isfinite(rp.a)) raise(Errc::validation_error, "drift must be finite");
  if (rp.a > 1.0 / rp.tau)
    raise(Errc::eigenvalue_out_of_range, "drift a=" + std::to_string(rp.a) + " exceeds 1/tau=" +
                                             std::to_string(1.0 / rp.tau));
  return rp;
}

[[nodiscard]] inline RegionBranch branch_of(const RegionParams& rp) {
  if (rp.a < 0.0) return RegionBranch::negative_re;
  if (rp.a == 0.0) return RegionBranch::zero_re;
  return RegionBranch::positive_re;
}

struct MembershipVerdict {
  bool member = false;
  RegionBranch branch = RegionBranch::zero_re;
  /// Member admitted through the |eta| < |a| disc clause (negative_re only).
  bool via_disc = false;
  /// Signed slack of the binding constraint; magnitude is a cheap proxy for
  /// distance to the boundary, not an exact distance.
  double distance_hint = 0.0;
};

/// Polyline tracing the boundary curve; conjugate-symmetric, closed.
struct RegionBoundary {
  std::vector<Complex> points;
  bool closed = true;
};

namespace detail {

/// Angle the boundary curve assigns to modulus r (r >= |a|), negative_re case:
///   theta(r) = tau*x + arctan(x/|a|),  x = sqrt(r^2 - a^2).
/// zero_re:   theta(r) = tau*r + pi/2.
/// positive_re: theta(r) = tau*x - arctan(x/a) + pi.
[[nodiscard]] inline double boundary_angle(const RegionParams& rp, double x) {
  if (rp.a < 0.0) return rp.tau * x + std::atan(x / -rp.a);
  if (rp.a == 0.0) return rp.tau * x + 0.5 * kPi;
  return rp.tau * x - std::atan(x / rp.a) + kPi;
}

/// Bisection to floating-point resolution (max 200 halvings). fn must change
/// sign across [lo, hi].
template <class Fn>
[[nodiscard]] inline double bisect(Fn&& fn, double lo, double hi) {
  double flo = fn(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = fn(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Modulus at which the boundary curve reaches the negative real axis
/// (boundary angle pi). Solved by bisection in x = sqrt(r^2 - a^2) over the
/// bracket r in [|a| + root_tol, |a| + pi/tau + 1]; the angle is strictly
/// increasing in x for a <= 0 and changes sign exactly once past its minimum
/// for a > 0, so bisection converges to the unique crossing either way.
///
/// a == 0 has the closed form pi/(2 tau). For a == 1/tau the crossing
/// degenerates to x = 0 and NoRoot is raised naming the boundary case.
[[nodiscard]] inline double outer_radius(const RegionParams& rp,
                                         const ToleranceProfile& tol = {}) {
  validate_region_params(rp);
  if (rp.a == 0.0) return 0.5 * kPi / rp.tau;

  const double abs_a = std::abs(rp.a);
  const double r_lo = abs_a + tol.root_tol;
  const double r_hi = abs_a + kPi / rp.tau + 1.0;
  const auto to_x = [&](double r) { return std::sqrt((r - abs_a) * (r + abs_a)); };
  const auto gap = [&](double x) { return detail::boundary_angle(rp, x) - kPi; };

  const double x_lo = to_x(r_lo);
  const double x_hi = to_x(r_hi);
  if (gap(x_lo) >= 0.0) {
    // Only possible for a -> 1/tau, where the positive-branch angle already
    // starts at pi and the region has shrunk to nothing.
    raise(Errc::no_root,
          "boundary crossing degenerates at a = 1/tau (a=" + std::to_string(rp.a) + ")");
  }
  if (gap(x_hi) <= 0.0)
    raise(Errc::no_root, "boundary crossing not bracketed");  // unreachable for valid params

  const double x = detail::bisect(gap, x_lo, x_hi);
  return std::hypot(x, rp.a);
}

/// Strict membership test for a rotated gain eta. Never raises on boundary or
/// exterior points; parameter problems (bad tau, a > 1/tau, non-finite eta) do
/// raise.
[[nodiscard]] inline MembershipVerdict contains(const RegionParams& rp, Complex eta,
                                                const ToleranceProfile& tol = {}) {
  validate_region_params(rp);
  if (!is_finite(eta)) raise(Errc::validation_error, "gain must be finite");

  const RegionBranch branch = branch_of(rp);
  const double r = std::abs(eta);
  const double phi = std::abs(std::arg(eta));

  MembershipVerdict v;
  v.branch = branch;

  switch (branch) {
    case RegionBranch::negative_re: {
      const double abs_a = -rp.a;
      const double disc_slack = abs_a - r;
      if (disc_slack > 0.0) {
        v.member = true;
        v.via_disc = true;
        v.distance_hint = disc_slack;
        return v;
      }
      const double x = std::sqrt(std::max((r - abs_a) * (r + abs_a), 0.0));
      const double s_half = -(eta.real() + rp.a);
      const double s_radius = outer_radius(rp, tol) - r;
      const double s_angle = phi - detail::boundary_angle(rp, x);
      const double main_slack = std::min({s_half, s_radius, s_angle});
      v.member = main_slack > 0.0;
      v.distance_hint = std::max(main_slack, disc_slack);
      return v;
    }
    case RegionBranch::zero_re: {
      if (eta == Complex{0.0, 0.0}) {
        v.distance_hint = 0.0;
        return v;
      }
      const double s_half = -eta.real();
      const double s_radius = 0.5 * kPi / rp.tau - r;
      const double s_angle = phi - detail::boundary_angle(rp, r);
      v.distance_hint = std::min({s_half, s_radius, s_angle});
      v.member = v.distance_hint > 0.0;
      return v;
    }
    case RegionBranch::positive_re: {
      double r_pi = rp.a;  // empty-region limit when the crossing degenerates
      bool degenerate = false;
      try {
        r_pi = outer_radius(rp, tol);
      } catch (const Error& e) {
        if (e.code() != Errc::no_root) throw;
        degenerate = true;
      }
      if (degenerate || r < rp.a) {
        v.distance_hint = -std::abs(eta.real() + rp.a);
        if (!degenerate) v.distance_hint = std::min(r_pi - r, -(eta.real() + rp.a));
        return v;
      }
      const double x = std::sqrt(std::max((r - rp.a) * (r + rp.a), 0.0));
      const double s_half = -(eta.real() + rp.a);
      const double s_radius = r_pi - r;
      const double s_angle = phi - detail::boundary_angle(rp, x);
      v.distance_hint = std::min({s_half, s_radius, s_angle});
      v.member = v.distance_hint > 0.0;
      return v;
    }
  }
  return v;  // unreachable
}

/// Samples the bounding curve with n points on the upper half (n >= 16),
/// mirrors them across the real axis, and returns one closed polyline. Every
/// emitted point satisfies |Arg eta| == theta(|eta|) to root_tol accuracy.
///
/// For a < 0 the curve starts at eta = |a| on the positive real axis (the
/// angular curve meets the disc there at angle 0, so the disc closure arc is
/// the single starting point). For a > 0 with an empty region
/// DegenerateRegion is raised.
[[nodiscard]] inline RegionBoundary boundary(const RegionParams& rp, std::size_t n,
                                             const ToleranceProfile& tol = {}) {
  validate_region_params(rp);
  if (n < 16)
    raise(Errc::invalid_argument, "boundary needs n >= 16 samples, got " + std::to_string(n));

  double r_inner = 0.0;
  double r_outer = 0.0;
  switch (branch_of(rp)) {
    case RegionBranch::negative_re:
      r_inner = -rp.a;
      r_outer = outer_radius(rp, tol);
      break;
    case RegionBranch::zero_re:
      r_inner = 0.0;  // open limit; sampling starts one step in
      r_outer = 0.5 * kPi / rp.tau;
      break;
    case RegionBranch::positive_re:
      r_inner = rp.a;
      try {
        r_outer = outer_radius(rp, tol);
      } catch (const Error& e) {
        if (e.code() == Errc::no_root)
          raise(Errc::degenerate_region,
                "stability set is empty at a=" + std::to_string(rp.a) + ", tau=" +
                    std::to_string(rp.tau));
        throw;
      }
      break;
  }

  RegionBoundary out;
  out.points.reserve(2 * n);
  const bool open_inner = (branch_of(rp) == RegionBranch::zero_re);
  for (std::size_t i = 0; i < n; ++i) {
    // zero_re skips the excluded origin by starting at the first step.
    const double frac =
        open_inner ? static_cast<double>(i + 1) / static_cast<double>(n)
                   : static_cast<double>(i) / static_cast<double>(n - 1);
    const double r = r_inner + (r_outer - r_inner) * frac;
    const double x = std::sqrt(std::max((r - std::abs(rp.a)) * (r + std::abs(rp.a)), 0.0));
    const double theta = std::min(detail::boundary_angle(rp, rp.a == 0.0 ? r : x), kPi);
    out.points.push_back(std::polar(r, theta));
  }
  // Mirror across the real axis, walking back so the polyline stays closed.
  // Endpoints on the real axis (angle 0 or pi) are skipped to avoid repeats.
  for (std::size_t i = n - 1; i-- > 0;) {
    const Complex p = out.points[i];
    if (std::abs(p.imag()) == 0.0) continue;
    out.points.push_back(std::conj(p));
  }
  out.closed = true;
  return out;
}

}  // namespace delaycert

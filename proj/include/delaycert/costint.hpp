#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "delaycert/charfun.hpp"
#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"
#include "delaycert/quadrature.hpp"
#include "delaycert/region.hpp"

namespace delaycert {

// ============================================================================
// Infinite-horizon cost of a certified component
// ============================================================================
//
// For a component whose rotated gain lies in the stability set, the
// frequency-domain cost
//
//   J = (1/2pi) Integral dw / |iw - lambda - gamma e^{-iw tau}|^2
//
// is finite. Three independent routes compute it: closed forms split by the
// damping regime, a two-pole residue assembly, and adaptive quadrature with a
// certified truncation tail. Their mutual agreement is the library's core
// self-check.

enum class CostBranch { overdamped, critically_damped, underdamped, undamped };
enum class CostMethod { closed_form, residue, quadrature };

[[nodiscard]] constexpr const char* branch_name(CostBranch b) noexcept {
  switch (b) {
    case CostBranch::overdamped: return "overdamped";
    case CostBranch::critically_damped: return "critically_damped";
    case CostBranch::underdamped: return "underdamped";
    case CostBranch::undamped: return "undamped";
  }
  return "overdamped";
}

[[nodiscard]] constexpr const char* method_name(CostMethod m) noexcept {
  switch (m) {
    case CostMethod::closed_form: return "closed_form";
    case CostMethod::residue: return "residue";
    case CostMethod::quadrature: return "quadrature";
  }
  return "closed_form";
}

struct CostResult {
  double value = 0.0;
  CostBranch branch = CostBranch::overdamped;
  CostMethod method = CostMethod::closed_form;
  /// Numerical error estimate (panel estimates plus the certified truncation
  /// tail); quadrature only, 0 otherwise.
  double est_error = 0.0;
};

/// Quadratic-factor roots of the denominator: both satisfy
/// (z + conj(lambda)) (z - lambda) + |gamma|^2 = 0.
struct PolePair {
  Complex z1{0.0, 0.0};
  Complex z2{0.0, 0.0};
  bool double_root = false;
};

/// Damping regime split: |gamma| vs |Re lambda| with a relative collar of
/// width branch_tol * max(|Re lambda|, 1) around the critically damped line.
[[nodiscard]] inline CostBranch classify_branch(double a, double gamma_abs,
                                                const ToleranceProfile& tol = {}) {
  const double abs_a = std::abs(a);
  if (std::abs(gamma_abs - abs_a) <= tol.branch_tol * std::max(abs_a, 1.0))
    return CostBranch::critically_damped;
  return gamma_abs < abs_a ? CostBranch::overdamped : CostBranch::underdamped;
}

namespace detail {

inline constexpr double kDenominatorFloorFactor = 1e3;

inline void guard_denominator(double den, const ToleranceProfile& tol, const char* which) {
  if (std::abs(den) < kDenominatorFloorFactor * tol.root_tol)
    raise(Errc::denominator_near_zero,
          std::string(which) + " denominator " + std::to_string(den) +
              " is inside the numerical floor");
}

inline void require_member(double a, Complex gamma_rot, double tau, const ToleranceProfile& tol) {
  const MembershipVerdict v = contains(RegionParams{tau, a}, gamma_rot, tol);
  if (!v.member)
    raise(Errc::not_in_region, "rotated gain " + std::to_string(gamma_rot.real()) +
                                   (gamma_rot.imag() < 0 ? "-" : "+") +
                                   std::to_string(std::abs(gamma_rot.imag())) +
                                   "i lies outside the stability set (slack " +
                                   std::to_string(v.distance_hint) + ")");
}

/// Critically damped cost; also the confluent limit of both generic forms.
[[nodiscard]] inline double cost_critical(double a, Complex gamma_rot, double tau,
                                          const ToleranceProfile& tol) {
  const double den = gamma_rot.real() + a;
  guard_denominator(den, tol, "critically damped");
  return 0.5 * (a * tau - 1.0) / den;
}

}  // namespace detail

/// Closed-form cost. Raises NotInRegion for uncertified gains and
/// DenominatorNearZero within 1e3 * root_tol of a vanishing denominator.
[[nodiscard]] inline CostResult j_closed(const ComponentParams& p,
                                         const ToleranceProfile& tol = {}) {
  validate_component(p);
  const auto red = reduce_params(p);
  detail::require_member(red.a, red.gamma_rot, p.tau, tol);

  const double a = red.a;
  const double g = std::abs(p.gamma);
  const double tau = p.tau;
  const CostBranch branch = classify_branch(a, g, tol);

  CostResult out;
  out.branch = branch;
  out.method = CostMethod::closed_form;
  switch (branch) {
    case CostBranch::overdamped: {
      // Membership with |gamma| < |a| forces a < 0. The raw form carries
      // e^{+r tau} factors; dividing them out keeps every term in [0, 1]-ish
      // scale for arbitrarily stiff drifts. a + r underflows catastrophically
      // for g << |a|, so it is evaluated as g^2 / (a - r).
      const double r = std::sqrt((std::abs(a) - g) * (std::abs(a) + g));
      const double amr = a - r;
      const double w = (g / amr) * (g / amr);  // (a + r)/(a - r)
      const double decay = std::exp(-r * tau);
      const double decay2 = decay * decay;
      const double num = 1.0 - decay2 * w;
      const double den = 1.0 + decay * 2.0 * red.gamma_rot.real() / amr + decay2 * w;
      detail::guard_denominator(den, tol, "overdamped");
      out.value = num / (2.0 * r * den);
      break;
    }
    case CostBranch::critically_damped:
      out.value = detail::cost_critical(a, red.gamma_rot, tau, tol);
      break;
    case CostBranch::underdamped: {
      const double rho = std::sqrt((g - std::abs(a)) * (g + std::abs(a)));
      const double c = std::cos(rho * tau);
      const double s = std::sin(rho * tau);
      const double den = red.gamma_rot.real() + a * c + rho * s;
      detail::guard_denominator(den, tol, "underdamped");
      out.value = (a * s - rho * c) / (2.0 * rho * den);
      break;
    }
    case CostBranch::undamped:
      break;  // unreachable: classify_branch never returns it
  }
  return out;
}

[[nodiscard]] inline CostResult j_closed(Complex lambda, Complex gamma, double tau,
                                         const ToleranceProfile& tol = {}) {
  return j_closed(ComponentParams{lambda, gamma, {0.0, 0.0}, tau}, tol);
}

/// Cost of the undelayed-drift normal form dz/dt = gamma z(t - tau) + b u(t):
///   J = -cos(|gamma| tau) / (2 (Re gamma + |gamma| sin(|gamma| tau))).
[[nodiscard]] inline CostResult j_zero(Complex gamma, double tau,
                                       const ToleranceProfile& tol = {}) {
  if (!std::isfinite(tau) || !(tau > 0.0))
    raise(Errc::delay_non_positive, "delay must be positive, got tau=" + std::to_string(tau));
  if (!is_finite(gamma)) raise(Errc::validation_error, "gain must be finite");
  detail::require_member(0.0, gamma, tau, tol);

  const double g = std::abs(gamma);
  const double den = gamma.real() + g * std::sin(g * tau);
  detail::guard_denominator(den, tol, "undamped");
  CostResult out;
  out.value = -std::cos(g * tau) / (2.0 * den);
  out.branch = CostBranch::undamped;
  out.method = CostMethod::closed_form;
  return out;
}

/// Poles used by the residue route. double_root is set inside the critical
/// collar (both poles at i Im lambda).
[[nodiscard]] inline PolePair poles(const ComponentParams& p, const ToleranceProfile& tol = {}) {
  validate_component(p);
  const double a = p.lambda.real();
  const double beta = p.lambda.imag();
  const double g = std::abs(p.gamma);
  switch (classify_branch(a, g, tol)) {
    case CostBranch::critically_damped:
      return {Complex{0.0, beta}, Complex{0.0, beta}, true};
    case CostBranch::overdamped: {
      const double r = std::sqrt((std::abs(a) - g) * (std::abs(a) + g));
      return {Complex{-r, beta}, Complex{r, beta}, false};
    }
    default: {
      const double rho = std::sqrt((g - std::abs(a)) * (g + std::abs(a)));
      return {Complex{0.0, beta + rho}, Complex{0.0, beta - rho}, false};
    }
  }
}

/// Residue-assembled cost:
///   J = Re{ [ (lambda - z1) E(z1) + (z2 - lambda) E(z2) ] / (z2 - z1) },
///   E(s) = 1 / (s - lambda - gamma e^{-s tau}).
/// Independent of j_closed: only the pole locations are shared.
[[nodiscard]] inline CostResult j_residue(const ComponentParams& p,
                                          const ToleranceProfile& tol = {}) {
  validate_component(p);
  const auto red = reduce_params(p);
  detail::require_member(red.a, red.gamma_rot, p.tau, tol);

  const double g = std::abs(p.gamma);
  const CostBranch branch = classify_branch(red.a, g, tol);
  CostResult out;
  out.branch = branch;
  out.method = CostMethod::residue;

  if (g == 0.0) {
    // Both weights collapse; the surviving term is the plain 1/(2|a|) pole sum.
    out.value = -0.5 / red.a;
    return out;
  }
  if (branch == CostBranch::critically_damped) {
    // Confluent double pole: the residue limit equals the critical closed form.
    out.value = detail::cost_critical(red.a, red.gamma_rot, p.tau, tol);
    return out;
  }

  const PolePair pp = poles(p, tol);
  if (std::abs(pp.z2 - pp.z1) <= detail::kDenominatorFloorFactor * tol.root_tol)
    raise(Errc::near_degenerate, "pole pair separation " +
                                     std::to_string(std::abs(pp.z2 - pp.z1)) +
                                     " is inside the confluence floor");

  const CharacteristicFn chi{p};
  const auto term = [&](Complex z, Complex weight) -> Complex {
    if (weight == Complex{0.0, 0.0}) return {0.0, 0.0};
    if (-z.real() * p.tau > 690.0) {
      // e^{-z tau} overflows; the delay term dominates the resolvent there.
      return -weight * std::exp(z * p.tau) / p.gamma;
    }
    const Complex denom = eval(chi, z);
    if (denom == Complex{0.0, 0.0})
      raise(Errc::near_degenerate, "pole coincides with a characteristic root");
    return weight / denom;
  };

  const Complex sum = term(pp.z1, p.lambda - pp.z1) + term(pp.z2, pp.z2 - p.lambda);
  out.value = (sum / (pp.z2 - pp.z1)).real();
  return out;
}

/// Quadrature cost: globally adaptive Gauss-Kronrod over a window whose
/// truncation tail is bounded analytically. The window edge Omega satisfies
/// (1/pi) / (Omega - |lambda| - |gamma|) <= quad_tol / 2, and the in-window
/// panel budget gets the other half, so est_error <= quad_tol on success.
[[nodiscard]] inline CostResult j_quadrature(const ComponentParams& p,
                                             const ToleranceProfile& tol = {}) {
  validate_component(p);
  const auto red = reduce_params(p);
  detail::require_member(red.a, red.gamma_rot, p.tau, tol);

  const double reach = std::abs(p.lambda) + std::abs(p.gamma);
  const double omega_max =
      std::max(2.0 * reach + std::abs(p.lambda.imag()), reach + 2.0 / (kPi * tol.quad_tol));
  const double core = std::max(2.0 * reach + std::abs(p.lambda.imag()), 1.0);

  const double lre = p.lambda.real();
  const double lim = p.lambda.imag();
  const double gre = p.gamma.real();
  const double gim = p.gamma.imag();
  const double tau = p.tau;
  const auto integrand = [&](double w) {
    const double c = std::cos(w * tau);
    const double s = std::sin(w * tau);
    // gamma * e^{-i w tau} = (gre*c + gim*s) + i(gim*c - gre*s)
    const double dre = -lre - (gre * c + gim * s);
    const double dim = w - lim - (gim * c - gre * s);
    return 1.0 / (dre * dre + dim * dim);
  };

  std::vector<double> breaks;
  for (int i = 0; i <= 16; ++i)
    breaks.push_back(-core + 2.0 * core * static_cast<double>(i) / 16.0);
  for (double lo = core; lo < omega_max;) {
    const double hi = std::min(2.0 * lo, omega_max);
    breaks.push_back(hi);
    breaks.insert(breaks.begin(), -hi);
    lo = hi;
  }

  const double window_budget = kPi * tol.quad_tol;
  const auto r = detail::integrate_adaptive(integrand, breaks, window_budget, 200000);
  if (!r.converged)
    raise(Errc::tolerance_not_met,
          "adaptive quadrature stalled at estimated error " + std::to_string(r.abs_error) +
              " over " + std::to_string(r.panels) + " panels");

  const double tail_bound = (1.0 / kPi) / (omega_max - reach);
  CostResult out;
  out.value = r.value / (2.0 * kPi);
  out.branch = classify_branch(red.a, std::abs(p.gamma), tol);
  out.method = CostMethod::quadrature;
  out.est_error = r.abs_error / (2.0 * kPi) + tail_bound;
  return out;
}

}  // namespace delaycert

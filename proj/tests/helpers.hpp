#pragma once

//! Shared helpers for the unit test suite: deterministic parameter sampling
//! and exception-code capture.

#include <functional>
#include <optional>
#include <random>

#include "delaycert/costint.hpp"
#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"
#include "delaycert/region.hpp"

namespace testutil {

/// Runs `fn` and returns the error code it throws, or nullopt if it returns
/// normally. Lets tests assert on the exact failure class.
inline std::optional<delaycert::Errc> thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const delaycert::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Draws component parameters whose feedback coefficient lies strictly inside
/// the stability region, away from the boundary and away from the branch
/// collar of the closed-form cost. Used by cross-route agreement tests.
inline delaycert::ComponentParams sample_interior(std::mt19937_64& rng,
                                                  const delaycert::ToleranceProfile& tol = {}) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (;;) {
    const double tau = 0.1 + 4.9 * u01(rng);
    const double re_lambda = -4.0 + (1.0 / tau + 4.0) * u01(rng);
    if (re_lambda > 1.0 / tau - 1e-6) continue;
    const double im_lambda = -6.0 + 12.0 * u01(rng);
    const double reach = std::abs(re_lambda) + delaycert::kPi / tau;
    const delaycert::Complex gamma{reach * (2.0 * u01(rng) - 1.0),
                                   reach * (2.0 * u01(rng) - 1.0)};
    delaycert::ComponentParams p;
    p.lambda = {re_lambda, im_lambda};
    p.gamma = gamma;
    p.b = {2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0};
    p.tau = tau;
    const auto red = delaycert::reduce_params(p.lambda, p.gamma, p.tau);
    const auto verdict = delaycert::contains({p.tau, red.a}, red.gamma_rot, tol);
    if (!verdict.member) continue;
    if (verdict.distance_hint <= tol.boundary_eps) continue;
    // Keep clear of the branch collar so the closed form is well conditioned.
    const double gap = std::abs(std::abs(red.gamma_rot) - std::abs(red.a));
    if (gap <= 10.0 * tol.branch_tol * std::max(std::abs(red.a), 1.0)) continue;
    return p;
  }
}

}  // namespace testutil

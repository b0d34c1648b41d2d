#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "delaycert/errors.hpp"

namespace delaycert {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// ============================================================================
// Tolerances
// ============================================================================

/// Numerical knobs shared across the library. Every solver takes one of these
/// (defaulted); tests pin the defaults.
struct ToleranceProfile {
  /// Absolute target for the adaptive quadrature cost route.
  double quad_tol = 1e-9;
  /// Scalar root solves: bisection/Newton stopping and residual acceptance.
  double root_tol = 1e-12;
  /// Relative collar around |gamma| == |Re lambda| where the critically damped
  /// cost formula is used instead of the generic ones.
  double branch_tol = 1e-9;
  /// Width of the exclusion band around region boundaries used by membership
  /// consumers (grid comparisons, sampling filters).
  double boundary_eps = 1e-6;
};

// ============================================================================
// Component parameters
// ============================================================================

/// One scalar retarded component
///     dz/dt = lambda * z(t) + gamma * z(t - tau) + b * u(t).
struct ComponentParams {
  Complex lambda{0.0, 0.0};
  Complex gamma{0.0, 0.0};
  Complex b{0.0, 0.0};
  double tau = 1.0;
};

[[nodiscard]] inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Validates tau > 0, finiteness, and the retardedness bound Re(lambda) <= 1/tau.
/// Returns its argument so calls can be chained.
inline const ComponentParams& validate_component(const ComponentParams& p) {
  if (!std::isfinite(p.tau) || !(p.tau > 0.0))
    raise(Errc::delay_non_positive, "delay must be positive, got tau=" + std::to_string(p.tau));
  if (!is_finite(p.lambda) || !is_finite(p.gamma) || !is_finite(p.b))
    raise(Errc::validation_error, "component parameters must be finite");
  if (p.lambda.real() > 1.0 / p.tau)
    raise(Errc::eigenvalue_out_of_range,
          "Re(lambda)=" + std::to_string(p.lambda.real()) + " exceeds 1/tau=" +
              std::to_string(1.0 / p.tau));
  return p;
}

/// True when Re(lambda) sits on the 1/tau hypothesis edge. Certificates carry
/// this flag; such components are accepted but the stability set is empty there.
[[nodiscard]] inline bool on_hypothesis_boundary(const ComponentParams& p) {
  const double edge = 1.0 / p.tau;
  return std::abs(p.lambda.real() - edge) <= 1e-12 * std::max(1.0, std::abs(edge));
}

// ============================================================================
// Rotation reduction
// ============================================================================

/// Cost and stability depend on (lambda, gamma) only through
///   a         = Re(lambda)
///   gamma_rot = gamma * exp(-i * Im(lambda) * tau).
/// The reduction preserves |gamma|.
struct ReducedParams {
  double a = 0.0;
  Complex gamma_rot{0.0, 0.0};
};

[[nodiscard]] inline ReducedParams reduce_params(Complex lambda, Complex gamma, double tau) {
  if (!std::isfinite(tau) || !(tau > 0.0))
    raise(Errc::delay_non_positive, "delay must be positive, got tau=" + std::to_string(tau));
  if (!is_finite(lambda) || !is_finite(gamma))
    raise(Errc::validation_error, "reduce_params requires finite inputs");
  return {lambda.real(), gamma * std::polar(1.0, -lambda.imag() * tau)};
}

[[nodiscard]] inline ReducedParams reduce_params(const ComponentParams& p) {
  return reduce_params(p.lambda, p.gamma, p.tau);
}

// ============================================================================
// Coefficient rules and diagonal systems
// ============================================================================

enum class RuleKind { power, geometric, explicit_values };

/// Closed-form family for a coefficient sequence indexed by k = 1, 2, ...
///   power            : coeff * k^exponent
///   geometric        : coeff * ratio^k
///   explicit_values  : values[k-1]
struct Rule {
  RuleKind kind = RuleKind::power;
  Complex coeff{0.0, 0.0};
  double exponent = 0.0;
  Complex ratio{0.0, 0.0};
  std::vector<Complex> values;

  [[nodiscard]] Complex at(std::size_t k) const {
    if (k == 0) raise(Errc::index_error, "rule indices are 1-based");
    switch (kind) {
      case RuleKind::power:
        return coeff * std::pow(static_cast<double>(k), exponent);
      case RuleKind::geometric: {
        Complex acc{1.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) acc *= ratio;
        return coeff * acc;
      }
      case RuleKind::explicit_values:
        if (k > values.size())
          raise(Errc::index_error, "explicit rule has " + std::to_string(values.size()) +
                                       " entries, index " + std::to_string(k) + " requested");
        return values[k - 1];
    }
    raise(Errc::invalid_argument, "corrupt rule kind");
  }
};

[[nodiscard]] inline Rule power_rule(Complex coeff, double exponent) {
  Rule r;
  r.kind = RuleKind::power;
  r.coeff = coeff;
  r.exponent = exponent;
  return r;
}

[[nodiscard]] inline Rule geometric_rule(Complex coeff, Complex ratio) {
  Rule r;
  r.kind = RuleKind::geometric;
  r.coeff = coeff;
  r.ratio = ratio;
  return r;
}

[[nodiscard]] inline Rule explicit_rule(std::vector<Complex> values) {
  Rule r;
  r.kind = RuleKind::explicit_values;
  r.values = std::move(values);
  return r;
}

[[nodiscard]] inline Rule constant_rule(Complex value) { return power_rule(value, 0.0); }

/// generic : lambda_k, gamma_k, b_k all taken from rules.
/// heat    : lambda_k = -k^2 pinned; gamma_k, b_k from rules.
/// direct  : undelayed-drift normal form; the component is built with
///           lambda := 0 and gamma := lambda_rule(k).
enum class Preset { generic, heat, direct };

[[nodiscard]] constexpr const char* preset_name(Preset p) noexcept {
  switch (p) {
    case Preset::generic: return "generic";
    case Preset::heat: return "heat";
    case Preset::direct: return "direct";
  }
  return "generic";
}

/// Truncated diagonal system: components k = 1..N sharing one delay.
/// Components are assembled lazily and validated on access; either the three
/// rules or an explicit per-component list backs them.
struct DiagonalDelaySystem {
  double tau = 1.0;
  std::size_t N = 0;
  Preset preset = Preset::generic;
  Rule lambda_rule;
  Rule gamma_rule;
  Rule b_rule;
  std::vector<ComponentParams> explicit_components;

  [[nodiscard]] bool is_explicit() const { return !explicit_components.empty(); }

  [[nodiscard]] ComponentParams component(std::size_t k) const {
    if (k == 0 || k > N)
      raise(Errc::index_error,
            "component index " + std::to_string(k) + " outside 1.." + std::to_string(N));
    ComponentParams p;
    if (is_explicit()) {
      p = explicit_components[k - 1];
    } else {
      p.tau = tau;
      switch (preset) {
        case Preset::heat:
          p.lambda = Complex(-static_cast<double>(k) * static_cast<double>(k), 0.0);
          p.gamma = gamma_rule.at(k);
          break;
        case Preset::direct:
          p.lambda = Complex(0.0, 0.0);
          p.gamma = lambda_rule.at(k);
          break;
        case Preset::generic:
          p.lambda = lambda_rule.at(k);
          p.gamma = gamma_rule.at(k);
          break;
      }
      p.b = b_rule.at(k);
    }
    validate_component(p);
    return p;
  }
};

/// Builds an explicit system; all components must share the same delay.
[[nodiscard]] inline DiagonalDelaySystem make_explicit_system(
    std::vector<ComponentParams> components) {
  if (components.empty()) raise(Errc::validation_error, "component list must be nonempty");
  DiagonalDelaySystem sys;
  sys.tau = components.front().tau;
  sys.N = components.size();
  for (const auto& c : components) {
    if (c.tau != sys.tau)
      raise(Errc::validation_error, "explicit components must share one delay");
  }
  sys.explicit_components = std::move(components);
  return sys;
}

}  // namespace delaycert

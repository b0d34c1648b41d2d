#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "delaycert/costint.hpp"
#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"
#include "delaycert/parallel.hpp"
#include "delaycert/quadrature.hpp"
#include "delaycert/region.hpp"

namespace delaycert {

// ============================================================================
// Admissibility certificates
// ============================================================================
//
// Per component: C_k = |b_k|^2 J_k, and the finite-horizon energy bound uses
// (1 + tau) C_k. Per system: the truncated sum plus a d'Alembert tail bound
// driven by the empirically observed coefficient ratio.

struct ComponentCertificate {
  std::size_t k = 0;
  Complex lambda{0.0, 0.0};
  Complex gamma{0.0, 0.0};
  Complex b{0.0, 0.0};
  bool member = false;
  /// Re(lambda) sits exactly on the 1/tau hypothesis edge.
  bool hypothesis_boundary = false;
  double J = 0.0;
  double C = 0.0;
  double bound = 0.0;
};

enum class Verdict { certified_admissible, inconclusive, hypothesis_violated };

[[nodiscard]] constexpr const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::certified_admissible: return "CertifiedAdmissible";
    case Verdict::inconclusive: return "Inconclusive";
    case Verdict::hypothesis_violated: return "HypothesisViolated";
  }
  return "Inconclusive";
}

/// System-level certification report. Quantities that the verdict leaves
/// undefined (tail and global bound when not certified, ratio when
/// hypothesis_violated) are NaN; writers render them as null.
struct SystemReport {
  std::size_t N = 0;
  std::size_t K = 0;
  double q_cap = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::size_t violating_k = 0;  // first non-member, when hypothesis_violated
  double partial_sum = std::numeric_limits<double>::quiet_NaN();
  double empirical_ratio = std::numeric_limits<double>::quiet_NaN();
  double tail_bound = std::numeric_limits<double>::quiet_NaN();
  double global_bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<ComponentCertificate> certificates;
};

/// Certificate for one component; J is computed by the closed-form route.
/// Cost-route errors (DenominatorNearZero, ...) propagate; a gain outside the
/// stability set yields member = false with zeroed cost fields instead of
/// raising.
[[nodiscard]] inline ComponentCertificate component_bound(const ComponentParams& p,
                                                          const ToleranceProfile& tol = {},
                                                          std::size_t k = 0) {
  validate_component(p);
  ComponentCertificate cert;
  cert.k = k;
  cert.lambda = p.lambda;
  cert.gamma = p.gamma;
  cert.b = p.b;
  cert.hypothesis_boundary = on_hypothesis_boundary(p);
  const auto red = reduce_params(p);
  cert.member = contains(RegionParams{p.tau, red.a}, red.gamma_rot, tol).member;
  if (cert.member) {
    cert.J = j_closed(p, tol).value;
    cert.C = std::norm(p.b) * cert.J;
    cert.bound = (1.0 + p.tau) * cert.C;
  }
  return cert;
}

/// Certifies the truncation 1..N of a diagonal system. The coefficient ratio
/// is observed over k in [K, N); if its maximum stays below q_cap the tail
/// Sum_{k>N} C_k is bounded by C_N q / (1 - q) and the report is
/// CertifiedAdmissible with
///   global_bound = (1 + tau) (partial_sum + tail_bound).
/// A ratio above q_cap yields Inconclusive (partial data retained); the first
/// non-member component yields HypothesisViolated.
[[nodiscard]] inline SystemReport system_check(const DiagonalDelaySystem& sys, std::size_t N,
                                               std::size_t K, double q_cap,
                                               const ToleranceProfile& tol = {}) {
  if (N == 0 || N > sys.N)
    raise(Errc::index_error,
          "truncation N=" + std::to_string(N) + " outside 1.." + std::to_string(sys.N));
  if (K == 0 || K >= N)
    raise(Errc::index_error,
          "ratio window start K=" + std::to_string(K) + " must satisfy 1 <= K < N");
  if (!(q_cap > 0.0) || !(q_cap < 1.0))
    raise(Errc::invalid_argument, "q_cap must lie in (0, 1), got " + std::to_string(q_cap));

  SystemReport rep;
  rep.N = N;
  rep.K = K;
  rep.q_cap = q_cap;
  rep.certificates.assign(N, ComponentCertificate{});
  detail::parallel_for_1n(N, [&](std::size_t k) {
    rep.certificates[k - 1] = component_bound(sys.component(k), tol, k);
  });

  for (const auto& cert : rep.certificates) {
    if (!cert.member) {
      rep.verdict = Verdict::hypothesis_violated;
      rep.violating_k = cert.k;
      return rep;
    }
  }

  std::vector<double> coeffs(N);
  for (std::size_t k = 1; k <= N; ++k) coeffs[k - 1] = rep.certificates[k - 1].C;
  rep.partial_sum = detail::pairwise_sum(coeffs.data(), coeffs.size());

  double ratio = 0.0;
  for (std::size_t k = K; k < N; ++k) {
    const double num = coeffs[k];      // C_{k+1}
    const double den = coeffs[k - 1];  // C_k
    if (den == 0.0) {
      if (num == 0.0) continue;  // identically zero tail segment
      ratio = std::numeric_limits<double>::infinity();
      break;
    }
    ratio = std::max(ratio, num / den);
  }
  rep.empirical_ratio = ratio;

  if (ratio <= q_cap) {
    rep.verdict = Verdict::certified_admissible;
    rep.tail_bound = coeffs[N - 1] * ratio / (1.0 - ratio);
    rep.global_bound = (1.0 + sys.tau) * (rep.partial_sum + rep.tail_bound);
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

/// Certificate coefficient for the undelayed-drift normal form, evaluated
/// directly:
///   C = |b|^2 * ( -cos(|g| tau) / (2 (Re g + |g| sin(|g| tau))) ),  g = lambda_k.
/// Cross-checkable against |b|^2 * j_zero(lambda_k, tau).
[[nodiscard]] inline ComponentCertificate direct_component_coeff(Complex lambda_k, Complex b_k,
                                                                 double tau,
                                                                 const ToleranceProfile& tol = {}) {
  if (!std::isfinite(tau) || !(tau > 0.0))
    raise(Errc::delay_non_positive, "delay must be positive, got tau=" + std::to_string(tau));
  if (!is_finite(lambda_k) || !is_finite(b_k))
    raise(Errc::validation_error, "coefficients must be finite");
  const MembershipVerdict v = contains(RegionParams{tau, 0.0}, lambda_k, tol);
  if (!v.member)
    raise(Errc::not_in_region, "generator eigenvalue lies outside the zero-drift stability set");

  const double g = std::abs(lambda_k);
  const double den = lambda_k.real() + g * std::sin(g * tau);
  detail::guard_denominator(den, tol, "undamped");

  ComponentCertificate cert;
  cert.k = 0;
  cert.lambda = Complex{0.0, 0.0};
  cert.gamma = lambda_k;
  cert.b = b_k;
  cert.member = true;
  cert.J = -std::cos(g * tau) / (2.0 * den);
  cert.C = std::norm(b_k) * cert.J;
  cert.bound = (1.0 + tau) * cert.C;
  return cert;
}

/// Heat-profile system: lambda_k = -k^2 pinned, delayed gains and input
/// weights from the given rules.
[[nodiscard]] inline DiagonalDelaySystem heat_preset(const Rule& gamma_rule, const Rule& b_rule,
                                                     double tau, std::size_t N) {
  if (!std::isfinite(tau) || !(tau > 0.0))
    raise(Errc::delay_non_positive, "delay must be positive, got tau=" + std::to_string(tau));
  if (N == 0) raise(Errc::validation_error, "heat preset needs N >= 1 components");
  DiagonalDelaySystem sys;
  sys.tau = tau;
  sys.N = N;
  sys.preset = Preset::heat;
  sys.gamma_rule = gamma_rule;
  sys.b_rule = b_rule;
  return sys;
}

/// Tail-ratio diagnostic: the observed last ratio next to the analytic
/// prediction |b_N|^2/|b_{N-1}|^2 * s_{N-1}/s_N, where s_k is the component's
/// decay scale |Re lambda_k| (|gamma_k| for the direct normal form, whose
/// drift is identically zero).
struct RatioDiagnostic {
  double empirical = 0.0;
  double analytic = 0.0;
};

[[nodiscard]] inline RatioDiagnostic ratio_limit_estimate(const DiagonalDelaySystem& sys,
                                                          std::size_t K, std::size_t N,
                                                          const ToleranceProfile& tol = {}) {
  if (N < 2 || N > sys.N)
    raise(Errc::index_error,
          "truncation N=" + std::to_string(N) + " outside 2.." + std::to_string(sys.N));
  if (K == 0 || K >= N)
    raise(Errc::index_error,
          "ratio window start K=" + std::to_string(K) + " must satisfy 1 <= K < N");

  const ComponentParams prev = sys.component(N - 1);
  const ComponentParams last = sys.component(N);
  const ComponentCertificate cp = component_bound(prev, tol, N - 1);
  const ComponentCertificate cl = component_bound(last, tol, N);
  if (!cp.member || !cl.member)
    raise(Errc::not_in_region, "ratio estimate needs certified trailing components");

  const auto scale = [](const ComponentParams& p) {
    const double a = std::abs(p.lambda.real());
    return a > 0.0 ? a : std::abs(p.gamma);
  };
  RatioDiagnostic d;
  d.empirical = cl.C / cp.C;
  d.analytic = (std::norm(last.b) / std::norm(prev.b)) * (scale(prev) / scale(last));
  return d;
}

}  // namespace delaycert

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"

namespace delaycert {

// ============================================================================
// Characteristic function and right-half-plane root counting
// ============================================================================

/// chi(s) = s - lambda - gamma * exp(-s tau). Input b is carried but unused.
struct CharacteristicFn {
  ComponentParams params;
};

[[nodiscard]] inline Complex eval(const CharacteristicFn& f, Complex s) {
  const auto& p = f.params;
  return s - p.lambda - p.gamma * std::exp(-s * p.tau);
}

/// d/ds chi(s) = 1 + tau * gamma * exp(-s tau).
[[nodiscard]] inline Complex derivative(const CharacteristicFn& f, Complex s) {
  const auto& p = f.params;
  return 1.0 + p.tau * p.gamma * std::exp(-s * p.tau);
}

struct ContourRect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

struct RootCount {
  int count = 0;
  ContourRect contour;
  double min_modulus_on_contour = 0.0;
};

namespace detail {

/// Appends n uniform samples of the segment [z0, z1), excluding the endpoint
/// (the next edge re-adds it).
inline void sample_edge(std::vector<Complex>& out, Complex z0, Complex z1, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    out.push_back(z0 + t * (z1 - z0));
  }
}

}  // namespace detail

/// Counts characteristic roots with Re s >= 0 by tracking the argument of
/// chi along a rectangle that provably encloses them: any root with
/// Re s >= 0 satisfies |s| <= |lambda| + |gamma|, so the rectangle
/// [0, R] x [-R, R] with R = |lambda| + |gamma| + 1 suffices.
///
/// The phase is accumulated with adaptive refinement: the per-edge sample
/// count doubles until every phase step is below pi/2 and two successive
/// refinements agree on the winding number. A contour point too close to a
/// root (min |chi| < 10 root_tol) raises ContourTooClose.
[[nodiscard]] inline RootCount count_unstable_roots(const CharacteristicFn& f,
                                                    const ToleranceProfile& tol = {}) {
  validate_component(f.params);
  const double R = std::abs(f.params.lambda) + std::abs(f.params.gamma) + 1.0;
  const ContourRect rect{0.0, R, -R, R};
  const Complex corners[4] = {{0.0, -R}, {R, -R}, {R, R}, {0.0, R}};

  long prev_winding = 0;
  bool have_prev = false;
  for (std::size_t n = 64; n <= (std::size_t{1} << 16); n *= 2) {
    std::vector<Complex> pts;
    pts.reserve(4 * n);
    for (int e = 0; e < 4; ++e) detail::sample_edge(pts, corners[e], corners[(e + 1) % 4], n);

    double min_mod = std::numeric_limits<double>::infinity();
    std::vector<Complex> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      vals[i] = eval(f, pts[i]);
      min_mod = std::min(min_mod, std::abs(vals[i]));
    }
    if (min_mod < 10.0 * tol.root_tol)
      raise(Errc::contour_too_close, "characteristic root within " +
                                         std::to_string(10.0 * tol.root_tol) +
                                         " of the counting contour");

    double total = 0.0;
    bool resolved = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const Complex ratio = vals[(i + 1) % vals.size()] / vals[i];
      const double step = std::arg(ratio);
      if (std::abs(step) >= 0.5 * kPi) {
        resolved = false;
        break;
      }
      total += step;
    }
    if (!resolved) {
      have_prev = false;
      continue;
    }

    const double turns = total / (2.0 * kPi);
    const long winding = std::lround(turns);
    if (std::abs(turns - static_cast<double>(winding)) > 0.1) {
      have_prev = false;
      continue;
    }
    if (have_prev && winding == prev_winding)
      return {static_cast<int>(winding), rect, min_mod};
    prev_winding = winding;
    have_prev = true;
  }
  raise(Errc::contour_too_close,
        "winding number did not stabilize; a root is likely near the contour");
}

/// Newton refinement of a characteristic root from a seed. Converges when
/// |chi(s)| <= root_tol; a vanishing derivative, a non-finite iterate, or the
/// 100-iteration cap raises NoConvergence.
[[nodiscard]] inline Complex refine_root(const CharacteristicFn& f, Complex seed,
                                         const ToleranceProfile& tol = {}) {
  validate_component(f.params);
  Complex s = seed;
  for (int it = 0; it < 100; ++it) {
    const Complex fv = eval(f, s);
    if (std::abs(fv) <= tol.root_tol) return s;
    const Complex dv = derivative(f, s);
    if (std::abs(dv) <= 1e-14 * (1.0 + std::abs(fv)))
      raise(Errc::no_convergence, "characteristic derivative vanishes near the iterate");
    s -= fv / dv;
    if (!is_finite(s)) raise(Errc::no_convergence, "Newton iteration diverged");
  }
  raise(Errc::no_convergence, "no characteristic root within 100 Newton steps of the seed");
}

}  // namespace delaycert

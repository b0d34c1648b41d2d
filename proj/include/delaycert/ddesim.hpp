#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "delaycert/costint.hpp"
#include "delaycert/errors.hpp"
#include "delaycert/model.hpp"
#include "delaycert/parallel.hpp"

namespace delaycert {

// ============================================================================
// Input signals
// ============================================================================

/// amplitude on [t0, t1), zero elsewhere; right-continuous at the jumps.
struct Indicator {
  double t0 = 0.0;
  double t1 = 1.0;
  Complex amplitude{1.0, 0.0};
};

/// Samples on the uniform grid {0, dt, 2dt, ...}; cubic interpolation between
/// nodes, zero outside the sampled range.
struct SampledGrid {
  double dt = 1.0;
  std::vector<Complex> values;
};

/// amplitude * e^{-decay t} * cos(freq t + phase) for t >= 0.
struct DampedSinusoid {
  Complex amplitude{1.0, 0.0};
  double decay = 0.0;
  double freq = 0.0;
  double phase = 0.0;
};

struct SinusoidSum {
  std::vector<DampedSinusoid> terms;
};

class InputSignal {
 public:
  InputSignal() : v_(SinusoidSum{}) {}

  explicit InputSignal(Indicator ind) : v_(ind) {
    if (!std::isfinite(ind.t0) || !std::isfinite(ind.t1) || !(ind.t0 < ind.t1) ||
        !is_finite(ind.amplitude))
      raise(Errc::validation_error, "indicator needs finite t0 < t1 and finite amplitude");
  }

  explicit InputSignal(SampledGrid grid) : v_(std::move(grid)) {
    const auto& g = std::get<SampledGrid>(v_);
    if (!std::isfinite(g.dt) || !(g.dt > 0.0) || g.values.size() < 2)
      raise(Errc::validation_error, "sampled input needs dt > 0 and at least two samples");
    for (Complex v : g.values)
      if (!is_finite(v)) raise(Errc::validation_error, "sampled input values must be finite");
  }

  explicit InputSignal(SinusoidSum sum) : v_(std::move(sum)) {
    for (const auto& term : std::get<SinusoidSum>(v_).terms)
      if (!is_finite(term.amplitude) || !std::isfinite(term.decay) || term.decay < 0.0 ||
          !std::isfinite(term.freq) || !std::isfinite(term.phase))
        raise(Errc::validation_error, "sinusoid terms need finite parameters, decay >= 0");
  }

  [[nodiscard]] static InputSignal zero() { return InputSignal(); }

  /// Pointwise value; right-continuous at jumps, zero for t < 0.
  [[nodiscard]] Complex value(double t) const {
    if (t < 0.0) return {0.0, 0.0};
    if (const auto* ind = std::get_if<Indicator>(&v_))
      return (t >= ind->t0 && t < ind->t1) ? ind->amplitude : Complex{0.0, 0.0};
    if (const auto* grid = std::get_if<SampledGrid>(&v_)) return sampled_value(*grid, t);
    Complex acc{0.0, 0.0};
    for (const auto& term : std::get<SinusoidSum>(v_).terms)
      acc += term.amplitude * std::exp(-term.decay * t) * std::cos(term.freq * t + term.phase);
    return acc;
  }

  /// |u(t)|^2 with the half-sum convention at jump points, which keeps the
  /// composite quadrature of the input energy exact for node-aligned jumps.
  [[nodiscard]] double abs2(double t) const {
    for (double d : discontinuities()) {
      if (std::abs(t - d) <= 1e-12 * std::max(1.0, std::abs(d)))
        return 0.5 * (std::norm(limit_left(d)) + std::norm(value(d)));
    }
    return std::norm(value(t));
  }

  /// Jump locations (node alignment lets the simulator split steps there).
  [[nodiscard]] std::vector<double> discontinuities() const {
    std::vector<double> out;
    if (const auto* ind = std::get_if<Indicator>(&v_)) {
      if (ind->t0 >= 0.0) out.push_back(ind->t0);
      out.push_back(ind->t1);
    } else if (const auto* grid = std::get_if<SampledGrid>(&v_)) {
      if (std::norm(grid->values.front()) > 0.0) out.push_back(0.0);
      if (std::norm(grid->values.back()) > 0.0)
        out.push_back(grid->dt * static_cast<double>(grid->values.size() - 1));
    } else {
      const auto& sum = std::get<SinusoidSum>(v_);
      if (!sum.terms.empty() && std::norm(value(0.0)) > 0.0) out.push_back(0.0);
    }
    return out;
  }

  /// End of support; +infinity for sinusoid sums (they are L2, not compact).
  [[nodiscard]] double support_end() const {
    if (const auto* ind = std::get_if<Indicator>(&v_)) return ind->t1;
    if (const auto* grid = std::get_if<SampledGrid>(&v_))
      return grid->dt * static_cast<double>(grid->values.size() - 1);
    return std::get<SinusoidSum>(v_).terms.empty() ? 0.0
                                                   : std::numeric_limits<double>::infinity();
  }

  /// True when the signal is constant between its discontinuities, letting
  /// integrator stages on a split step share one sample taken mid-segment.
  [[nodiscard]] bool piecewise_constant() const {
    return std::holds_alternative<Indicator>(v_);
  }

 private:
  [[nodiscard]] static Complex sampled_value(const SampledGrid& grid, double t) {
    const double q = t / grid.dt;
    const double last = static_cast<double>(grid.values.size() - 1);
    if (q < 0.0 || q > last) return {0.0, 0.0};
    const auto n = static_cast<long>(grid.values.size());
    if (n < 4) {  // linear fallback for short grids
      const long i0 = std::min<long>(static_cast<long>(q), n - 2);
      const double s = q - static_cast<double>(i0);
      return (1.0 - s) * grid.values[i0] + s * grid.values[i0 + 1];
    }
    long lo = static_cast<long>(std::floor(q)) - 1;
    lo = std::clamp<long>(lo, 0, n - 4);
    const double s = q - static_cast<double>(lo);
    const double d0 = s, d1 = s - 1.0, d2 = s - 2.0, d3 = s - 3.0;
    const double c0 = -d1 * d2 * d3 / 6.0;
    const double c1 = d0 * d2 * d3 / 2.0;
    const double c2 = -d0 * d1 * d3 / 2.0;
    const double c3 = d0 * d1 * d2 / 6.0;
    return c0 * grid.values[lo] + c1 * grid.values[lo + 1] + c2 * grid.values[lo + 2] +
           c3 * grid.values[lo + 3];
  }

  [[nodiscard]] Complex limit_left(double t) const {
    if (t <= 0.0) return {0.0, 0.0};
    if (const auto* ind = std::get_if<Indicator>(&v_))
      return (t > ind->t0 && t <= ind->t1) ? ind->amplitude : Complex{0.0, 0.0};
    if (const auto* grid = std::get_if<SampledGrid>(&v_)) {
      const double end = grid->dt * static_cast<double>(grid->values.size() - 1);
      if (t > end) return {0.0, 0.0};
      return sampled_value(*grid, t);
    }
    return value(t);  // sinusoid sums are continuous on (0, inf)
  }

  std::variant<Indicator, SampledGrid, SinusoidSum> v_;
};

// ============================================================================
// Method-of-steps trajectory
// ============================================================================

/// Uniform-grid trajectory with the delay interval kept in-band:
/// storage index i holds node j = i - m, nodes run j = -m..n, dt * m == tau.
struct Trajectory {
  double tau = 1.0;
  double dt = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<Complex> z;

  [[nodiscard]] double t_end() const { return dt * static_cast<double>(n); }
  [[nodiscard]] double node_time(long j) const { return dt * static_cast<double>(j); }
  [[nodiscard]] Complex at_node(long j) const {
    if (j < -static_cast<long>(m) || j > static_cast<long>(n))
      raise(Errc::index_error, "node " + std::to_string(j) + " outside trajectory");
    return z[static_cast<std::size_t>(j + static_cast<long>(m))];
  }
};

/// Extended initial state: head value x and history samples f on [-tau, 0]
/// (m + 1 uniform samples, last one at time 0). An empty history means the
/// zero function.
struct InitState {
  Complex x{0.0, 0.0};
  std::vector<Complex> history;
};

[[nodiscard]] inline InitState zero_init() { return {}; }

template <class F>
[[nodiscard]] inline InitState make_init(Complex x, F&& f, double tau, std::size_t m) {
  InitState s;
  s.x = x;
  s.history.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    s.history[i] = f(-tau + tau * static_cast<double>(i) / static_cast<double>(m));
  return s;
}

/// Explicit one-step stability cap: the integrator rejects |lambda| dt beyond
/// this (the classical fourth-order stability interval ends at 2.785; the
/// margin keeps per-step amplification of the stiff drift below one).
inline constexpr double kExplicitStabilityLimit = 2.5;

/// Energy-bound acceptance slack used by verify_bound.
inline constexpr double kBoundRatioTol = 1e-3;

namespace detail {

/// Cubic Lagrange read of the trajectory at fractional storage position q,
/// snapping to the node when q is within 1e-9 of an integer. The solution is
/// smooth only between multiples of the delay (storage nodes p m, where the
/// method-of-steps segments meet with derivative kinks), so the four-node
/// stencil around q is clamped to the segment [p m, (p+1) m] containing it;
/// interpolation then never differences across a kink and each polynomial
/// segment of degree <= 3 is reproduced exactly.
[[nodiscard]] inline Complex read_delayed(const std::vector<Complex>& z, double q,
                                          std::size_t m) {
  const double qr = std::round(q);
  if (std::abs(q - qr) < 1e-9) {
    const long i = std::clamp<long>(static_cast<long>(qr), 0, static_cast<long>(z.size()) - 1);
    return z[static_cast<std::size_t>(i)];
  }
  const long piece = static_cast<long>(std::floor(q)) / static_cast<long>(m);
  const long piece_lo = piece * static_cast<long>(m);
  const long piece_hi = piece_lo + static_cast<long>(m);
  long lo = static_cast<long>(std::floor(q)) - 1;
  lo = std::clamp<long>(lo, piece_lo, piece_hi - 3);
  lo = std::clamp<long>(lo, 0, static_cast<long>(z.size()) - 4);
  const double s = q - static_cast<double>(lo);
  const double d0 = s, d1 = s - 1.0, d2 = s - 2.0, d3 = s - 3.0;
  const double c0 = -d1 * d2 * d3 / 6.0;
  const double c1 = d0 * d2 * d3 / 2.0;
  const double c2 = -d0 * d1 * d3 / 2.0;
  const double c3 = d0 * d1 * d2 / 6.0;
  const auto i = static_cast<std::size_t>(lo);
  return c0 * z[i] + c1 * z[i + 1] + c2 * z[i + 2] + c3 * z[i + 3];
}

}  // namespace detail

/// Classical fourth-order integration of
///   dz/dt = lambda z(t) + gamma z(t - tau) + b u(t)
/// on the uniform grid dt = tau / m (m >= 8), reading the delayed value
/// through a cubic stencil (exact at nodes). Steps are split at input jumps
/// that fall strictly inside them, so the integrator never differences across
/// a discontinuity; the delay kinks at multiples of tau are node-aligned by
/// construction and cost no order.
[[nodiscard]] inline Trajectory simulate_component(const ComponentParams& p, const InputSignal& u,
                                                   const InitState& init, double t_end,
                                                   std::size_t m,
                                                   const ToleranceProfile& tol = {}) {
  validate_component(p);
  if (m < 8)
    raise(Errc::step_too_coarse, "need m >= 8 subdivisions per delay, got " + std::to_string(m));
  const double dt = p.tau / static_cast<double>(m);
  if (std::abs(p.lambda) * dt > kExplicitStabilityLimit) {
    const auto needed = static_cast<std::size_t>(
        std::ceil(std::abs(p.lambda) * p.tau / kExplicitStabilityLimit));
    raise(Errc::step_too_coarse, "|lambda| dt = " + std::to_string(std::abs(p.lambda) * dt) +
                                     " outside the explicit stability interval; need m >= " +
                                     std::to_string(needed));
  }
  if (!std::isfinite(t_end) || !(t_end > 0.0))
    raise(Errc::invalid_argument, "t_end must be positive");

  Trajectory tr;
  tr.tau = p.tau;
  tr.dt = dt;
  tr.m = m;
  tr.n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  tr.z.assign(m + tr.n + 1, Complex{0.0, 0.0});

  if (!init.history.empty()) {
    if (init.history.size() != m + 1)
      raise(Errc::invalid_argument, "history needs m + 1 samples on [-tau, 0], got " +
                                        std::to_string(init.history.size()));
    if (std::abs(init.history.back() - init.x) > tol.root_tol)
      raise(Errc::incompatible_init, "history(0) disagrees with the head value x");
    std::copy(init.history.begin(), init.history.end(), tr.z.begin());
  } else if (std::abs(init.x) > tol.root_tol) {
    raise(Errc::incompatible_init, "zero history requires x = 0");
  }
  tr.z[m] = init.x;

  const std::vector<double> jumps = u.discontinuities();
  const bool u_const_segments = u.piecewise_constant();

  std::vector<double> cuts;
  for (std::size_t j = 0; j < tr.n; ++j) {
    const double t0 = dt * static_cast<double>(j);
    const double t1 = dt * static_cast<double>(j + 1);

    cuts.clear();
    cuts.push_back(t0);
    for (double d : jumps) {
      const double snap = 1e-12 * std::max(1.0, std::abs(d));
      if (d > t0 + snap && d < t1 - snap) cuts.push_back(d);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(t1);

    Complex y = tr.z[j + m];
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double s = cuts[c];
      const double e = cuts[c + 1];
      const double h = e - s;
      const Complex u_mid = u.value(0.5 * (s + e));
      const auto rhs = [&](double t, Complex w) {
        const double q = (t - p.tau) / dt + static_cast<double>(m);
        const Complex uval = u_const_segments ? u_mid : u.value(t);
        return p.lambda * w + p.gamma * detail::read_delayed(tr.z, q, m) + p.b * uval;
      };
      const Complex k1 = rhs(s, y);
      const Complex k2 = rhs(s + 0.5 * h, y + (0.5 * h) * k1);
      const Complex k3 = rhs(s + 0.5 * h, y + (0.5 * h) * k2);
      const Complex k4 = rhs(e, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    tr.z[j + 1 + m] = y;
  }
  return tr;
}

/// Squared extended-state norm at a grid time t = j dt:
///   |z(t)|^2 + Integral_{t-tau}^{t} |z|^2,
/// the history integral by composite Simpson (even m) or trapezoid (odd m).
/// Off-grid times raise OffGrid.
[[nodiscard]] inline double extended_norm(const Trajectory& tr, double t,
                                          const ToleranceProfile& tol = {}) {
  (void)tol;
  const double q = t / tr.dt;
  const auto j = static_cast<long>(std::llround(q));
  if (std::abs(t - tr.dt * static_cast<double>(j)) > 1e-9 * std::max(1.0, std::abs(t)))
    raise(Errc::off_grid, "t = " + std::to_string(t) + " is not a trajectory node");
  if (j < 0 || j > static_cast<long>(tr.n))
    raise(Errc::off_grid, "t = " + std::to_string(t) + " outside the simulated range");

  const auto base = static_cast<std::size_t>(j);  // storage index of node j - m
  const auto w2 = [&](std::size_t i) { return std::norm(tr.z[base + i]); };

  double integral = 0.0;
  if (tr.m % 2 == 0) {
    for (std::size_t i = 0; i + 2 <= tr.m; i += 2)
      integral += (tr.dt / 3.0) * (w2(i) + 4.0 * w2(i + 1) + w2(i + 2));
  } else {
    for (std::size_t i = 0; i + 1 <= tr.m; ++i)
      integral += (tr.dt / 2.0) * (w2(i) + w2(i + 1));
  }
  return w2(tr.m) + integral;
}

struct BoundCheckReport {
  double sup_ratio = 0.0;
  double t_at_max = 0.0;
  double J_used = 0.0;
  bool passed = true;
};

/// Simulates from rest and compares the extended-state energy against the
/// certificate prediction (1 + tau) |b|^2 J * (input energy so far) node by
/// node. The input energy uses the same composite rule as extended_norm (with
/// a trapezoid closing panel at odd nodes), so both sides carry matching
/// discretization behavior. An uncertified component raises NotInRegion.
[[nodiscard]] inline BoundCheckReport verify_bound(const ComponentParams& p, const InputSignal& u,
                                                   double t_end, std::size_t m,
                                                   const ToleranceProfile& tol = {}) {
  const double J = j_closed(p, tol).value;
  const Trajectory tr = simulate_component(p, u, zero_init(), t_end, m, tol);
  const double scale = (1.0 + p.tau) * std::norm(p.b) * J;

  const std::size_t n = tr.n;
  std::vector<double> f(n + 1);
  // Half-sum values at interior jumps keep the composite rule exact across
  // them; the domain edge t = 0 has no left panel, so it takes the right
  // limit instead.
  f[0] = std::norm(u.value(0.0));
  for (std::size_t i = 1; i <= n; ++i) f[i] = u.abs2(tr.dt * static_cast<double>(i));

  std::vector<double> energy(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    if (i % 2 == 0)
      energy[i] = energy[i - 2] + (tr.dt / 3.0) * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    else
      energy[i] = energy[i - 1] + (tr.dt / 2.0) * (f[i - 1] + f[i]);
  }

  BoundCheckReport rep;
  rep.J_used = J;
  for (std::size_t i = 0; i <= n; ++i) {
    const double num = extended_norm(tr, tr.dt * static_cast<double>(i), tol);
    const double den = scale * energy[i];
    double ratio = 0.0;
    if (den > 0.0)
      ratio = num / den;
    else if (num > 0.0)
      ratio = std::numeric_limits<double>::infinity();
    if (ratio > rep.sup_ratio) {
      rep.sup_ratio = ratio;
      rep.t_at_max = tr.dt * static_cast<double>(i);
    }
  }
  rep.passed = rep.sup_ratio <= 1.0 + kBoundRatioTol;
  return rep;
}

/// Shared-input simulation of the first N components plus the aggregated
/// squared extended norm per node.
struct SystemTrajectory {
  double dt = 0.0;
  std::size_t n = 0;
  std::vector<double> aggregate;
  std::vector<Trajectory> components;
};

[[nodiscard]] inline SystemTrajectory simulate_system(const DiagonalDelaySystem& sys,
                                                      const InputSignal& u, std::size_t N,
                                                      double t_end, std::size_t m,
                                                      const ToleranceProfile& tol = {}) {
  if (N == 0 || N > sys.N)
    raise(Errc::index_error,
          "component count N=" + std::to_string(N) + " outside 1.." + std::to_string(sys.N));

  SystemTrajectory out;
  out.components.assign(N, Trajectory{});
  detail::parallel_for_1n(N, [&](std::size_t k) {
    out.components[k - 1] = simulate_component(sys.component(k), u, zero_init(), t_end, m, tol);
  });
  out.dt = out.components.front().dt;
  out.n = out.components.front().n;
  out.aggregate.assign(out.n + 1, 0.0);
  for (std::size_t i = 0; i <= out.n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < N; ++k)
      acc += extended_norm(out.components[k], out.dt * static_cast<double>(i), tol);
    out.aggregate[i] = acc;
  }
  return out;
}

}  // namespace delaycert

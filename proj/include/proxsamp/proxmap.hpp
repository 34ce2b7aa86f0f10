#pragma once

#include <cmath>

#include "proxsamp/common.hpp"
#include "proxsamp/potentials.hpp"

namespace proxsamp {

/// Stationary point estimate of f(x) + ||x - y||^2 / (2 eta).
///
/// `residual` is recomputed from scratch at return and bounds
/// ||f'(x_y) + (x_y - y)/eta||; exact solves keep it at rounding level,
/// iterative solves keep it <= s/eta for the tolerance s they ran with.
struct ProxResult {
  Vec x_y;
  double residual = 0.0;
  int iters = 0;
  bool exact = false;
  bool budget_exceeded = false;
};

/// Closed-form prox for f = 1/2 x'Ax - b'x with diagonal A:
/// solves (A + I/eta) x = b + y/eta coordinate-wise.
inline ProxResult prox_quadratic(const Vec& a_diag, const Vec& b, const Vec& y,
                                 double eta) {
  if (!(eta > 0.0)) throw InputError("prox_quadratic: eta must be positive");
  check_dim(a_diag.size(), b.size(), "prox_quadratic");
  check_dim(a_diag.size(), y.size(), "prox_quadratic");
  ProxResult r;
  r.x_y.resize(y.size());
  double res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double denom = a_diag[i] + 1.0 / eta;
    if (!(denom > 0.0))
      throw IllPosedProxError("prox_quadratic: diagonal of A + I/eta not positive");
    r.x_y[i] = (b[i] + y[i] / eta) / denom;
    const double g = a_diag[i] * r.x_y[i] - b[i] + (r.x_y[i] - y[i]) / eta;
    res += g * g;
  }
  r.residual = std::sqrt(res);
  r.exact = true;
  return r;
}

/// Inner tolerance d^{1/(2(1+a))} / (7 L^{1/(1+a)}); with this s the shifted
/// proposal center stays within the concentration bound's error budget and the
/// AGD iteration count stays O(1) up to logs.
inline double default_s(const SemiSmoothSpec& spec, int d) {
  spec.validate();
  if (d < 1) throw InputError("default_s: d must be >= 1");
  return std::pow(double(d), 1.0 / (2.0 * (1.0 + spec.alpha))) /
         (7.0 * std::pow(spec.l_alpha, 1.0 / (1.0 + spec.alpha)));
}

// Curvature proxy of the smoothed prox objective for one component:
// L^{2/(1+a)} / (1+a)^{(1-a)/(1+a)}. Composites sum component contributions.
inline double agd_regularity_constant(const SemiSmoothSpec& spec) {
  const double a = spec.alpha;
  return std::pow(spec.l_alpha, 2.0 / (1.0 + a)) /
         std::pow(1.0 + a, (1.0 - a) / (1.0 + a));
}

inline double agd_regularity_constant(const Potential& p) {
  double m = 0.0;
  for (const auto& c : p.components()) m += agd_regularity_constant(c.spec);
  return m;
}

/// Approximate prox via constant-step Nesterov on f(x) + ||x-y||^2/(2 eta),
/// initialized at y, step 1/(1/eta + M), momentum from the strong-convexity
/// estimate max(1/eta - M, 1/(2 eta)). Returns once the recomputed residual
/// drops to s/eta, or flags the result when the iteration budget runs out.
inline ProxResult prox_agd(const Potential& p, const Vec& y, double eta, double s,
                           int max_iters = -1) {
  if (!(eta > 0.0)) throw InputError("prox_agd: eta must be positive");
  if (!(s > 0.0)) throw InputError("prox_agd: s must be positive");
  check_dim(std::size_t(p.dim()), y.size(), "prox_agd");

  const double m_reg = agd_regularity_constant(p);
  const double l_agd = 1.0 / eta + m_reg;
  const double beta_agd = std::max(1.0 / eta - m_reg, 0.5 / eta);
  if (max_iters < 0) {
    const double kappa = l_agd / beta_agd;
    max_iters = 10 * int(std::ceil(std::sqrt(kappa) * std::max(1.0, std::log(1.0 / s))));
  }
  const double sq = std::sqrt(beta_agd / l_agd);
  const double momentum = (1.0 - sq) / (1.0 + sq);
  const double target = s / eta;

  Vec x = y, v = y, x_prev = y;
  ProxResult r;
  for (int k = 1; k <= max_iters; ++k) {
    Vec grad = eval_subgradient(p, v);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += (v[i] - y[i]) / eta;
    if (!all_finite(grad)) throw NumericError("prox_agd: non-finite gradient");
    x_prev = x;
    x = v;
    axpy(x, -1.0 / l_agd, grad);
    v = x;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += momentum * (x[i] - x_prev[i]);

    Vec station = eval_subgradient(p, x);
    for (std::size_t i = 0; i < station.size(); ++i) station[i] += (x[i] - y[i]) / eta;
    const double res = norm(station);
    if (!std::isfinite(res) || !std::isfinite(eval_potential(p, x)))
      throw NumericError("prox_agd: non-finite iterate");
    if (res <= target) {
      r.x_y = std::move(x);
      r.residual = res;
      r.iters = k;
      return r;
    }
    if (k == max_iters) {
      r.x_y = std::move(x);
      r.residual = res;
      r.iters = k;
      r.budget_exceeded = true;
      return r;
    }
  }
  return r;  // unreachable; max_iters >= 1
}

/// Closed-form prox route for potentials that install one.
inline ProxResult prox_exact(const Potential& p, const Vec& y, double eta) {
  if (!(eta > 0.0)) throw InputError("prox_exact: eta must be positive");
  check_dim(std::size_t(p.dim()), y.size(), "prox_exact");
  if (!p.has_exact_prox())
    throw InputError("prox_exact: potential '" + p.name() + "' has no closed-form prox");
  ExactProxSolve solve = p.exact_prox(y, eta);
  ProxResult r;
  r.x_y = std::move(solve.x);
  r.residual = solve.residual;
  r.exact = true;
  return r;
}

}  // namespace proxsamp

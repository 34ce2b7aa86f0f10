#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/potentials.hpp"
#include "proxsamp/rgo.hpp"

namespace proxsamp {

enum class Metric { TV, W2 };

inline std::string to_string(Metric m) { return m == Metric::TV ? "tv" : "w2"; }
inline std::string to_string(ProxMode m) {
  return m == ProxMode::Exact ? "exact" : "approx";
}

/// Assumption regime on the target distribution. Regime parameters (strong
/// convexity, functional-inequality constants, initialization divergences) are
/// caller inputs; nothing here estimates them.
struct Assumption {
  enum class Regime { StronglyLogConcave, LogConcave, LSI, PI };
  Regime regime = Regime::StronglyLogConcave;
  double beta = 1.0;       // strong log-concavity
  double kl_init = 1.0;    // H_nu(mu_0), strongly-log-concave and LSI regimes
  double w2_init = 1.0;    // W2(mu_0, nu), log-concave regime
  double c_lsi = 1.0;
  double c_pi = 1.0;
  double chi2_init = 1.0;  // chi^2_nu(mu_0), PI regime

  void validate() const {
    auto pos = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw InputError(std::string("Assumption: ") + name + " must be finite and positive");
    };
    switch (regime) {
      case Regime::StronglyLogConcave:
        pos(beta, "beta");
        pos(kl_init, "kl_init");
        break;
      case Regime::LogConcave:
        pos(w2_init, "w2_init");
        break;
      case Regime::LSI:
        pos(c_lsi, "c_lsi");
        pos(kl_init, "kl_init");
        break;
      case Regime::PI:
        pos(c_pi, "c_pi");
        pos(chi2_init, "chi2_init");
        break;
    }
  }
};

inline std::string to_string(Assumption::Regime r) {
  switch (r) {
    case Assumption::Regime::StronglyLogConcave: return "strongly_log_concave";
    case Assumption::Regime::LogConcave: return "log_concave";
    case Assumption::Regime::LSI: return "lsi";
    case Assumption::Regime::PI: return "pi";
  }
  return "?";
}

/// A full run schedule: step size, iteration count, per-step RGO accuracy
/// zeta = delta / (2 T), end-to-end accuracy delta.
struct Plan {
  double eta = 0.0;
  long t_steps = 0;
  double zeta = 0.0;
  double delta = 0.0;
  Metric metric = Metric::TV;
  ProxMode mode = ProxMode::Exact;
  Assumption assumption;
};

namespace detail {

inline void check_eta_args(double zeta, int d) {
  if (!(zeta > 0.0)) throw InputError("step size: zeta must be positive");
  if (d < 1) throw InputError("step size: d must be >= 1");
}

// Approx-prox mode doubles the constant (49 -> 98); halving the exact-mode
// value keeps the ratio exactly 1/2 in floating point.
inline double mode_scale(ProxMode mode) { return mode == ProxMode::Exact ? 1.0 : 0.5; }

}  // namespace detail

/// TV step size: eta <= (49 L^{2/(a+1)} d^{a/(a+1)} (1 + log(1 + 12/zeta)))^{-1},
/// constant 98 in approx-prox mode.
inline double eta_tv(const SemiSmoothSpec& spec, int d, double zeta, ProxMode mode) {
  spec.validate();
  detail::check_eta_args(zeta, d);
  const double a = spec.alpha;
  const double lp = std::pow(spec.l_alpha, 2.0 / (a + 1.0));
  const double dp = std::pow(double(d), a / (a + 1.0));
  return detail::mode_scale(mode) /
         (49.0 * lp * dp * (1.0 + std::log1p(12.0 / zeta)));
}

/// W2 step size: min of (49 L^{2/(a+1)} d^{a/(a+1)} (2 + log(1 + 192 (d^2+2d)/zeta^4)))^{-1}
/// and 1; constant 98 in approx-prox mode.
inline double eta_w2(const SemiSmoothSpec& spec, int d, double zeta, ProxMode mode) {
  spec.validate();
  detail::check_eta_args(zeta, d);
  const double a = spec.alpha;
  const double lp = std::pow(spec.l_alpha, 2.0 / (a + 1.0));
  const double dp = std::pow(double(d), a / (a + 1.0));
  const double dd = double(d) * double(d) + 2.0 * double(d);
  const double val =
      detail::mode_scale(mode) /
      (49.0 * lp * dp * (2.0 + std::log1p(192.0 * dd / std::pow(zeta, 4))));
  return std::min(val, 1.0);
}

/// Error-splitting weights w_j ~ L_j^{1/(a_j+1)} d^{a_j/(2(a_j+1))}, normalized
/// to sum to one.
inline Vec composite_weights(const std::vector<SemiSmoothSpec>& specs, int d) {
  if (specs.empty()) throw InputError("composite_weights: empty spec list");
  if (d < 1) throw InputError("composite_weights: d must be >= 1");
  Vec w(specs.size());
  double total = 0.0;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    specs[j].validate();
    const double a = specs[j].alpha;
    w[j] = std::pow(specs[j].l_alpha, 1.0 / (a + 1.0)) *
           std::pow(double(d), a / (2.0 * (a + 1.0)));
    total += w[j];
  }
  for (double& v : w) v /= total;
  return w;
}

namespace detail {

// M_{L,d} = (sum_j L_j^{1/(a_j+1)} d^{a_j/(2(a_j+1))})^2
inline double composite_mld(const std::vector<SemiSmoothSpec>& specs, int d) {
  double sum = 0.0;
  for (const auto& spec : specs) {
    spec.validate();
    const double a = spec.alpha;
    sum += std::pow(spec.l_alpha, 1.0 / (a + 1.0)) *
           std::pow(double(d), a / (2.0 * (a + 1.0)));
  }
  return sum * sum;
}

}  // namespace detail

inline double eta_tv_composite(const std::vector<SemiSmoothSpec>& specs, int d,
                               double zeta, ProxMode mode = ProxMode::Exact) {
  if (specs.empty()) throw InputError("eta_tv_composite: empty spec list");
  detail::check_eta_args(zeta, d);
  const double m = detail::composite_mld(specs, d);
  const double n = double(specs.size());
  return detail::mode_scale(mode) /
         (49.0 * m * (1.0 + std::log1p(12.0 * n / zeta)));
}

inline double eta_w2_composite(const std::vector<SemiSmoothSpec>& specs, int d,
                               double zeta, ProxMode mode = ProxMode::Exact) {
  if (specs.empty()) throw InputError("eta_w2_composite: empty spec list");
  detail::check_eta_args(zeta, d);
  const double m = detail::composite_mld(specs, d);
  const double n = double(specs.size());
  const double dd = double(d) * double(d) + 2.0 * double(d);
  const double val =
      detail::mode_scale(mode) /
      (49.0 * m * (2.0 + std::log1p(192.0 * n * dd / std::pow(zeta, 4))));
  return std::min(val, 1.0);
}

/// Applicable step-size formula for a potential: composite potentials use the
/// n-component bound, single-component ones the scalar bound.
inline double eta_for(const Potential& p, double zeta, Metric metric, ProxMode mode) {
  if (p.is_composite()) {
    return metric == Metric::TV ? eta_tv_composite(p.specs(), p.dim(), zeta, mode)
                                : eta_w2_composite(p.specs(), p.dim(), zeta, mode);
  }
  const SemiSmoothSpec spec = p.components()[0].spec;
  return metric == Metric::TV ? eta_tv(spec, p.dim(), zeta, mode)
                              : eta_w2(spec, p.dim(), zeta, mode);
}

namespace detail {

// Iteration count that drives the regime's divergence below (delta/2)^2-level
// targets, from the convergence statements of the ideal sampler.
inline long regime_t_steps(const Assumption& a, double eta, double delta, Metric metric) {
  double t = 0.0;
  switch (a.regime) {
    case Assumption::Regime::StronglyLogConcave: {
      const double arg = metric == Metric::TV
                             ? (2.0 / delta) * std::sqrt(2.0 * a.kl_init)
                             : (2.0 / delta) * std::sqrt(2.0 * a.kl_init / a.beta);
      t = std::log(arg) / std::log1p(a.beta * eta);
      break;
    }
    case Assumption::Regime::LSI: {
      const double arg = (2.0 / delta) * std::sqrt(2.0 * a.kl_init);
      t = std::log(arg) / std::log1p(a.c_lsi * eta);
      break;
    }
    case Assumption::Regime::LogConcave:
      t = 8.0 * a.w2_init * a.w2_init / (delta * delta * eta);
      break;
    case Assumption::Regime::PI: {
      const double floor_chi2 = std::expm1(delta * delta / 8.0);
      t = std::log(a.chi2_init / floor_chi2) / (2.0 * std::log1p(a.c_pi * eta));
      break;
    }
  }
  const double ceiled = std::ceil(t);
  return ceiled >= 1.0 ? long(ceiled) : 1L;
}

}  // namespace detail

/// Plans a full run for the given regime: fixed-point iteration over
/// T -> zeta = delta/(2T) -> eta(zeta) -> T, starting from T = 100, until two
/// consecutive T values agree (at most 100 rounds).
///
/// The W2 metric is planned only for the strongly-log-concave regime; the
/// error telescoping behind the other regimes is TV-only.
inline Plan plan_run(const Potential& p, const Assumption& a, double delta,
                     Metric metric, ProxMode mode) {
  a.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("plan_run: delta must lie in (0,1)");
  if (metric == Metric::W2 && a.regime != Assumption::Regime::StronglyLogConcave)
    throw InputError("plan_run: W2 metric is only planned for the strongly-log-concave regime");

  long t = 100;
  double eta = 0.0, zeta = 0.0;
  bool stable = false;
  for (int round = 0; round < 100; ++round) {
    zeta = delta / (2.0 * double(t));
    eta = eta_for(p, zeta, metric, mode);
    const long t_next = detail::regime_t_steps(a, eta, delta, metric);
    if (t_next == t) {
      stable = true;
      break;
    }
    t = t_next;
  }
  if (!stable)
    throw PlanningError("plan_run: T fixed point did not stabilize in 100 rounds (last T = " +
                        std::to_string(t) + ")");

  Plan plan;
  plan.eta = eta;
  plan.t_steps = t;
  plan.zeta = delta / (2.0 * double(t));
  plan.delta = delta;
  plan.metric = metric;
  plan.mode = mode;
  plan.assumption = a;
  return plan;
}

}  // namespace proxsamp

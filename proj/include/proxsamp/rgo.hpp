#pragma once

#include <cmath>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/potentials.hpp"
#include "proxsamp/proxmap.hpp"
#include "proxsamp/rng.hpp"

namespace proxsamp {

enum class ProxMode { Exact, Approx };

/// The shift trick: g(x) = f(x) - <shift, x> with shift = f'(x_y), so the
/// proposal Gaussian is centered where g is stationary. Exact mode centers at
/// x_y itself; approx mode centers at w = y - eta * f'(x_y), which stays within
/// eta * residual of x_y.
struct ShiftedPotential {
  const Potential* base = nullptr;
  Vec shift;
  Vec center;
  double eta = 0.0;

  double g(const Vec& x) const { return eval_potential(*base, x) - dot(shift, x); }
};

inline ShiftedPotential make_shifted(const Potential& p, const ProxResult& prox,
                                     const Vec& y, double eta, ProxMode mode) {
  check_dim(std::size_t(p.dim()), y.size(), "make_shifted");
  ShiftedPotential sp;
  sp.base = &p;
  sp.eta = eta;
  sp.shift = eval_subgradient(p, prox.x_y);
  if (mode == ProxMode::Exact) {
    sp.center = prox.x_y;
  } else {
    sp.center = y;
    axpy(sp.center, -eta, sp.shift);
  }
  return sp;
}

/// One RGO draw: the accepted point, how many (x, z, u) trials it took, the
/// prox solve behind it, and (optionally) the rho trace for diagnostics.
struct RgoOutcome {
  Vec x;
  int proposals = 0;
  std::vector<double> rho_trace;
  ProxResult prox;
};

struct RgoOptions {
  // Inner prox tolerance; <= 0 selects the mode default (1e-8 for the exact
  // AGD fallback, default_s(spec, d) for approx mode).
  double s = -1.0;
  int max_proposals = 1000;
  bool record_rho = false;
};

/// Approximate rejection sampling draw from pi^{X|Y}(.|y) ~ exp(-f(x) -
/// ||x - y||^2/(2 eta)).
///
/// Loop: draw x, z independently from N(center, eta I), set
/// rho = exp(g(z) - g(x)), accept x once u <= rho/2. Fresh z every pass. The
/// returned point is within zeta TV of the conditional whenever eta obeys the
/// step-size bound for zeta (constant 49 exact, 98 approx).
inline RgoOutcome rgo_sample(const Potential& p, const Vec& y, double eta,
                             ProxMode mode, RngStream& rng,
                             const RgoOptions& opt = {}) {
  if (!(eta > 0.0)) throw InputError("rgo_sample: eta must be positive");
  check_dim(std::size_t(p.dim()), y.size(), "rgo_sample");
  if (opt.max_proposals < 1) throw InputError("rgo_sample: max_proposals must be >= 1");

  RgoOutcome out;
  if (mode == ProxMode::Exact) {
    if (p.has_exact_prox()) {
      out.prox = prox_exact(p, y, eta);
    } else {
      const double s = opt.s > 0.0 ? opt.s : 1e-8;
      if (s > 1e-8)
        throw InputError("rgo_sample: exact mode without closed-form prox needs s <= 1e-8");
      out.prox = prox_agd(p, y, eta, s);
    }
  } else {
    const double s = opt.s > 0.0 ? opt.s : default_s(p.dominant_spec(), p.dim());
    out.prox = prox_agd(p, y, eta, s);
  }
  if (out.prox.budget_exceeded)
    throw NumericError("rgo_sample: prox iteration budget exceeded");

  const ShiftedPotential sp = make_shifted(p, out.prox, y, eta, mode);
  const double sd = std::sqrt(eta);
  const std::size_t d = y.size();

  Vec x(d), z(d);
  for (int trial = 1; trial <= opt.max_proposals; ++trial) {
    for (std::size_t i = 0; i < d; ++i) x[i] = sp.center[i] + sd * rng.normal();
    for (std::size_t i = 0; i < d; ++i) z[i] = sp.center[i] + sd * rng.normal();
    const double log_rho = sp.g(z) - sp.g(x);
    // log_rho beyond exp's range means eta violates the step-size bound's
    // precondition; surface it instead of saturating.
    if (!std::isfinite(log_rho) || log_rho > 709.0)
      throw NumericError("rgo_sample: log acceptance ratio overflow (eta too large?)");
    const double rho = std::exp(log_rho);
    if (opt.record_rho) out.rho_trace.push_back(rho);
    const double u = rng.uniform();
    if (u <= 0.5 * rho) {
      out.x = x;
      out.proposals = trial;
      return out;
    }
  }
  throw RgoGiveUpError("rgo_sample: no acceptance within " +
                           std::to_string(opt.max_proposals) +
                           " proposals (eta too large for the declared spec?)",
                       opt.max_proposals);
}

}  // namespace proxsamp

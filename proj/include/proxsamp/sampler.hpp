#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/potentials.hpp"
#include "proxsamp/proxmap.hpp"
#include "proxsamp/rgo.hpp"
#include "proxsamp/rng.hpp"
#include "proxsamp/stepsize.hpp"

namespace proxsamp {

struct StepStats {
  int proposals = 0;
  int prox_iters = 0;
};

/// One chain's recorded history. `samples` holds x_t thinned by the recording
/// stride (x_0 always included, x_T always included when T > 0);
/// `y_snapshots` the forward-step y_t at the same recorded steps;
/// `per_step` has one entry per sampler step.
struct Trace {
  std::vector<Vec> samples;
  std::vector<Vec> y_snapshots;
  std::vector<long> sample_steps;
  std::vector<StepStats> per_step;
  double eta = 0.0;
  long t_steps = 0;
  std::uint64_t root_seed = 0;
  long accepted = -1;  // baseline MH acceptances; -1 when not applicable
};

namespace detail {

inline double rgo_tolerance_for(const Potential& p, const Plan& plan) {
  if (plan.mode == ProxMode::Approx) return default_s(p.dominant_spec(), p.dim());
  return 1e-8;  // AGD fallback tolerance in exact mode
}

}  // namespace detail

/// Runs T steps of the proximal sampler from x0: forward step
/// y = x + sqrt(eta) xi, then one RGO draw at y. Deterministic given
/// (seed, stream_index).
inline Trace run_proximal_sampler(const Potential& p, const Plan& plan, const Vec& x0,
                                  std::uint64_t seed, long record_stride = 0,
                                  std::uint64_t stream_index = 0,
                                  RgoOptions rgo_opt = {}) {
  check_dim(std::size_t(p.dim()), x0.size(), "run_proximal_sampler");
  if (record_stride < 0) throw InputError("run_proximal_sampler: negative record stride");
  const long t_steps = plan.t_steps;
  if (record_stride == 0) record_stride = std::max(1L, t_steps / 1000);

  RngStream rng(seed, stream_index);
  RgoOptions opt = rgo_opt;
  if (opt.s <= 0.0) opt.s = detail::rgo_tolerance_for(p, plan);

  Trace trace;
  trace.eta = plan.eta;
  trace.t_steps = t_steps;
  trace.root_seed = seed;
  trace.samples.push_back(x0);
  trace.sample_steps.push_back(0);
  trace.per_step.reserve(std::size_t(std::max(0L, t_steps)));

  const double sd = std::sqrt(plan.eta);
  Vec x = x0;
  Vec y(x.size());
  for (long t = 1; t <= t_steps; ++t) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + sd * rng.normal();
    try {
      RgoOutcome out = rgo_sample(p, y, plan.eta, plan.mode, rng, opt);
      x = std::move(out.x);
      trace.per_step.push_back({out.proposals, out.prox.iters});
    } catch (const RgoGiveUpError& e) {
      throw RgoGiveUpError("step " + std::to_string(t) + ": " + e.what(), e.proposals);
    }
    if (t % record_stride == 0 || t == t_steps) {
      trace.samples.push_back(x);
      trace.y_snapshots.push_back(y);
      trace.sample_steps.push_back(t);
    }
  }
  return trace;
}

enum class BaselineMethod { ULA, MALA };

inline std::string to_string(BaselineMethod m) {
  return m == BaselineMethod::ULA ? "ula" : "mala";
}

/// Unadjusted / Metropolis-adjusted Langevin baselines.
/// ULA: x' = x - eta f'(x) + sqrt(2 eta) xi. MALA adds the accept/reject with
/// the Gaussian proposal density ratio.
inline Trace run_baseline(BaselineMethod method, const Potential& p, double eta,
                          long t_steps, const Vec& x0, std::uint64_t seed,
                          long record_stride = 1, std::uint64_t stream_index = 0) {
  if (!(eta > 0.0)) throw InputError("run_baseline: eta must be positive");
  if (t_steps < 0) throw InputError("run_baseline: negative step count");
  check_dim(std::size_t(p.dim()), x0.size(), "run_baseline");
  if (record_stride <= 0) record_stride = std::max(1L, t_steps / 1000);
  if (method == BaselineMethod::MALA) {
    for (const auto& c : p.components())
      if (c.spec.alpha < 1.0)
        throw InputError("run_baseline: MALA proposals need alpha = 1 components");
  }

  RngStream rng(seed, stream_index);
  Trace trace;
  trace.eta = eta;
  trace.t_steps = t_steps;
  trace.root_seed = seed;
  trace.accepted = method == BaselineMethod::MALA ? 0 : -1;
  trace.samples.push_back(x0);
  trace.sample_steps.push_back(0);

  const double sd = std::sqrt(2.0 * eta);
  Vec x = x0;
  double fx = eval_potential(p, x);
  Vec gx = eval_subgradient(p, x);
  Vec prop(x.size());
  for (long t = 1; t <= t_steps; ++t) {
    for (std::size_t i = 0; i < x.size(); ++i)
      prop[i] = x[i] - eta * gx[i] + sd * rng.normal();
    if (method == BaselineMethod::ULA) {
      x = prop;
      gx = eval_subgradient(p, x);
    } else {
      const double f_prop = eval_potential(p, prop);
      const Vec g_prop = eval_subgradient(p, prop);
      // log q(x | prop) - log q(prop | x)
      double fwd = 0.0, rev = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double mf = x[i] - eta * gx[i];
        const double mr = prop[i] - eta * g_prop[i];
        fwd += (prop[i] - mf) * (prop[i] - mf);
        rev += (x[i] - mr) * (x[i] - mr);
      }
      const double log_alpha = fx - f_prop + (fwd - rev) / (4.0 * eta);
      if (std::log(rng.uniform_open()) <= log_alpha) {
        x = prop;
        fx = f_prop;
        gx = g_prop;
        ++trace.accepted;
      }
    }
    trace.per_step.push_back({1, 0});
    if (t % record_stride == 0 || t == t_steps) {
      trace.samples.push_back(x);
      trace.sample_steps.push_back(t);
    }
  }
  return trace;
}

/// Marginal-law snapshots of an ensemble of independent chains, with
/// order-independent aggregation of the per-step statistics. Chain i runs on
/// stream mix(root_seed, i) regardless of the worker count.
struct EnsembleResult {
  std::vector<long> checkpoints;
  std::vector<std::vector<Vec>> states;  // states[c][chain]
  double mean_proposals = 0.0;
  double p99_proposals = 0.0;
  double max_proposals = 0.0;
  // worst AGD stationarity residual relative to its contract s/eta (0 when
  // every prox was closed-form)
  double max_agd_residual_ratio = 0.0;
  long total_steps = 0;
};

inline EnsembleResult run_ensemble(const Potential& p, const Plan& plan, const Vec& x0,
                                   std::uint64_t root_seed, int n_chains,
                                   std::vector<long> checkpoints, int jobs = 1) {
  check_dim(std::size_t(p.dim()), x0.size(), "run_ensemble");
  if (n_chains < 1) throw InputError("run_ensemble: need at least one chain");
  std::sort(checkpoints.begin(), checkpoints.end());
  for (long c : checkpoints)
    if (c < 0 || c > plan.t_steps)
      throw InputError("run_ensemble: checkpoint outside [0, T]");

  const double s_tol = detail::rgo_tolerance_for(p, plan);
  EnsembleResult res;
  res.checkpoints = checkpoints;
  res.states.assign(checkpoints.size(), std::vector<Vec>(std::size_t(n_chains)));

  std::vector<double> chain_proposals(std::size_t(n_chains), 0.0);
  std::vector<double> chain_max_ratio(std::size_t(n_chains), 0.0);
  std::vector<std::vector<int>> chain_counts(std::size_t(n_chains), std::vector<int>{});

  parallel_for(std::size_t(n_chains), jobs, [&](std::size_t chain) {
    RngStream rng(root_seed, chain);
    RgoOptions opt;
    opt.s = s_tol;
    const double sd = std::sqrt(plan.eta);
    Vec x = x0;
    Vec y(x.size());
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == 0) {
      res.states[next_cp][chain] = x;
      ++next_cp;
    }
    std::vector<int>& counts = chain_counts[chain];
    counts.reserve(std::size_t(plan.t_steps));
    for (long t = 1; t <= plan.t_steps; ++t) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + sd * rng.normal();
      RgoOutcome out = rgo_sample(p, y, plan.eta, plan.mode, rng, opt);
      x = std::move(out.x);
      counts.push_back(out.proposals);
      chain_proposals[chain] += out.proposals;
      if (!out.prox.exact) {
        const double ratio = out.prox.residual * plan.eta / s_tol;
        chain_max_ratio[chain] = std::max(chain_max_ratio[chain], ratio);
      }
      while (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
        res.states[next_cp][chain] = x;
        ++next_cp;
      }
    }
  });

  double total_props = 0.0;
  std::vector<int> all_counts;
  all_counts.reserve(std::size_t(n_chains) * std::size_t(plan.t_steps));
  for (std::size_t c = 0; c < std::size_t(n_chains); ++c) {
    total_props += chain_proposals[c];
    res.max_agd_residual_ratio = std::max(res.max_agd_residual_ratio, chain_max_ratio[c]);
    all_counts.insert(all_counts.end(), chain_counts[c].begin(), chain_counts[c].end());
  }
  res.total_steps = long(all_counts.size());
  if (!all_counts.empty()) {
    res.mean_proposals = total_props / double(all_counts.size());
    std::sort(all_counts.begin(), all_counts.end());
    std::ptrdiff_t idx =
        std::ptrdiff_t(std::ceil(0.99 * double(all_counts.size()))) - 1;
    idx = std::clamp<std::ptrdiff_t>(idx, 0, std::ptrdiff_t(all_counts.size()) - 1);
    res.p99_proposals = all_counts[std::size_t(idx)];
    res.max_proposals = all_counts.back();
  }
  return res;
}

}  // namespace proxsamp

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/potentials.hpp"
#include "proxsamp/rng.hpp"
#include "proxsamp/stats.hpp"
#include "proxsamp/stepsize.hpp"

namespace proxsamp {

/// Gradient-at-mean premise violated: the tail bounds assume l'(m) = 0.
struct GradientAtMeanError : InputError {
  using InputError::InputError;
};

enum class BoundVariant { Standard, Composite, Errored, LowRange };

/// Arguments of a concentration-bound evaluation. `epsilon` trades the
/// (1 - eps/d)^{-d/2} prefactor against the rate inside the exponential and
/// defaults to 0.5; `s_offset` is the Errored variant's center displacement;
/// `weights` (Composite) default to composite_weights.
struct BoundQuery {
  BoundVariant variant = BoundVariant::Standard;
  std::vector<SemiSmoothSpec> specs;
  int d = 1;
  double eta = 1.0;
  double epsilon = 0.5;
  double s_offset = 0.0;
  Vec weights;
};

/// The rate constant C(alpha) = (1+a)(1/a)^{a/(1+a)} (1/pi^2)^{1/(1+a)} 2^{(1-a)/(1+a)},
/// continuously extended to C(0) = 2/pi^2; C(1) = 2/pi.
inline double conc_constant(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InputError("conc_constant: alpha must lie in [0,1]");
  if (alpha == 0.0) return 2.0 / (M_PI * M_PI);
  const double a = alpha;
  return (1.0 + a) * std::pow(1.0 / a, a / (1.0 + a)) *
         std::pow(1.0 / (M_PI * M_PI), 1.0 / (1.0 + a)) *
         std::pow(2.0, (1.0 - a) / (1.0 + a));
}

namespace detail {

inline void check_bound_args(const BoundQuery& q, double r) {
  if (!(r > 0.0)) throw InputError("conc_bound: r must be positive");
  if (q.d < 1) throw InputError("conc_bound: d must be >= 1");
  if (!(q.eta > 0.0)) throw InputError("conc_bound: eta must be positive");
  if (q.specs.empty()) throw InputError("conc_bound: no smoothness spec supplied");
  for (const auto& s : q.specs) s.validate();
}

// One component's exponent argument: C_j eps^{a/(1+a)} (w r)^{2/(1+a)} /
// (L^{2/(1+a)} d^{a/(1+a)} eta). Lipschitz components (a = 0) take the
// eps -> 0 limit, where eps^0 = 1 and the d power drops.
inline double tail_exponent(const SemiSmoothSpec& spec, int d, double eta,
                            double epsilon, double wr, double rate_scale) {
  const double a = spec.alpha;
  const double c = conc_constant(a);
  const double eps_pow = a == 0.0 ? 1.0 : std::pow(epsilon, a / (1.0 + a));
  return rate_scale * c * eps_pow * std::pow(wr, 2.0 / (1.0 + a)) /
         (std::pow(spec.l_alpha, 2.0 / (1.0 + a)) *
          std::pow(double(d), a / (1.0 + a)) * eta);
}

// Shared implementation of the Standard/Composite displays; the prefactor
// (1 - eps/d)^{-d/2} applies whenever any component has a > 0 (for pure
// Lipschitz queries the eps -> 0 limit removes it). rate_scale != 1 is the
// falsification-control knob: it multiplies the exponent rate only.
inline double conc_bound_scaled(const BoundQuery& q, double r, double rate_scale) {
  check_bound_args(q, r);
  bool any_positive_alpha = false;
  for (const auto& s : q.specs)
    if (s.alpha > 0.0) any_positive_alpha = true;

  double prefactor = 1.0;
  if (any_positive_alpha) {
    if (!(q.epsilon > 0.0 && q.epsilon < double(q.d)))
      throw InputError("conc_bound: epsilon must lie in (0, d)");
    prefactor = std::pow(1.0 - q.epsilon / double(q.d), -0.5 * double(q.d));
  }

  Vec w = q.weights;
  if (w.empty())
    w = q.specs.size() == 1 ? Vec{1.0} : composite_weights(q.specs, q.d);
  if (w.size() != q.specs.size())
    throw InputError("conc_bound: weights/specs length mismatch");

  double sum = 0.0;
  for (std::size_t j = 0; j < q.specs.size(); ++j)
    sum += std::exp(
        -tail_exponent(q.specs[j], q.d, q.eta, q.epsilon, w[j] * r, rate_scale));
  return prefactor * sum;
}

}  // namespace detail

/// Tail bound Pr(l(X) - E l(X) >= r) for a single semi-smooth l and
/// X ~ N(m, eta I) with l'(m) = 0:
/// (1 - eps/d)^{-d/2} exp(-C eps^{a/(1+a)} r^{2/(1+a)} / (L^{2/(1+a)} d^{a/(1+a)} eta)).
inline double conc_bound(const BoundQuery& q, double r) {
  if (q.specs.size() != 1)
    throw InputError("conc_bound: Standard variant takes exactly one spec");
  BoundQuery single = q;
  single.weights = Vec{1.0};
  return detail::conc_bound_scaled(single, r, 1.0);
}

/// Composite tail bound: prefactor times the sum of per-component
/// exponentials at the split thresholds w_j r.
inline double conc_bound_composite(const BoundQuery& q, double r) {
  return detail::conc_bound_scaled(q, r, 1.0);
}

/// Errored-center variant: the Standard bound times exp(s^2 / (2 eta (d/eps - 1)))
/// for a proposal mean within s of the stationary point.
inline double conc_bound_errored(const BoundQuery& q, double r) {
  if (q.s_offset < 0.0) throw InputError("conc_bound_errored: s_offset must be >= 0");
  if (!(double(q.d) / q.epsilon > 1.0))
    throw InputError("conc_bound_errored: requires d/epsilon > 1");
  const double mult =
      std::exp(q.s_offset * q.s_offset / (2.0 * q.eta * (double(q.d) / q.epsilon - 1.0)));
  return conc_bound(q, r) * mult;
}

/// Largest r at which the low-range sub-Gaussian bound is valid:
/// pi L d^{(1+a)/2} eta^{(1+a)/2} / sqrt(a 2^a); unbounded at a = 0.
inline double lowrange_r_max(const SemiSmoothSpec& spec, int d, double eta) {
  spec.validate();
  if (spec.alpha == 0.0) return std::numeric_limits<double>::infinity();
  return M_PI * spec.l_alpha * std::pow(double(d) * eta, 0.5 * (1.0 + spec.alpha)) /
         std::sqrt(spec.alpha * std::pow(2.0, spec.alpha));
}

/// Low-range bound exp(-r^2 / (pi^2 L^2 d^a eta^{1+a})), valid only for r up
/// to lowrange_r_max; out-of-range requests are an error, never a value.
inline double conc_bound_lowrange(const SemiSmoothSpec& spec, int d, double eta,
                                  double r) {
  spec.validate();
  if (d < 1) throw InputError("conc_bound_lowrange: d must be >= 1");
  if (!(eta > 0.0)) throw InputError("conc_bound_lowrange: eta must be positive");
  if (!(r > 0.0)) throw InputError("conc_bound_lowrange: r must be positive");
  const double r_max = lowrange_r_max(spec, d, eta);
  if (r > r_max)
    throw OutOfRangeError("conc_bound_lowrange: r = " + fmt_g17(r) +
                          " exceeds the validity bound " + fmt_g17(r_max));
  const double a = spec.alpha;
  return std::exp(-r * r / (M_PI * M_PI * spec.l_alpha * spec.l_alpha *
                            std::pow(double(d), a) * std::pow(eta, 1.0 + a)));
}

/// Empirical tail probabilities with one-sided 99.9% Wilson upper bounds,
/// paired point-by-point against a named analytic bound.
struct TailReport {
  Vec r_grid;
  Vec empirical;
  Vec ci_upper;
  Vec bound;                    // empty when only the empirical side was run
  std::vector<char> dominated;  // per point: empirical <= bound + CI half-width
  bool dominated_overall = false;
  double ell_mean = 0.0;        // plug-in centering estimate
  double mean_split_delta = 0.0;  // half-sample stability of the plug-in mean
  long n_used = 0;
};

namespace detail {

// Draws n values of l(m + sqrt(eta) xi) in fixed-size blocks, one seeded
// stream per block, so results are independent of the worker count.
inline Vec draw_ell_values(const Potential& l, const Vec& m, double eta, long n,
                           std::uint64_t seed, int jobs) {
  const std::size_t block = 4096;
  const std::size_t n_blocks = (std::size_t(n) + block - 1) / block;
  Vec values(std::size_t(n), 0.0);
  parallel_for(n_blocks, jobs, [&](std::size_t bi) {
    RngStream rng(seed, bi);
    const std::size_t lo = bi * block;
    const std::size_t hi = std::min(lo + block, std::size_t(n));
    const double sd = std::sqrt(eta);
    Vec x(m.size());
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t k = 0; k < m.size(); ++k) x[k] = m[k] + sd * rng.normal();
      values[i] = eval_potential(l, x);
    }
  });
  return values;
}

inline TailReport tail_from_values(const Vec& values, const Vec& r_grid) {
  TailReport rep;
  rep.n_used = long(values.size());
  rep.r_grid = r_grid;
  double s = 0.0;
  for (double v : values) s += v;
  rep.ell_mean = s / double(values.size());
  const std::size_t half = values.size() / 2;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) s1 += values[i];
  for (std::size_t i = half; i < values.size(); ++i) s2 += values[i];
  rep.mean_split_delta =
      std::abs(s1 / double(half) - s2 / double(values.size() - half));
  for (double r : r_grid) {
    std::int64_t count = 0;
    for (double v : values)
      if (v - rep.ell_mean >= r) ++count;
    rep.empirical.push_back(double(count) / double(values.size()));
    rep.ci_upper.push_back(wilson_upper(count, rep.n_used, kZ999));
  }
  return rep;
}

inline void check_tail_preconditions(const Potential& l, const Vec& m, long n) {
  if (n < 10000) throw InputError("empirical_tail: need n_samples >= 10^4");
  check_dim(std::size_t(l.dim()), m.size(), "empirical_tail");
  const double grad_norm = norm(eval_subgradient(l, m));
  if (grad_norm > 1e-8)
    throw GradientAtMeanError("empirical_tail: ||l'(m)|| = " + fmt_g17(grad_norm) +
                              " violates the stationarity premise");
}

inline double bound_for(const BoundQuery& q, double r, double rate_scale) {
  BoundQuery single = q;
  if (q.variant != BoundVariant::Composite) single.weights = Vec{1.0};
  switch (q.variant) {
    case BoundVariant::Standard:
      return conc_bound_scaled(single, r, rate_scale);
    case BoundVariant::Composite:
      return conc_bound_scaled(q, r, rate_scale);
    case BoundVariant::Errored: {
      if (!(double(q.d) / q.epsilon > 1.0))
        throw InputError("conc_bound_errored: requires d/epsilon > 1");
      const double mult = std::exp(q.s_offset * q.s_offset /
                                   (2.0 * q.eta * (double(q.d) / q.epsilon - 1.0)));
      return conc_bound_scaled(single, r, rate_scale) * mult;
    }
    case BoundVariant::LowRange:
      return conc_bound_lowrange(q.specs.at(0), q.d, q.eta, r);
  }
  throw InputError("bound_for: unknown variant");
}

inline void apply_dominance(TailReport& rep, const BoundQuery& q, double rate_scale) {
  rep.bound.clear();
  rep.dominated.clear();
  rep.dominated_overall = true;
  for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
    const double b = bound_for(q, rep.r_grid[i], rate_scale);
    rep.bound.push_back(b);
    const double half_width = rep.ci_upper[i] - rep.empirical[i];
    const char ok = rep.empirical[i] <= b + half_width ? 1 : 0;
    rep.dominated.push_back(ok);
    if (!ok) rep.dominated_overall = false;
  }
}

}  // namespace detail

/// Tail frequencies Pr(l(X) - mean >= r) over an explicit r grid. The mean is
/// the plug-in estimate on the same draw set; its half-sample stability is
/// reported alongside.
inline TailReport empirical_tail(const Potential& l, const Vec& m, double eta,
                                 const Vec& r_grid, long n_samples,
                                 std::uint64_t seed, int jobs = 1) {
  detail::check_tail_preconditions(l, m, n_samples);
  if (!(eta > 0.0)) throw InputError("empirical_tail: eta must be positive");
  const Vec values = detail::draw_ell_values(l, m, eta, n_samples, seed, jobs);
  return detail::tail_from_values(values, r_grid);
}

/// Monte Carlo dominance check of an analytic bound over an explicit r grid:
/// dominated(point) = empirical point estimate <= bound + one-sided CI
/// half-width. rate_scale multiplies the exponent rate (falsification control).
inline TailReport verify_bound(const BoundQuery& q, const Potential& l, const Vec& m,
                               const Vec& r_grid, long n_samples, std::uint64_t seed,
                               int jobs = 1, double rate_scale = 1.0) {
  TailReport rep = empirical_tail(l, m, q.eta, r_grid, n_samples, seed, jobs);
  detail::apply_dominance(rep, q, rate_scale);
  return rep;
}

/// As verify_bound, with the r grid placed at empirical quantiles of the
/// positive excess (l(X) - mean)+. Quantiles of the raw excess sit below zero
/// for targets whose median is under the mean, where the bound displays are
/// not defined, so the grid conditions on the positive part.
inline TailReport verify_bound_at_quantiles(const BoundQuery& q, const Potential& l,
                                            const Vec& m, const Vec& quantiles,
                                            long n_samples, std::uint64_t seed,
                                            int jobs = 1, double rate_scale = 1.0) {
  detail::check_tail_preconditions(l, m, n_samples);
  for (double p : quantiles)
    if (!(p > 0.0 && p < 1.0))
      throw InputError("verify_bound_at_quantiles: quantiles must lie in (0,1)");
  const Vec values = detail::draw_ell_values(l, m, q.eta, n_samples, seed, jobs);
  double s = 0.0;
  for (double v : values) s += v;
  const double center = s / double(values.size());
  Vec excess_pos;
  excess_pos.reserve(values.size() / 2);
  for (double v : values)
    if (v - center > 0.0) excess_pos.push_back(v - center);
  if (excess_pos.empty())
    throw NumericError("verify_bound_at_quantiles: no positive excess observed");
  std::sort(excess_pos.begin(), excess_pos.end());
  Vec r_grid;
  for (double p : quantiles) r_grid.push_back(quantile_sorted(excess_pos, p));
  TailReport rep = detail::tail_from_values(values, r_grid);
  detail::apply_dominance(rep, q, rate_scale);
  return rep;
}

}  // namespace proxsamp

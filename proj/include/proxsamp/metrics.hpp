#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/rng.hpp"
#include "proxsamp/stats.hpp"

namespace proxsamp {

struct DistanceEstimate {
  double value = 0.0;
  std::string method;
  long n_used = 0;
  bool has_ci = false;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

namespace detail {

// Even-stride subsample down to n items, deterministic in the input order.
inline Vec stride_subsample(const Vec& v, std::size_t n) {
  if (v.size() <= n) return v;
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = v[std::size_t((double(i) + 0.5) * double(v.size()) / double(n))];
  return out;
}

inline std::vector<Vec> stride_subsample(const std::vector<Vec>& v, std::size_t n) {
  if (v.size() <= n) return v;
  std::vector<Vec> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = v[std::size_t((double(i) + 0.5) * double(v.size()) / double(n))];
  return out;
}

// Mean squared difference of sorted sequences (the exact 1D transport cost).
inline double w2sq_sorted_1d(Vec a, Vec b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const Vec aa = stride_subsample(a, n);
  const Vec bb = stride_subsample(b, n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (aa[i] - bb[i]) * (aa[i] - bb[i]);
  return s / double(n);
}

// Percentile bootstrap over per-item squared costs: resample, re-average,
// take the 2.5%/97.5% quantiles of sqrt(mean).
inline void bootstrap_cost_ci(const Vec& costs, int resamples, std::uint64_t seed,
                              DistanceEstimate& est) {
  if (resamples <= 0 || costs.empty()) return;
  Vec stats(std::size_t(resamples), 0.0);
  for (int r = 0; r < resamples; ++r) {
    RngStream rng(seed, std::uint64_t(r) + 1);
    double s = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i)
      s += costs[std::size_t(rng.next_u64() % costs.size())];
    stats[std::size_t(r)] = std::sqrt(s / double(costs.size()));
  }
  std::sort(stats.begin(), stats.end());
  est.has_ci = true;
  est.ci_lo = quantile_sorted(stats, 0.025);
  est.ci_hi = quantile_sorted(stats, 0.975);
}

// Min-cost perfect matching on an n x n cost matrix (shortest augmenting
// paths with potentials, O(n^3)). Returns the per-pair costs of the optimal
// assignment, keyed by column.
inline std::vector<double> solve_assignment(const std::vector<double>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t un = std::size_t(n);
  std::vector<double> u(un + 1, 0.0), v(un + 1, 0.0);
  std::vector<int> match(un + 1, 0), way(un + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(un + 1, inf);
    std::vector<char> used(un + 1, 0);
    do {
      used[std::size_t(j0)] = 1;
      const int i0 = match[std::size_t(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[std::size_t(j)]) continue;
        const double cur =
            cost[std::size_t(i0 - 1) * un + std::size_t(j - 1)] - u[std::size_t(i0)] - v[std::size_t(j)];
        if (cur < minv[std::size_t(j)]) {
          minv[std::size_t(j)] = cur;
          way[std::size_t(j)] = j0;
        }
        if (minv[std::size_t(j)] < delta) {
          delta = minv[std::size_t(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[std::size_t(j)]) {
          u[std::size_t(match[std::size_t(j)])] += delta;
          v[std::size_t(j)] -= delta;
        } else {
          minv[std::size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[std::size_t(j0)] != 0);
    do {
      const int j1 = way[std::size_t(j0)];
      match[std::size_t(j0)] = match[std::size_t(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<double> pair_costs;
  pair_costs.reserve(un);
  for (int j = 1; j <= n; ++j)
    pair_costs.push_back(cost[std::size_t(match[std::size_t(j)] - 1) * un + std::size_t(j - 1)]);
  return pair_costs;
}

}  // namespace detail

/// Exact empirical W2 in one dimension via the sorted quantile coupling.
/// The larger sample is subsampled uniformly to match counts.
inline DistanceEstimate w2_empirical_1d(const Vec& a, const Vec& b,
                                        int bootstrap_resamples = 0,
                                        std::uint64_t seed = 0) {
  if (a.empty() || b.empty()) throw InputError("w2_empirical_1d: empty input");
  DistanceEstimate est;
  est.method = "w2_1d_sorted";
  est.n_used = long(std::min(a.size(), b.size()));
  est.value = std::sqrt(detail::w2sq_sorted_1d(a, b));
  if (bootstrap_resamples > 0) {
    Vec sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const std::size_t n = std::min(sa.size(), sb.size());
    const Vec aa = detail::stride_subsample(sa, n);
    const Vec bb = detail::stride_subsample(sb, n);
    Vec costs(n);
    for (std::size_t i = 0; i < n; ++i) costs[i] = (aa[i] - bb[i]) * (aa[i] - bb[i]);
    detail::bootstrap_cost_ci(costs, bootstrap_resamples, seed, est);
  }
  return est;
}

/// Exact small-n empirical W2 in R^d via minimum-cost perfect matching on
/// squared Euclidean costs. Inputs are subsampled (even stride) to at most
/// n_cap points each; the bootstrap absorbs the subsampling noise.
inline DistanceEstimate w2_empirical_assignment(const std::vector<Vec>& a,
                                                const std::vector<Vec>& b,
                                                int n_cap = 512,
                                                int bootstrap_resamples = 0,
                                                std::uint64_t seed = 0) {
  if (a.empty() || b.empty()) throw InputError("w2_empirical_assignment: empty input");
  if (a[0].size() != b[0].size())
    throw InputError("w2_empirical_assignment: dimension mismatch");
  if (n_cap < 1) throw InputError("w2_empirical_assignment: n_cap must be >= 1");
  const std::size_t n = std::min({a.size(), b.size(), std::size_t(n_cap)});
  const std::vector<Vec> aa = detail::stride_subsample(a, n);
  const std::vector<Vec> bb = detail::stride_subsample(b, n);
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = norm_sq(aa[i] - bb[j]);
  const std::vector<double> pair_costs = detail::solve_assignment(cost, int(n));
  double total = 0.0;
  for (double c : pair_costs) total += c;

  DistanceEstimate est;
  est.method = "w2_assignment";
  est.n_used = long(n);
  est.value = std::sqrt(total / double(n));
  // bootstrap over the matched pair costs; re-solving the matching per
  // resample is cubic and would dominate acceptance runs
  if (bootstrap_resamples > 0)
    detail::bootstrap_cost_ci(pair_costs, bootstrap_resamples, seed, est);
  return est;
}

/// Sliced W2: root of the average squared 1D W2 over seeded uniform random
/// unit directions. A scalable surrogate for large n in d > 1.
inline DistanceEstimate sliced_w2(const std::vector<Vec>& a, const std::vector<Vec>& b,
                                  int n_directions, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw InputError("sliced_w2: empty input");
  if (a[0].size() != b[0].size()) throw InputError("sliced_w2: dimension mismatch");
  if (n_directions < 16) throw InputError("sliced_w2: need at least 16 directions");
  const std::size_t d = a[0].size();
  RngStream rng(seed);
  double total = 0.0;
  Vec pa(a.size()), pb(b.size());
  for (int k = 0; k < n_directions; ++k) {
    Vec dir = rng.normal_vec(d);
    const double nr = norm(dir);
    for (double& v : dir) v /= nr;
    for (std::size_t i = 0; i < a.size(); ++i) pa[i] = dot(a[i], dir);
    for (std::size_t i = 0; i < b.size(); ++i) pb[i] = dot(b[i], dir);
    total += detail::w2sq_sorted_1d(pa, pb);
  }
  DistanceEstimate est;
  est.method = "sliced_w2";
  est.n_used = long(std::min(a.size(), b.size()));
  est.value = std::sqrt(total / double(n_directions));
  return est;
}

/// TV between a sample set and a normalized density on [lo, hi]: half the L1
/// gap over the bin partition plus the out-of-support cell, with per-bin
/// density masses from 16-point Gauss-Legendre quadrature.
inline DistanceEstimate tv_histogram_1d(const Vec& samples,
                                        const std::function<double(double)>& density,
                                        int bins, double lo, double hi) {
  if (samples.empty()) throw InputError("tv_histogram_1d: empty sample set");
  if (bins < 16) throw InputError("tv_histogram_1d: need at least 16 bins");
  if (!(hi > lo)) throw InputError("tv_histogram_1d: empty support");

  static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589,
                                 0.4580167776572274, 0.6178762444026438,
                                 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
  static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};

  const double width = (hi - lo) / double(bins);
  Vec dens_mass(std::size_t(bins), 0.0);
  double total_mass = 0.0;
  for (int bi = 0; bi < bins; ++bi) {
    const double c = lo + (double(bi) + 0.5) * width;
    const double h = 0.5 * width;
    double s = 0.0;
    for (int k = 0; k < 8; ++k)
      s += gl_w[k] * (density(c + h * gl_x[k]) + density(c - h * gl_x[k]));
    dens_mass[std::size_t(bi)] = s * h;
    total_mass += dens_mass[std::size_t(bi)];
  }
  if (std::abs(total_mass - 1.0) > 0.01)
    throw InputError("tv_histogram_1d: density mass on support is " +
                     fmt_g17(total_mass) + ", not within 0.01 of 1");
  const double dens_out = std::max(0.0, 1.0 - total_mass);

  Vec emp_mass(std::size_t(bins), 0.0);
  double emp_out = 0.0;
  const double inv_n = 1.0 / double(samples.size());
  for (double x : samples) {
    if (x < lo || x >= hi) {
      emp_out += inv_n;
      continue;
    }
    std::size_t bi = std::size_t((x - lo) / width);
    if (bi >= std::size_t(bins)) bi = std::size_t(bins) - 1;
    emp_mass[bi] += inv_n;
  }

  double l1 = std::abs(emp_out - dens_out);
  for (int bi = 0; bi < bins; ++bi)
    l1 += std::abs(emp_mass[std::size_t(bi)] - dens_mass[std::size_t(bi)]);

  DistanceEstimate est;
  est.method = "tv_histogram_1d";
  est.n_used = long(samples.size());
  est.value = 0.5 * l1;
  return est;
}

/// Support defaulted to sample min/max widened by three sample standard
/// deviations.
inline DistanceEstimate tv_histogram_1d(const Vec& samples,
                                        const std::function<double(double)>& density,
                                        int bins = 64) {
  if (samples.size() < 2) throw InputError("tv_histogram_1d: need at least 2 samples");
  const double sd = std::sqrt(variance(samples));
  const double lo = *std::min_element(samples.begin(), samples.end()) - 3.0 * sd;
  const double hi = *std::max_element(samples.begin(), samples.end()) + 3.0 * sd;
  return tv_histogram_1d(samples, density, bins, lo, hi);
}

}  // namespace proxsamp

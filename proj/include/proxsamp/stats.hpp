#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "proxsamp/common.hpp"

namespace proxsamp {

// Phi^{-1}(0.999); used for one-sided 99.9% Wilson intervals and GOF gates.
inline constexpr double kZ999 = 3.0902323061678132;

inline double mean(const Vec& v) {
  if (v.empty()) throw InputError("mean: empty input");
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Unbiased sample variance.
inline double variance(const Vec& v) {
  if (v.size() < 2) throw InputError("variance: need at least 2 samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / double(v.size() - 1);
}

// Nearest-rank quantile of a sorted vector (deterministic, no interpolation).
inline double quantile_sorted(const Vec& sorted, double q) {
  if (sorted.empty()) throw InputError("quantile: empty input");
  if (q < 0.0 || q > 1.0) throw InputError("quantile: q outside [0,1]");
  const std::ptrdiff_t n = std::ptrdiff_t(sorted.size());
  std::ptrdiff_t idx = std::ptrdiff_t(std::ceil(q * double(n))) - 1;
  if (idx < 0) idx = 0;
  if (idx >= n) idx = n - 1;
  return sorted[std::size_t(idx)];
}

inline double quantile(Vec v, double q) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, q);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x, double mu, double var) {
  const double z = x - mu;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * M_PI * var);
}

// Acklam's rational approximation of Phi^{-1}, |rel err| < 1.15e-9.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal_quantile: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// One-sided Wilson score bounds for a binomial proportion.
inline double wilson_upper(std::int64_t successes, std::int64_t n, double z) {
  if (n <= 0) throw InputError("wilson_upper: n must be positive");
  const double p = double(successes) / double(n);
  const double z2n = z * z / double(n);
  const double center = p + 0.5 * z2n;
  const double rad = z * std::sqrt(p * (1.0 - p) / double(n) + 0.25 * z2n / double(n));
  return std::min(1.0, (center + rad) / (1.0 + z2n));
}

inline double wilson_lower(std::int64_t successes, std::int64_t n, double z) {
  if (n <= 0) throw InputError("wilson_lower: n must be positive");
  const double p = double(successes) / double(n);
  const double z2n = z * z / double(n);
  const double center = p + 0.5 * z2n;
  const double rad = z * std::sqrt(p * (1.0 - p) / double(n) + 0.25 * z2n / double(n));
  return std::max(0.0, (center - rad) / (1.0 + z2n));
}

// Wilson-Hilferty approximation of the chi-squared quantile.
inline double chi2_quantile(double p, double dof) {
  if (dof <= 0.0) throw InputError("chi2_quantile: dof must be positive");
  const double z = normal_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit ols_fit(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("ols_fit: bad inputs");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("ols_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace proxsamp

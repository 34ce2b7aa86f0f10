#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxsamp {

using Vec = std::vector<double>;

// Input validation failures (dimension mismatch, bad parameters, malformed config).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A request outside a formula's stated validity range.
struct OutOfRangeError : InputError {
  using InputError::InputError;
};

// Non-finite intermediate values, overflowing likelihood ratios, and similar.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Prox subproblem with a non-positive-definite system.
struct IllPosedProxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejection sampler exhausted its proposal budget; carries the trial count.
struct RgoGiveUpError : std::runtime_error {
  int proposals;
  explicit RgoGiveUpError(const std::string& msg, int n)
      : std::runtime_error(msg), proposals(n) {}
};

// Step-size planner failed to reach a fixed point.
struct PlanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_dim(std::size_t expected, std::size_t got, const char* where) {
  if (expected != got) {
    throw InputError(std::string(where) + ": expected vector of length " +
                     std::to_string(expected) + ", got " + std::to_string(got));
  }
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline Vec operator+(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec operator-(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec operator*(double c, Vec a) {
  for (double& x : a) x *= c;
  return a;
}

// a += c * b
inline void axpy(Vec& a, double c, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

inline bool all_finite(const Vec& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

// Fixed 17-significant-digit decimal formatting; round-trips IEEE doubles,
// so identical values always print identically.
inline std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace proxsamp

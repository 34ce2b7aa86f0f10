#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/rng.hpp"

namespace proxsamp {

/// Declared smoothness class of a potential: the subgradient Hoelder condition
/// ||f'(u) - f'(v)|| <= l_alpha * ||u - v||^alpha with order alpha in [0,1].
/// alpha = 1 is ordinary gradient smoothness, alpha = 0 covers Lipschitz
/// potentials through their (bounded) subgradients.
struct SemiSmoothSpec {
  double alpha = 1.0;
  double l_alpha = 1.0;

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw InputError("SemiSmoothSpec: alpha must lie in [0,1]");
    if (!(l_alpha > 0.0)) throw InputError("SemiSmoothSpec: l_alpha must be positive");
  }
};

/// One additive term of a potential: energy, a deterministic subgradient
/// selection, and the declared smoothness class. At nondifferentiable points
/// the subgradient must return a fixed minimal-norm element (0 for |.| at 0)
/// so that runs are reproducible given the seed.
struct PotentialComponent {
  std::function<double(const Vec&)> energy;
  std::function<Vec(const Vec&)> subgrad;
  SemiSmoothSpec spec;
};

// Closed-form prox solve, installed on builtins that admit one. `residual` is
// the stationarity residual dist(0, f'(x) + (x - y)/eta) measured against the
// subdifferential the solve actually used, so soft-threshold zeros report 0
// rather than the canonical-selection mismatch.
struct ExactProxSolve {
  Vec x;
  double residual = 0.0;
};

// Diagonal quadratic part (when the whole potential is 1/2 x'Ax - b'x);
// lets verifiers use exact Gaussian conditionals.
struct QuadraticInfo {
  Vec a_diag;
  Vec b;
};

/// An evaluable energy f = sum_j f_j with per-component subgradients and
/// smoothness declarations. Immutable after construction and safe to share
/// across parallel workers.
class Potential {
 public:
  Potential(int dim, std::string name, std::vector<PotentialComponent> components)
      : dim_(dim), name_(std::move(name)), components_(std::move(components)) {
    if (dim_ < 1) throw InputError("Potential: dim must be >= 1");
    if (components_.empty()) throw InputError("Potential: components must be non-empty");
    for (const auto& c : components_) c.spec.validate();
  }

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::vector<PotentialComponent>& components() const { return components_; }
  bool is_composite() const { return components_.size() > 1; }

  std::vector<SemiSmoothSpec> specs() const {
    std::vector<SemiSmoothSpec> s;
    s.reserve(components_.size());
    for (const auto& c : components_) s.push_back(c.spec);
    return s;
  }

  // The component whose step-size factor L^{2/(1+a)} d^{a/(1+a)} binds;
  // single-component potentials return their own spec.
  SemiSmoothSpec dominant_spec() const {
    const SemiSmoothSpec* best = &components_[0].spec;
    double best_score = -1.0;
    for (const auto& c : components_) {
      const double score =
          std::pow(c.spec.l_alpha, 2.0 / (1.0 + c.spec.alpha)) *
          std::pow(double(dim_), c.spec.alpha / (1.0 + c.spec.alpha));
      if (score > best_score) {
        best_score = score;
        best = &c.spec;
      }
    }
    return *best;
  }

  bool has_exact_prox() const { return bool(exact_prox_); }
  ExactProxSolve exact_prox(const Vec& y, double eta) const {
    return exact_prox_(y, eta);
  }
  void set_exact_prox(std::function<ExactProxSolve(const Vec&, double)> f) {
    exact_prox_ = std::move(f);
  }

  const std::optional<QuadraticInfo>& quadratic_info() const { return quad_; }
  void set_quadratic_info(QuadraticInfo q) { quad_ = std::move(q); }

 private:
  int dim_;
  std::string name_;
  std::vector<PotentialComponent> components_;
  std::function<ExactProxSolve(const Vec&, double)> exact_prox_;
  std::optional<QuadraticInfo> quad_;
};

/// f(x) = sum_j f_j(x), summed in component-list order.
inline double eval_potential(const Potential& p, const Vec& x) {
  check_dim(std::size_t(p.dim()), x.size(), "eval_potential");
  double s = 0.0;
  for (const auto& c : p.components()) s += c.energy(x);
  return s;
}

/// f'(x) = sum_j f'_j(x) with the components' fixed kink selections.
inline Vec eval_subgradient(const Potential& p, const Vec& x) {
  check_dim(std::size_t(p.dim()), x.size(), "eval_subgradient");
  Vec g(x.size(), 0.0);
  for (const auto& c : p.components()) {
    Vec gj = c.subgrad(x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += gj[i];
  }
  return g;
}

struct SemiSmoothCheckReport {
  std::vector<double> max_ratio;  // per component
  std::vector<char> flagged;      // ratio exceeded the declared l_alpha
  bool any_flagged = false;
};

/// Samples n_pairs (u, v) uniformly from the ball of the given radius and
/// reports, per component, the largest observed ||f'_j(u)-f'_j(v)|| / ||u-v||^a.
/// A flag is a report outcome, not an error.
inline SemiSmoothCheckReport empirical_semismooth_check(const Potential& p,
                                                        int n_pairs, double radius,
                                                        std::uint64_t seed) {
  if (n_pairs < 1) throw InputError("empirical_semismooth_check: n_pairs must be >= 1");
  if (!(radius > 0.0)) throw InputError("empirical_semismooth_check: radius must be positive");
  const std::size_t d = std::size_t(p.dim());
  RngStream rng(seed);
  auto sample_ball = [&]() {
    Vec x = rng.normal_vec(d);
    const double nr = norm(x);
    const double scale =
        nr > 0.0 ? radius * std::pow(rng.uniform_open(), 1.0 / double(d)) / nr : 0.0;
    for (double& v : x) v *= scale;
    return x;
  };
  SemiSmoothCheckReport rep;
  rep.max_ratio.assign(p.components().size(), 0.0);
  rep.flagged.assign(p.components().size(), 0);
  for (int k = 0; k < n_pairs; ++k) {
    const Vec u = sample_ball();
    const Vec v = sample_ball();
    const double dist = norm(u - v);
    if (dist == 0.0) continue;
    for (std::size_t j = 0; j < p.components().size(); ++j) {
      const auto& c = p.components()[j];
      const double num = norm(c.subgrad(u) - c.subgrad(v));
      const double ratio = num / std::pow(dist, c.spec.alpha);
      if (ratio > rep.max_ratio[j]) rep.max_ratio[j] = ratio;
    }
  }
  for (std::size_t j = 0; j < p.components().size(); ++j) {
    // 1e-12 relative guard against rounding ties at exact constants
    if (rep.max_ratio[j] > p.components()[j].spec.l_alpha * (1.0 + 1e-12)) {
      rep.flagged[j] = 1;
      rep.any_flagged = true;
    }
  }
  return rep;
}

/// Max absolute coordinate error between central differences of the energy and
/// the reported subgradient. Near-kink results are reported, not trusted.
inline double finite_difference_check(const Potential& p, const Vec& x, double h) {
  if (!(h > 0.0)) throw InputError("finite_difference_check: h must be positive");
  check_dim(std::size_t(p.dim()), x.size(), "finite_difference_check");
  const Vec g = eval_subgradient(p, x);
  Vec xp = x, xm = x;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fd = (eval_potential(p, xp) - eval_potential(p, xm)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]));
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return worst;
}

/// Minimum sampled energy over the box [-radius, radius]^d; the bounded-below
/// property is checked by sampling, never proved.
inline double sampled_energy_min(const Potential& p, double radius, int n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 1) throw InputError("sampled_energy_min: n_samples must be >= 1");
  RngStream rng(seed);
  double lo = std::numeric_limits<double>::infinity();
  Vec x(std::size_t(p.dim()));
  for (int k = 0; k < n_samples; ++k) {
    for (double& v : x) v = radius * (2.0 * rng.uniform() - 1.0);
    lo = std::min(lo, eval_potential(p, x));
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Builtin targets
// ---------------------------------------------------------------------------

namespace detail {

inline PotentialComponent quadratic_component(Vec a_diag, Vec b) {
  double lmax = 0.0;
  for (double a : a_diag) {
    if (a < 0.0) throw InputError("quadratic: diagonal entries must be >= 0");
    lmax = std::max(lmax, a);
  }
  if (lmax == 0.0) lmax = 1e-12;  // spec constant must stay positive
  PotentialComponent c;
  c.energy = [a_diag, b](const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += 0.5 * a_diag[i] * x[i] * x[i] - b[i] * x[i];
    return s;
  };
  c.subgrad = [a_diag, b](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = a_diag[i] * x[i] - b[i];
    return g;
  };
  c.spec = SemiSmoothSpec{1.0, lmax};
  return c;
}

inline PotentialComponent l1_component(int dim, double lambda) {
  if (!(lambda > 0.0)) throw InputError("l1: lambda must be positive");
  PotentialComponent c;
  c.energy = [lambda](const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return lambda * s;
  };
  c.subgrad = [lambda](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      g[i] = x[i] > 0.0 ? lambda : (x[i] < 0.0 ? -lambda : 0.0);
    return g;
  };
  c.spec = SemiSmoothSpec{0.0, 2.0 * lambda * std::sqrt(double(dim))};
  return c;
}

inline void install_quadratic_prox(Potential& p, Vec a_diag, Vec b) {
  p.set_exact_prox([a_diag, b](const Vec& y, double eta) {
    ExactProxSolve s;
    s.x.resize(y.size());
    double res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double denom = a_diag[i] + 1.0 / eta;
      if (!(denom > 0.0)) throw IllPosedProxError("prox: A + I/eta not positive");
      s.x[i] = (b[i] + y[i] / eta) / denom;
      const double r = a_diag[i] * s.x[i] - b[i] + (s.x[i] - y[i]) / eta;
      res += r * r;
    }
    s.residual = std::sqrt(res);
    return s;
  });
  p.set_quadratic_info(QuadraticInfo{std::move(a_diag), std::move(b)});
}

}  // namespace detail

/// f(x) = 1/2 ||x||^2, spec (alpha=1, L=1).
inline Potential make_iso_gaussian(int dim) {
  Vec a(std::size_t(dim), 1.0), b(std::size_t(dim), 0.0);
  Potential p(dim, "iso_gaussian", {detail::quadratic_component(a, b)});
  detail::install_quadratic_prox(p, a, b);
  return p;
}

/// f(x) = 1/2 x'Ax - b'x with diagonal A >= 0, spec (alpha=1, L=max A_ii).
inline Potential make_aniso_quadratic(Vec diag, Vec b = {}) {
  const int dim = int(diag.size());
  if (dim < 1) throw InputError("aniso_quadratic: empty diagonal");
  if (b.empty()) b.assign(diag.size(), 0.0);
  check_dim(diag.size(), b.size(), "aniso_quadratic");
  Potential p(dim, "aniso_quadratic", {detail::quadratic_component(diag, b)});
  detail::install_quadratic_prox(p, std::move(diag), std::move(b));
  return p;
}

/// f(x) = l0 ||x||, spec (alpha=0, L=2 l0); subgradient 0 at the origin.
inline Potential make_norm_potential(int dim, double l0) {
  if (!(l0 > 0.0)) throw InputError("norm potential: l0 must be positive");
  PotentialComponent c;
  c.energy = [l0](const Vec& x) { return l0 * norm(x); };
  c.subgrad = [l0](const Vec& x) {
    const double nr = norm(x);
    Vec g(x.size(), 0.0);
    if (nr > 0.0)
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = l0 * x[i] / nr;
    return g;
  };
  c.spec = SemiSmoothSpec{0.0, 2.0 * l0};
  Potential p(dim, "norm", {std::move(c)});
  // block soft threshold
  p.set_exact_prox([l0](const Vec& y, double eta) {
    ExactProxSolve s;
    const double ny = norm(y);
    const double shrink = ny > 0.0 ? std::max(0.0, 1.0 - l0 * eta / ny) : 0.0;
    s.x = shrink * Vec(y);
    s.residual = (shrink > 0.0) ? 0.0 : std::max(0.0, ny / eta - l0);
    return s;
  });
  return p;
}

/// Per-coordinate Huber energy with transition width w: u^2/(2w) inside
/// [-w, w], |u| - w/2 outside. Derivative clamp(u/w, -1, 1); spec (1, 1/w).
inline Potential make_huber_sum(int dim, double width) {
  if (!(width > 0.0)) throw InputError("huber: width must be positive");
  PotentialComponent c;
  c.energy = [width](const Vec& x) {
    double s = 0.0;
    for (double u : x) {
      const double a = std::abs(u);
      s += a <= width ? u * u / (2.0 * width) : a - 0.5 * width;
    }
    return s;
  };
  c.subgrad = [width](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      g[i] = std::clamp(x[i] / width, -1.0, 1.0);
    return g;
  };
  c.spec = SemiSmoothSpec{1.0, 1.0 / width};
  return Potential(dim, "huber", {std::move(c)});
}

/// Two-component Gaussian mixture with unit covariances and means at
/// +/- (separation/2) e_1. Smoothness bound 1 + separation^2/4 is conservative.
inline Potential make_gaussian_mixture(int dim, double separation, double weight1) {
  if (!(separation > 0.0)) throw InputError("gauss_mix: separation must be positive");
  if (!(weight1 > 0.0 && weight1 < 1.0))
    throw InputError("gauss_mix: weight1 must lie in (0,1)");
  const double m = 0.5 * separation;
  const double w1 = weight1, w2 = 1.0 - weight1;
  auto quads = [m](const Vec& x) {
    // squared distances to the two means differ only in the first coordinate
    double base = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) base += x[i] * x[i];
    const double q1 = -0.5 * (base + (x[0] - m) * (x[0] - m));
    const double q2 = -0.5 * (base + (x[0] + m) * (x[0] + m));
    return std::pair<double, double>(q1, q2);
  };
  PotentialComponent c;
  c.energy = [quads, w1, w2](const Vec& x) {
    const auto [q1, q2] = quads(x);
    const double hi = std::max(q1, q2);
    return -(hi + std::log(w1 * std::exp(q1 - hi) + w2 * std::exp(q2 - hi)));
  };
  c.subgrad = [quads, m, w1, w2](const Vec& x) {
    const auto [q1, q2] = quads(x);
    const double hi = std::max(q1, q2);
    const double e1 = w1 * std::exp(q1 - hi), e2 = w2 * std::exp(q2 - hi);
    const double p1 = e1 / (e1 + e2), p2 = 1.0 - p1;
    Vec g = x;
    g[0] = p1 * (x[0] - m) + p2 * (x[0] + m);
    return g;
  };
  c.spec = SemiSmoothSpec{1.0, 1.0 + 0.25 * separation * separation};
  return Potential(dim, "gauss_mix", {std::move(c)});
}

/// Composite f(x) = 1/2 x'Ax + lambda sum |x_i| as a two-component potential;
/// the l1 spec is (alpha=0, L=2 lambda sqrt(d)), the worst-case subgradient
/// difference between sign vectors.
inline Potential make_quadratic_l1(Vec diag, double lambda) {
  const int dim = int(diag.size());
  if (dim < 1) throw InputError("quad_l1: empty diagonal");
  Vec b(diag.size(), 0.0);
  std::vector<PotentialComponent> comps;
  comps.push_back(detail::quadratic_component(diag, b));
  comps.push_back(detail::l1_component(dim, lambda));
  Potential p(dim, "quad_l1", std::move(comps));
  // per-coordinate soft threshold after the quadratic shift
  p.set_exact_prox([diag, lambda](const Vec& y, double eta) {
    ExactProxSolve s;
    s.x.resize(y.size());
    double res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double denom = diag[i] + 1.0 / eta;
      if (!(denom > 0.0)) throw IllPosedProxError("prox: A + I/eta not positive");
      const double t = y[i] / eta;
      double x = 0.0, r = 0.0;
      if (t > lambda) {
        x = (t - lambda) / denom;
        r = diag[i] * x + lambda + (x - y[i]) / eta;
      } else if (t < -lambda) {
        x = (t + lambda) / denom;
        r = diag[i] * x - lambda + (x - y[i]) / eta;
      } else {
        r = std::max(0.0, std::abs(t) - lambda);  // distance to the subdifferential
      }
      s.x[i] = x;
      res += r * r;
    }
    s.residual = std::sqrt(res);
    return s;
  });
  return p;
}

/// f == 0; prox is the identity. Useful as a degenerate test target.
inline Potential make_zero_potential(int dim) {
  PotentialComponent c;
  c.energy = [](const Vec&) { return 0.0; };
  c.subgrad = [](const Vec& x) { return Vec(x.size(), 0.0); };
  c.spec = SemiSmoothSpec{0.0, 1e-12};
  Potential p(dim, "zero", {std::move(c)});
  p.set_exact_prox([](const Vec& y, double) { return ExactProxSolve{y, 0.0}; });
  return p;
}

// Parameters a builtin constructor may consume; the CLI fills this from the
// [target] config section.
struct BuiltinParams {
  int dim = 1;
  Vec diag;
  Vec b;
  double l0 = 1.0;
  double width = 1.0;
  double lambda = 1.0;
  double separation = 2.0;
  double weight1 = 0.5;
};

inline Potential make_builtin(const std::string& name, const BuiltinParams& p) {
  if (name == "iso_gaussian") return make_iso_gaussian(p.dim);
  if (name == "aniso_quadratic") {
    if (p.diag.empty()) throw InputError("aniso_quadratic: diag required");
    return make_aniso_quadratic(p.diag, p.b);
  }
  if (name == "norm") return make_norm_potential(p.dim, p.l0);
  if (name == "huber") return make_huber_sum(p.dim, p.width);
  if (name == "gauss_mix") return make_gaussian_mixture(p.dim, p.separation, p.weight1);
  if (name == "quad_l1") {
    if (p.diag.empty()) throw InputError("quad_l1: diag required");
    return make_quadratic_l1(p.diag, p.lambda);
  }
  if (name == "zero") return make_zero_potential(p.dim);
  throw InputError("unknown builtin target: " + name);
}

}  // namespace proxsamp

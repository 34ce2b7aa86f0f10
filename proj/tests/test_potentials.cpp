#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxsamp/potentials.hpp"
#include "proxsamp/rng.hpp"

using namespace proxsamp;

TEST_CASE("energy evaluation of builtins") {
  Potential iso = make_iso_gaussian(2);
  CHECK(eval_potential(iso, {0.0, 0.0}) == 0.0);

  Potential nrm = make_norm_potential(2, 1.0);
  CHECK(eval_potential(nrm, {3.0, 4.0}) == doctest::Approx(5.0));

  Potential comp = make_quadratic_l1({1.0}, 1.0);  // 1/2 x^2 + |x|
  CHECK(eval_potential(comp, {2.0}) == doctest::Approx(4.0));

  CHECK_THROWS_AS(eval_potential(iso, {1.0}), InputError);
}

TEST_CASE("subgradient evaluation and kink selection") {
  Potential iso = make_iso_gaussian(2);
  const Vec g = eval_subgradient(iso, {1.0, 2.0});
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 2.0);

  // minimal-norm selection: 0 for |.| at 0
  Potential l1 = make_quadratic_l1({0.0}, 1.0);
  CHECK(eval_subgradient(l1, {0.0})[0] == 0.0);

  Potential hub = make_huber_sum(1, 1.0);
  CHECK(eval_subgradient(hub, {2.0})[0] == 1.0);  // clipped linear region

  CHECK_THROWS_AS(eval_subgradient(iso, {1.0, 2.0, 3.0}), InputError);
}

TEST_CASE("subgradients are deterministic") {
  Potential mix = make_gaussian_mixture(3, 3.0, 0.4);
  const Vec x{0.3, -1.0, 0.5};
  const Vec g1 = eval_subgradient(mix, x);
  const Vec g2 = eval_subgradient(mix, x);
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("composite additivity is exact") {
  Potential comp = make_quadratic_l1({1.0, 2.0}, 0.5);
  const Vec x{0.7, -1.3};
  double e = 0.0;
  Vec g(x.size(), 0.0);
  for (const auto& c : comp.components()) {
    e += c.energy(x);
    const Vec gj = c.subgrad(x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += gj[i];
  }
  CHECK(eval_potential(comp, x) == e);
  const Vec gc = eval_subgradient(comp, x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(gc[i] == g[i]);
}

TEST_CASE("semi-smoothness check never flags builtins at their catalog spec") {
  std::vector<Potential> targets;
  targets.push_back(make_iso_gaussian(3));
  targets.push_back(make_aniso_quadratic({1.0, 4.0}, {0.5, -0.5}));
  targets.push_back(make_norm_potential(3, 1.0));
  targets.push_back(make_huber_sum(3, 1.0));
  targets.push_back(make_gaussian_mixture(3, 2.5, 0.5));
  targets.push_back(make_quadratic_l1({1.0, 2.0, 0.5}, 0.7));
  for (const auto& p : targets) {
    for (std::uint64_t seed : {1ULL, 77ULL, 123456ULL}) {
      const auto rep = empirical_semismooth_check(p, 10000, 10.0, seed);
      CAPTURE(p.name());
      CHECK_FALSE(rep.any_flagged);
    }
  }
}

TEST_CASE("semi-smoothness ratios respect the declared constants") {
  const auto rep_iso = empirical_semismooth_check(make_iso_gaussian(2), 5000, 10.0, 3);
  CHECK(rep_iso.max_ratio[0] <= 1.0 + 1e-9);  // gradient is the identity map

  const auto rep_norm = empirical_semismooth_check(make_norm_potential(2, 1.0), 5000, 10.0, 3);
  CHECK(rep_norm.max_ratio[0] <= 2.0 + 1e-9);

  const auto rep_hub = empirical_semismooth_check(make_huber_sum(2, 1.0), 5000, 10.0, 3);
  CHECK(rep_hub.max_ratio[0] <= 1.0 + 1e-9);
}

TEST_CASE("an understated constant is flagged") {
  PotentialComponent c;
  c.energy = [](const Vec& x) { return 0.5 * norm_sq(x); };
  c.subgrad = [](const Vec& x) { return x; };
  c.spec = SemiSmoothSpec{1.0, 0.5};  // true constant is 1
  Potential lying(2, "understated", {std::move(c)});
  const auto rep = empirical_semismooth_check(lying, 2000, 5.0, 9);
  CHECK(rep.any_flagged);
}

TEST_CASE("finite differences match closed-form gradients at smooth points") {
  RngStream rng(2024);
  Potential quad = make_aniso_quadratic({1.0, 3.0, 0.5}, {0.1, 0.0, -0.2});
  Potential mix = make_gaussian_mixture(3, 2.0, 0.5);
  Potential hub = make_huber_sum(3, 1.0);
  Potential nrm = make_norm_potential(3, 1.0);
  Potential l1 = make_quadratic_l1({1.0, 1.0, 1.0}, 0.5);
  // resample any point within 0.01 of a kink of the piecewise targets
  auto smooth_point = [&]() {
    for (;;) {
      Vec x = rng.normal_vec(3);
      bool ok = norm(x) > 0.01;
      for (double v : x)
        ok = ok && std::abs(v) > 0.01 && std::abs(std::abs(v) - 1.0) > 0.01;
      if (ok) return x;
    }
  };
  for (int k = 0; k < 100; ++k) {
    const Vec x = smooth_point();
    CHECK(finite_difference_check(quad, x, 1e-4) < 1e-6);
    CHECK(finite_difference_check(mix, x, 1e-4) < 1e-6);
    CHECK(finite_difference_check(hub, x, 1e-4) < 1e-6);
    CHECK(finite_difference_check(nrm, x, 1e-4) < 1e-6);
    CHECK(finite_difference_check(l1, x, 1e-4) < 1e-6);
  }
}

TEST_CASE("finite differences are exact for linear components") {
  Potential lin = make_aniso_quadratic({0.0, 0.0}, {1.5, -2.0});
  CHECK(finite_difference_check(lin, {0.3, 0.9}, 1e-4) < 1e-10);
}

TEST_CASE("near-kink finite differences are large and reported") {
  Potential l1 = make_quadratic_l1({0.0}, 1.0);  // |x|
  const double err = finite_difference_check(l1, {1e-6}, 1e-4);
  CHECK(err > 0.9);  // central difference straddles the kink
}

TEST_CASE("builtin energies are bounded below on test boxes") {
  for (const auto& p : {make_iso_gaussian(2), make_norm_potential(2, 1.0),
                        make_huber_sum(2, 0.5), make_gaussian_mixture(2, 3.0, 0.3)}) {
    CHECK(std::isfinite(sampled_energy_min(p, 10.0, 2000, 5)));
  }
}

TEST_CASE("builtin parameter validation") {
  CHECK_THROWS_AS(make_norm_potential(2, -1.0), InputError);
  CHECK_THROWS_AS(make_huber_sum(2, 0.0), InputError);
  CHECK_THROWS_AS(make_gaussian_mixture(2, 2.0, 1.5), InputError);
  CHECK_THROWS_AS(make_builtin("no_such_target", BuiltinParams{}), InputError);
  CHECK_THROWS_AS((SemiSmoothSpec{1.5, 1.0}.validate()), InputError);
  CHECK_THROWS_AS((SemiSmoothSpec{0.5, 0.0}.validate()), InputError);
}

TEST_CASE("l1 catalog constant is 2 lambda sqrt(d)") {
  Potential p = make_quadratic_l1({1.0, 1.0, 1.0, 1.0}, 0.5);
  CHECK(p.components()[1].spec.alpha == 0.0);
  CHECK(p.components()[1].spec.l_alpha == doctest::Approx(2.0 * 0.5 * 2.0));
}

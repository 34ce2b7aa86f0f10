#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxsamp/metrics.hpp"
#include "proxsamp/rng.hpp"
#include "proxsamp/stats.hpp"

using namespace proxsamp;

TEST_CASE("1d empirical W2") {
  CHECK(w2_empirical_1d({1.0, 2.0, 3.0}, {3.0, 1.0, 2.0}).value == 0.0);
  CHECK(w2_empirical_1d({0.0, 1.0, 5.0}, {1.0, 2.0, 6.0}).value ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w2_empirical_1d({0.0, 2.0}, {1.0, 3.0}).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(w2_empirical_1d({}, {1.0}), InputError);
}

TEST_CASE("1d W2 subsamples the larger input") {
  RngStream rng(8);
  Vec a(10000), b(3000);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal();
  const auto est = w2_empirical_1d(a, b);
  CHECK(est.n_used == 3000);
  CHECK(est.value < 0.1);
}

TEST_CASE("assignment W2 basics") {
  const std::vector<Vec> a{{0.0, 0.0}, {1.0, 0.0}};
  const std::vector<Vec> b{{0.0, 1.0}, {1.0, 1.0}};
  CHECK(w2_empirical_assignment(a, a).value == 0.0);
  CHECK(w2_empirical_assignment(a, b).value == doctest::Approx(1.0).epsilon(1e-12));

  // common shift moves the estimate by exactly the shift norm
  RngStream rng(5);
  std::vector<Vec> pts(40), shifted(40);
  const Vec v{0.6, -0.8};  // norm 1
  for (int i = 0; i < 40; ++i) {
    pts[std::size_t(i)] = rng.normal_vec(2);
    shifted[std::size_t(i)] = pts[std::size_t(i)] + v;
  }
  CHECK(w2_empirical_assignment(pts, shifted).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("assignment W2 reduces to the sorted coupling in 1d") {
  RngStream rng(17);
  Vec a1(128), b1(128);
  std::vector<Vec> a(128), b(128);
  for (int i = 0; i < 128; ++i) {
    a1[std::size_t(i)] = rng.normal();
    b1[std::size_t(i)] = 0.5 + 1.3 * rng.normal();
    a[std::size_t(i)] = {a1[std::size_t(i)]};
    b[std::size_t(i)] = {b1[std::size_t(i)]};
  }
  CHECK(std::abs(w2_empirical_assignment(a, b).value - w2_empirical_1d(a1, b1).value) <
        1e-9);
}

TEST_CASE("coordinate projections contract the assignment distance") {
  RngStream rng(23);
  std::vector<Vec> a(64), b(64);
  for (int i = 0; i < 64; ++i) {
    a[std::size_t(i)] = rng.normal_vec(3);
    b[std::size_t(i)] = rng.normal_vec(3);
    b[std::size_t(i)][0] += 1.0;
  }
  const double full = w2_empirical_assignment(a, b).value;
  for (int coord = 0; coord < 3; ++coord) {
    Vec pa(64), pb(64);
    for (int i = 0; i < 64; ++i) {
      pa[std::size_t(i)] = a[std::size_t(i)][std::size_t(coord)];
      pb[std::size_t(i)] = b[std::size_t(i)][std::size_t(coord)];
    }
    CHECK(full >= w2_empirical_1d(pa, pb).value - 1e-12);
  }
}

TEST_CASE("W2 estimators are symmetric and nonnegative") {
  RngStream rng(31);
  Vec a1(200), b1(200);
  std::vector<Vec> a(200), b(200);
  for (int i = 0; i < 200; ++i) {
    a1[std::size_t(i)] = rng.normal();
    b1[std::size_t(i)] = rng.normal() * 2.0;
    a[std::size_t(i)] = {a1[std::size_t(i)], rng.normal()};
    b[std::size_t(i)] = {b1[std::size_t(i)], rng.normal()};
  }
  CHECK(w2_empirical_1d(a1, b1).value == w2_empirical_1d(b1, a1).value);
  CHECK(w2_empirical_assignment(a, b).value ==
        doctest::Approx(w2_empirical_assignment(b, a).value).epsilon(1e-12));
  CHECK(sliced_w2(a, b, 32, 7).value >= 0.0);
}

TEST_CASE("sliced W2 reduces exactly to 1d") {
  RngStream rng(41);
  Vec a1(500), b1(500);
  std::vector<Vec> a(500), b(500);
  for (int i = 0; i < 500; ++i) {
    a1[std::size_t(i)] = rng.normal();
    b1[std::size_t(i)] = 1.0 + rng.normal();
    a[std::size_t(i)] = {a1[std::size_t(i)]};
    b[std::size_t(i)] = {b1[std::size_t(i)]};
  }
  CHECK(sliced_w2(a, b, 16, 3).value ==
        doctest::Approx(w2_empirical_1d(a1, b1).value).epsilon(1e-13));
  CHECK(sliced_w2(a, a, 16, 3).value == 0.0);
}

TEST_CASE("sliced W2 captures mean separation as ||dmu||^2/d") {
  const int d = 4, n = 20000;
  RngStream rng(47);
  std::vector<Vec> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[std::size_t(i)] = rng.normal_vec(d);
    b[std::size_t(i)] = rng.normal_vec(d);
    b[std::size_t(i)][0] += 1.0;
  }
  const auto est = sliced_w2(a, b, 512, 11);
  CHECK(est.value * est.value == doctest::Approx(1.0 / double(d)).epsilon(0.10));
}

TEST_CASE("tv histogram against the matching density") {
  RngStream rng(53);
  Vec xs(100000);
  for (auto& x : xs) x = rng.normal();
  const auto tv =
      tv_histogram_1d(xs, [](double x) { return normal_pdf(x, 0.0, 1.0); }, 64);
  CHECK(tv.value <= 0.03);
}

TEST_CASE("tv histogram between unit Gaussians one apart") {
  RngStream rng(59);
  Vec xs(100000);
  for (auto& x : xs) x = rng.normal();
  const auto tv = tv_histogram_1d(
      xs, [](double x) { return normal_pdf(x, 1.0, 1.0); }, 64, -5.0, 7.0);
  const double analytic = 2.0 * normal_cdf(0.5) - 1.0;  // 0.3829
  CHECK(tv.value == doctest::Approx(analytic).epsilon(0.06));
  CHECK(std::abs(tv.value - analytic) < 0.02);
}

TEST_CASE("tv histogram with disjoint masses is about 1") {
  RngStream rng(61);
  Vec xs(10000);
  for (auto& x : xs) x = 100.0 + rng.normal();
  const auto tv = tv_histogram_1d(
      xs, [](double x) { return normal_pdf(x, 0.0, 1.0); }, 64, -6.0, 6.0);
  CHECK(tv.value >= 0.98);
  CHECK(tv.value <= 1.0);
}

TEST_CASE("tv histogram rejects unnormalized densities") {
  RngStream rng(67);
  Vec xs(1000);
  for (auto& x : xs) x = rng.normal();
  CHECK_THROWS_AS(tv_histogram_1d(
                      xs, [](double x) { return 2.0 * normal_pdf(x, 0.0, 1.0); }, 64,
                      -8.0, 8.0),
                  InputError);
}

TEST_CASE("bootstrap intervals cover the point estimate") {
  RngStream rng(71);
  Vec a(400), b(400);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = 0.3 + rng.normal();
  const auto est1 = w2_empirical_1d(a, b, 200, 5);
  REQUIRE(est1.has_ci);
  CHECK(est1.ci_lo <= est1.value);
  CHECK(est1.ci_hi >= est1.value);

  std::vector<Vec> av(100), bv(100);
  for (int i = 0; i < 100; ++i) {
    av[std::size_t(i)] = rng.normal_vec(2);
    bv[std::size_t(i)] = rng.normal_vec(2);
  }
  const auto est2 = w2_empirical_assignment(av, bv, 100, 200, 5);
  REQUIRE(est2.has_ci);
  CHECK(est2.ci_lo <= est2.value);
  CHECK(est2.ci_hi >= est2.value);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(sliced_w2({{1.0}}, {{1.0}}, 8, 1), InputError);  // too few directions
  CHECK_THROWS_AS(w2_empirical_assignment({{1.0}}, {{1.0, 2.0}}), InputError);
  RngStream rng(1);
  Vec xs(100);
  for (auto& x : xs) x = rng.normal();
  CHECK_THROWS_AS(tv_histogram_1d(xs, [](double) { return 1.0; }, 8, 0.0, 1.0),
                  InputError);  // too few bins
}

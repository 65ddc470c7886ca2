// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lrtf/numeric.hpp"
#include "oracles.hpp"

using namespace lrtf;

TEST_CASE("lstsq_pinv solves identity and averaging systems") {
  Matrix eye(3, 3);
  for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
  const std::vector<double> b{1, 2, 3};
  const auto x = lstsq_pinv(eye, b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == Catch::Approx(b[i]).margin(1e-12));

  // Overdetermined column of ones: the solution is the mean of the rhs.
  const Matrix ones(2, 1, {1.0, 1.0});
  const auto mean = lstsq_pinv(ones, std::vector<double>{1.0, 3.0});
  REQUIRE(mean.size() == 1);
  CHECK(mean[0] == Catch::Approx(2.0).margin(1e-12));

  // All-zero system: the minimum-norm solution is zero.
  const auto z = lstsq_pinv(Matrix(2, 2), std::vector<double>{1.0, 1.0});
  CHECK(z == std::vector<double>{0.0, 0.0});

  CHECK_THROWS_AS(lstsq_pinv(Matrix(0, 0), std::vector<double>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lstsq_pinv(Matrix(2, 2), std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("lstsq_pinv residual is locally optimal") {
  Rng rng(2024);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t m = 8, n = 4;
    Matrix a(m, n);
    for (double& v : a.data()) v = rng.standard_normal();
    std::vector<double> b(m);
    for (double& v : b) v = rng.standard_normal();
    const auto x = lstsq_pinv(a, b);

    const auto residual = [&](const std::vector<double>& sol) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double r = -b[i];
        for (std::size_t j = 0; j < n; ++j) r += a(i, j) * sol[j];
        s += r * r;
      }
      return std::sqrt(s);
    };
    const double base = residual(x);
    for (int p = 0; p < 1000; ++p) {
      std::vector<double> perturbed = x;
      for (double& v : perturbed) v += 1e-3 * rng.standard_normal();
      CHECK(residual(perturbed) >= base - 1e-10);
    }
  }
}

TEST_CASE("scalar_wls closed form, fallback and masking") {
  const std::vector<double> w{1, 1}, e{2, 4}, d{1, 2};
  CHECK(scalar_wls(w, e, d, 0.0) == Catch::Approx(2.0).margin(1e-12));
  CHECK(scalar_wls(w, e, d, 0.0) ==
        Catch::Approx(oracles::scalar_wls_bruteforce(w, e, d)).margin(1e-8));

  CHECK(scalar_wls(std::vector<double>{1, 1}, std::vector<double>{5, 6},
                   std::vector<double>{0, 0}, 7.0) == 7.0);

  CHECK(scalar_wls(std::vector<double>{1, 0}, std::vector<double>{5, 999},
                   std::vector<double>{1, 1}, 0.0) == Catch::Approx(5.0).margin(1e-12));

  CHECK_THROWS_AS(scalar_wls(std::vector<double>{1}, std::vector<double>{1, 2},
                             std::vector<double>{1, 2}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("scalar_wls matches brute-force minimization on random instances") {
  Rng rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rng.uniform_index(8);
    std::vector<double> w(n), e(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::abs(rng.standard_normal()) + 0.1;
      e[i] = 3.0 * rng.standard_normal();
      d[i] = rng.standard_normal();
    }
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) den += w[i] * w[i] * d[i] * d[i];
    if (den < 1e-6) continue;  // keep instances non-degenerate
    const double got = scalar_wls(w, e, d, 0.0);
    const double want = oracles::scalar_wls_bruteforce(w, e, d);
    CHECK(got == Catch::Approx(want).margin(1e-8));
  }
}

TEST_CASE("log_gauss_pdf values and symmetry") {
  const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
  CHECK(log_gauss_pdf(0.7, 0.7, inv2pi) == Catch::Approx(0.0).margin(1e-14));
  CHECK(log_gauss_pdf(1.3, 1.0, 0.5) ==
        Catch::Approx(log_gauss_pdf(0.7, 1.0, 0.5)).margin(1e-14));
  CHECK(log_gauss_pdf(1.0, 0.0, 1.0) ==
        Catch::Approx(-0.5 * std::log(2.0 * std::numbers::pi) - 0.5).margin(1e-14));
  CHECK_THROWS_AS(log_gauss_pdf(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(log_gauss_pdf(0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("exp(log_gauss_pdf) integrates to 1") {
  const double mu = 0.4, sigma2 = 2.3;
  const double sigma = std::sqrt(sigma2);
  const std::size_t steps = 200000;
  const double lo = mu - 10.0 * sigma, hi = mu + 10.0 * sigma;
  const double h = (hi - lo) / static_cast<double>(steps);
  double integral = 0.5 * (std::exp(log_gauss_pdf(lo, mu, sigma2)) +
                           std::exp(log_gauss_pdf(hi, mu, sigma2)));
  for (std::size_t s = 1; s < steps; ++s)
    integral += std::exp(log_gauss_pdf(lo + h * static_cast<double>(s), mu, sigma2));
  integral *= h;
  CHECK(integral == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("sample_gaussian determinism and statistics") {
  Rng a(123), b(123);
  const auto va = sample_gaussian(a, 1.0, 2.0, 100);
  const auto vb = sample_gaussian(b, 1.0, 2.0, 100);
  CHECK(va == vb);

  Rng c(5);
  const auto constant = sample_gaussian(c, 3.5, 0.0, 10);
  for (double v : constant) CHECK(v == 3.5);

  Rng d(7);
  const auto big = sample_gaussian(d, 0.0, 0.1, 100000);
  double mean = 0.0;
  for (double v : big) mean += v;
  mean /= static_cast<double>(big.size());
  double var = 0.0;
  for (double v : big) var += (v - mean) * (v - mean);
  var /= static_cast<double>(big.size());
  CHECK(var == Catch::Approx(0.1).epsilon(0.05));
}

TEST_CASE("sample_uniform determinism, bounds and statistics") {
  Rng a(9), b(9);
  CHECK(sample_uniform(a, -5, 5, 64) == sample_uniform(b, -5, 5, 64));

  Rng c(1);
  for (double v : sample_uniform(c, 2.5, 2.5, 10)) CHECK(v == 2.5);

  Rng d(77);
  const auto big = sample_uniform(d, -5, 5, 100000);
  double mean = 0.0;
  for (double v : big) {
    CHECK(v >= -5.0);
    CHECK(v <= 5.0);
    mean += v;
  }
  mean /= static_cast<double>(big.size());
  CHECK(std::abs(mean) < 0.1);

  Rng e(3);
  CHECK_THROWS_AS(e.uniform(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("rng split gives reproducible independent streams") {
  const Rng base(42);
  Rng s1 = base.split(1);
  Rng s1again = base.split(1);
  Rng s2 = base.split(2);
  const auto a = sample_uniform(s1, 0, 1, 16);
  const auto b = sample_uniform(s1again, 0, 1, 16);
  const auto c = sample_uniform(s2, 0, 1, 16);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(derive_seed(42, 1) == derive_seed(42, 1));
  CHECK(derive_seed(42, 1) != derive_seed(42, 2));
}

TEST_CASE("uniform_index stays in range and is deterministic") {
  Rng a(8), b(8);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t i = a.uniform_index(7);
    CHECK(i < 7);
    CHECK(i == b.uniform_index(7));
  }
}

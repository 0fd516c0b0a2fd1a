#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "quad_util.hpp"
#include "rmt/biorth.hpp"

using namespace rmt;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("bimoment examples") {
  CHECK(std::exp(bimoment_log(0, 0, 1, {0.0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::exp(bimoment_log(1, 0, 1, {0.0})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::exp(bimoment_log(0, 1, 2, {0.0, 0.5})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(bimoment_log(0, 0, 2, {0.0}), DimensionMismatch);
}

TEST_CASE("bimoment determinant matches the closed form") {
  for (const auto& [M, nu] : std::vector<std::pair<int, std::vector<double>>>{
           {1, {0.0}}, {1, {1.5}}, {2, {0.0, 0.0}}, {2, {0.0, 0.5}}, {3, {0.5, 1.0, 2.0}}}) {
    for (int m = 0; m <= 5; ++m) {
      const BimomentMatrix b = BimomentMatrix::build(m, M, nu);
      const DetResult d = b.determinant();
      CHECK(d.sign == 1);
      CHECK(std::abs(std::expm1(d.log_abs - b.log_det_closed_form())) < 1e-10);
    }
  }
}

TEST_CASE("moments of the weights match the bimoments") {
  for (const auto& [M, nu] : std::vector<std::pair<int, std::vector<double>>>{{1, {0.0}}, {2, {0.0, 0.5}}}) {
    for (int l = 0; l <= 3; ++l) {
      const Weight g = g_elementary(l, M, nu, Parity::even);
      for (int k = 0; k <= 3; ++k) {
        const double q = testutil::integrate([&](double u) { return 2.0 * u * std::pow(u, 4 * k) * g(u * u).value; },
                                             0.0, kInf, {1.0, 4.0}, 1e-10);
        CHECK(q == doctest::Approx(std::exp(bimoment_log(k, l, M, nu))).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("p_n examples and representations") {
  CHECK(p_n(0.7, 0, 1, {0.0}) == 1.0);
  for (double x : {0.3, 1.0, 2.5}) CHECK(p_n(x, 1, 1, {0.0}) == doctest::Approx(x * x - 2.0).epsilon(1e-15));
  const double orth = testutil::integrate([](double x) { return (x * x - 2.0) * std::exp(-x); }, 0.0, kInf);
  CHECK(std::abs(orth) < 1e-10);
  for (double x : {0.5, 1.0, 2.0}) {
    const double s = p_n(x, 2, 1, {0.0});
    CHECK(std::abs(s - p_n_hypergeometric(x, 2, 1, {0.0})) <= 1e-12 * std::abs(s));
  }
  for (const auto& [M, nu] : std::vector<std::pair<int, std::vector<double>>>{
           {1, {0.0}}, {2, {0.0, 0.0}}, {2, {0.0, 0.5}}, {3, {0.5, 1.0, 0.0}}}) {
    for (int n = 0; n <= 5; ++n) {
      const std::vector<double> c = p_n_coefficients(n, M, nu);
      CHECK(c.size() == static_cast<std::size_t>(n + 1));
      CHECK(c.back() == 1.0);
      for (double x : {0.5, 1.0, 2.0, 3.7}) {
        const double s = p_n(x, n, M, nu);
        CHECK(p_n(-x, n, M, nu) == s);
        // Relative to the size of the terms, since the sums alternate.
        double scale = 0.0;
        for (int k = 0; k <= n; ++k) scale += std::abs(c[k]) * std::pow(x, 2 * k);
        CHECK(std::abs(s - p_n_hypergeometric(x, n, M, nu)) <= 1e-12 * scale);
        CHECK(std::abs(s - p_n_meijer(x, n, M, nu)) <= 1e-12 * scale);
        CHECK(p_n_monic(x, n, M, nu) == s);
      }
    }
  }
}

TEST_CASE("p_n is orthogonal to the lower weights") {
  const std::vector<double> nu{0.0, 0.5};
  for (int n = 1; n <= 3; ++n) {
    const std::vector<double> c = p_n_coefficients(n, 2, nu);
    for (int l = 0; l < n; ++l) {
      double acc = 0.0, scale = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double t = c[k] * std::exp(bimoment_log(k, l, 2, nu));
        acc += t;
        scale += std::abs(t);
      }
      CHECK(std::abs(acc) < 1e-13 * scale);
    }
  }
}

TEST_CASE("phi_n examples") {
  for (double x : {0.2, 1.0, 3.0}) {
    CHECK(phi_n(x, 0, 1, {0.0}).value == doctest::Approx(std::exp(-x)).epsilon(1e-13));
    CHECK(phi_n_mellin_barnes(x, 0, 1, {0.0}).value == doctest::Approx(std::exp(-x)).epsilon(1e-10));
  }
  for (double x : {0.5, 1.0, 2.0}) {
    const double s = phi_n_solve(x, 1, 1, {0.0}).value;
    const double mb = phi_n_mellin_barnes(x, 1, 1, {0.0}).value;
    CHECK(std::abs(s - mb) < 1e-6);
    CHECK(s == doctest::Approx((x - 1.0) * std::exp(-x) / 4.0).epsilon(1e-13));
  }
  const double orth = testutil::integrate([](double x) { return p_n(x, 1, 1, {0.0}) * phi_n(x, 0, 1, {0.0}).value; },
                                          0.0, kInf);
  CHECK(std::abs(orth) < 1e-8);
  CHECK_THROWS_AS(phi_n(0.0, 1, 1, {0.0}), InvalidParams);
}

TEST_CASE("phi_n paths agree for deeper products") {
  for (const auto& nu : std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, 0.5}}) {
    for (int n = 0; n <= 4; ++n) {
      for (double x : {0.1, 1.0, 5.0, 20.0}) CHECK_NOTHROW(phi_n(x, n, 2, nu));
    }
  }
}

TEST_CASE("biorthogonality matrix is the identity") {
  for (const auto& [M, nu] : std::vector<std::pair<int, std::vector<double>>>{
           {1, {0.0}}, {2, {0.0, 0.0}}, {2, {0.0, 0.5}}}) {
    const BiorthCheck r = biorth_check(4, M, nu);
    INFO("M = ", M, ", nu_2 = ", nu.back());
    CHECK(r.exact_max_dev < 1e-12);
    CHECK(r.quadrature_consistent);
    // Double-precision quadrature reaches 1e-6 only where the integrands are small.
    if (M == 1) CHECK(r.quadrature_max_dev < 1e-6);
    CHECK(r.quadrature_max_dev < 1e-4);
    // The top-left block involves no large cancellation.
    CHECK((r.quadrature.topLeftCorner(3, 3) - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(r.solve_vs_contour_max_diff < 1e-6);
  }
}

TEST_CASE("complex product pair") {
  for (double x : {0.0, 0.5, 1.0, 3.0}) {
    CHECK(pq_complex(1, 1, {0.0}, x).P == doctest::Approx(x - 1.0).epsilon(1e-14));
    CHECK(P_n_literal(1, 1, {0.0}, x) == doctest::Approx(1.0 - x).epsilon(1e-14));
  }
  for (double x : {0.5, 1.0, 3.0}) {
    CHECK(pq_complex(0, 1, {0.0}, x).Q.value == doctest::Approx(std::exp(-x)).epsilon(1e-10));
    CHECK(pq_complex(1, 1, {0.0}, x).Q.value == doctest::Approx((x - 1.0) * std::exp(-x)).epsilon(1e-10));
  }
  auto pair_integral = [](int j, int k, int K, const std::vector<double>& nu) {
    return testutil::integrate(
        [&](double u) {
          const double x = u * u;
          return x > 0.0 ? 2.0 * u * pq_complex(j, K, nu, x).P * pq_complex(k, K, nu, x).Q.value : 0.0;
        },
        0.0, kInf, {1.0, 3.0}, 1e-10);
  };
  CHECK(std::abs(pair_integral(1, 0, 1, {0.0})) < 1e-8);
  CHECK(pair_integral(1, 1, 1, {0.0}) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(pair_integral(1, 0, 2, {0.0, 0.5})) < 1e-8);
  CHECK(pair_integral(2, 2, 2, {0.0, 0.5}) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(pair_integral(2, 1, 2, {0.0, 0.5})) < 1e-7);
}

TEST_CASE("p_n becomes P_n under x = lambda^2 / 4^M") {
  for (const auto& [M, nu] : std::vector<std::pair<int, std::vector<double>>>{
           {1, {0.0}}, {2, {0.0, 0.5}}, {3, {0.0, 0.5, 1.0}}}) {
    // Interlaced list nu_1, nu_1 - 1/2, ..., with K = 2M complex factors.
    std::vector<double> complex_nu;
    for (double v : nu) {
      complex_nu.push_back(v);
      complex_nu.push_back(v - 0.5);
    }
    const int K = 2 * M;
    for (int n = 0; n <= 4; ++n) {
      for (double lam : {0.3, 1.0, 2.2, 4.0}) {
        const double x = lam * lam / std::pow(4.0, M);
        const double lhs = p_n(lam, n, M, nu);
        const double rhs = std::pow(4.0, n * M) * pq_complex(n, K, complex_nu, x).P;
        const std::vector<double> c = p_n_coefficients(n, M, nu);
        double scale = 0.0;
        for (int k = 0; k <= n; ++k) scale += std::abs(c[k]) * std::pow(lam, 2 * k);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * scale);
      }
    }
  }
}

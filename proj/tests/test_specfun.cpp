#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "rmt/sampler.hpp"
#include "rmt/specfun.hpp"

using namespace rmt;

namespace {
constexpr double kPi = 3.14159265358979323846;

// G^{q,0} decays like exp(-q x^{1/q}); integrate to where that is below e^{-70}.
double upper_log(std::size_t q) { return q * std::log(70.0 / q + 2.0); }

double bessel_k(double order, double x) { return boost::math::cyl_bessel_k(order, x); }

// int_0^inf f(x) dx by substitution x = e^u and Gauss-Kronrod on u.
template <class F>
double integrate_positive(F f, double lo = -40.0, double hi = 8.0) {
  auto g = [&](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, lo, hi, 12, 1e-13);
}
}  // namespace

TEST_CASE("complex log-gamma identities") {
  for (double y : {0.0, 0.3, 2.0, 15.0, 60.0}) {
    const auto l = log_gamma(std::complex<double>(0.5, y));
    CHECK(2.0 * l.real() == doctest::Approx(std::log(kPi / std::cosh(kPi * y))).epsilon(1e-13));
  }
  for (double y : {0.4, 3.0, 25.0}) {
    const auto l = log_gamma(std::complex<double>(1.0, y));
    CHECK(2.0 * l.real() == doctest::Approx(std::log(kPi * y / std::sinh(kPi * y))).epsilon(1e-13));
  }
  for (double x : {0.7, 3.5, 40.0}) CHECK(log_gamma(std::complex<double>(x, 0.0)).real() ==
                                          doctest::Approx(std::lgamma(x)).epsilon(1e-14));
  // Reflection branch: Gamma(z+1) = z Gamma(z).
  const std::complex<double> z(-3.3, 2.0);
  CHECK(std::abs(std::exp(log_gamma(z + 1.0) - log_gamma(z)) - z) < 1e-12);
}

TEST_CASE("Pochhammer and terminating hypergeometric sums") {
  int sign = 0;
  CHECK(std::exp(log_pochhammer(0.5, 3, &sign)) == doctest::Approx(0.5 * 1.5 * 2.5));
  CHECK(sign == 1);
  CHECK(std::exp(log_pochhammer(-2.5, 2, &sign)) == doctest::Approx(2.5 * 1.5));
  CHECK(sign == 1);
  log_pochhammer(-2.0, 4, &sign);
  CHECK(sign == 0);

  CHECK(hyp_1Fq_terminating(0, {2.0, 3.0}, 7.0) == 1.0);
  CHECK(hyp_1Fq_terminating(1, {1.0}, 1.0) == doctest::Approx(0.0));
  for (double z : {-1.5, 0.3, 2.0, 9.0}) {
    // Direct term-by-term evaluation, n = 2, b = (1, 1/2).
    const double direct = 1.0 + (-2.0) / (1.0 * 0.5) * z + (-2.0 * -1.0) / (1.0 * 2.0 * 0.5 * 1.5) * z * z / 2.0;
    CHECK(hyp_1Fq_terminating(2, {1.0, 0.5}, z) == doctest::Approx(direct).epsilon(1e-14));
  }
  CHECK_THROWS_AS(hyp_1Fq_terminating(2, {-1.0}, 1.0), InvalidParams);
}

TEST_CASE("Meijer G basic values") {
  CHECK(meijer_g_q0({0.0}, 1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  for (double x : {1e-6, 0.01, 0.5, 1.0, 3.0, 20.0, 1e3}) {
    CHECK(std::abs(meijer_g_q0({0.0}, x).value - std::exp(-x)) < 1e-12);
    const Estimate c = meijer_g_q0_contour({0.0}, x);
    CHECK(std::abs(c.value - std::exp(-x)) < 1e-12);
    CHECK(c.err < 1e-8);
  }
  const Estimate k0 = meijer_g_q0({0.0, 0.0}, 1.0);
  CHECK(k0.value == doctest::Approx(2.0 * bessel_k(0, 2.0)).epsilon(1e-12));
  CHECK(k0.value == doctest::Approx(0.227784).epsilon(1e-5));
  // Oracle: numeric convolution int e^{-t} e^{-x/t} t^{-1} dt.
  const double conv = integrate_positive([](double t) { return std::exp(-t - 1.0 / t) / t; });
  CHECK(k0.value == doctest::Approx(conv).epsilon(1e-10));
  for (double x : {1e-6, 0.2, 7.0, 300.0, 1e3}) {
    const Estimate g = meijer_g_q0({0.3, 1.3}, x);
    const double exact = 2.0 * std::pow(x, 0.8) * bessel_k(1.0, 2.0 * std::sqrt(x));
    CHECK(std::abs(g.value - exact) < 1e-8);
    CHECK(std::abs(g.value - exact) <= std::max(10.0 * g.err, 1e-14 * exact));
  }
  MeijerGSpec spec{{0.0, 0.0}, {}, Orientation::reciprocal_argument};
  CHECK(meijer_g_q0(spec, 2.0).value == doctest::Approx(meijer_g_q0({0.0, 0.0}, 0.5).value));
}

TEST_CASE("G^{3,0} agrees with a Gamma-product Monte Carlo histogram") {
  // Shapes 1/2, 1, 3/2 have density G(x | -1/2, 0, 1/2) / (Gamma(1/2) Gamma(1) Gamma(3/2)).
  const std::vector<double> b{-0.5, 0.0, 0.5};
  const double norm = std::tgamma(0.5) * std::tgamma(1.0) * std::tgamma(1.5);
  const double lo = 0.7, hi = 0.8;
  const double prob = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
                          [&](double x) { return meijer_g_q0(b, x).value; }, lo, hi) / norm;
  const std::size_t n = 400000;
  const auto draws = mc_collect(n, RngStream(21, 0), [](RngStream& r) {
    return sample_gamma_product({0.5, 1.0, 1.5}, r);
  });
  double hits = 0.0;
  for (double v : draws) hits += (v >= lo && v < hi);
  const double p_hat = hits / n;
  const double se = std::sqrt(prob * (1 - prob) / n);
  CHECK(std::abs(p_hat - prob) < 4.0 * se);
  // Pointwise value at 0.75, for reference against the bin average.
  CHECK(meijer_g_q0(b, 0.75).value / norm == doctest::Approx(prob / (hi - lo)).epsilon(2e-3));
}

TEST_CASE("Meijer G normalisation and Mellin moments") {
  const std::vector<std::vector<double>> cases{
      {0.0}, {0.0, 0.5}, {-0.25, 1.0, 2.0}, {0.0, 0.5, 1.0, 1.5}, {-0.4, 0.2, 0.9, 1.7, 3.0}};
  for (const auto& b : cases) {
    for (double s : {1.0, 1.5, 2.0}) {
      const double numeric = integrate_positive(
          [&](double x) { return std::pow(x, s - 1.0) * meijer_g_q0_contour(b, x).value; }, -40.0,
          upper_log(b.size()));
      double exact = 1.0;
      for (double bi : b) exact *= std::tgamma(bi + s);
      CHECK(numeric == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}

TEST_CASE("Meijer G with a polynomial factor and terminating variants") {
  // G^{1,1}_{1,2}(-n ; b, 0 | x) = (1-u)_n Gamma(b+u) inversion; n = 0 gives x^b e^{-x}.
  for (double x : {0.3, 2.0}) {
    CHECK(meijer_g_q1(0, {0.5}, x).value == doctest::Approx(std::pow(x, 0.5) * std::exp(-x)).epsilon(1e-12));
    // n = 1: (1-u) Gamma(u) x^{-u} inverts to e^{-x}(1 - x) + ... ; direct: (1-u)Gamma(u) =
    // Gamma(u) - u Gamma(u) = Gamma(u) - Gamma(u+1)  ->  e^{-x} - x e^{-x}.
    CHECK(meijer_g_q1(1, {0.0}, x).value == doctest::Approx((1.0 - x) * std::exp(-x)).epsilon(1e-12));
  }
  // G^{1,0}_{1,2}(n+1; 0, -nu | x) relates to Laguerre: n = 1, nu = 0 gives (1 - x)/(1! 1!) with x^k/Gamma(1+k).
  for (double x : {0.0, 0.5, 3.0}) {
    CHECK(meijer_g_10_terminating(1, {0.0}, x) == doctest::Approx(1.0 - x));
    CHECK(meijer_g_01_terminating(1, {0.0}, x) == doctest::Approx(x - 1.0));
  }
}

TEST_CASE("recursion step") {
  Weight base = [](double l) -> Estimate { return {std::exp(-l), 1e-16}; };
  const Weight step = g_recursion_step(base, 0.5, Parity::even);
  for (double x : {0.05, 0.5, 1.0, 4.0, 10.0}) {
    const double exact = 2.0 * std::sqrt(x) * bessel_k(1.0, 2.0 * std::sqrt(x));
    CHECK(step(x).value == doctest::Approx(exact).epsilon(1e-10));
    // The elementary closed form with nu = (0, 1/2), j = 0 has bottom parameters (1, 0).
    CHECK(step(x).value == doctest::Approx(g_elementary(0, 2, {0.0, 0.5})(x).value).epsilon(1e-9));
  }
  Weight scaled = [](double l) -> Estimate { return {3.5 * std::exp(-l), 1e-16}; };
  const Weight step3 = g_recursion_step(scaled, 0.5, Parity::even);
  for (double x : {0.3, 2.0}) CHECK(step3(x).value == doctest::Approx(3.5 * step(x).value).epsilon(1e-12));
}

TEST_CASE("elementary weights") {
  for (double x : {0.1, 1.0, 5.0}) {
    CHECK(g_elementary(0, 1, {0.0})(x).value == doctest::Approx(std::exp(-x)).epsilon(1e-15));
    CHECK(g_elementary(1, 1, {0.0})(x).value == doctest::Approx(x * std::exp(-x)).epsilon(1e-15));
    CHECK(g_elementary(1, 2, {0.0, 0.0})(x).value ==
          doctest::Approx(meijer_g_q0({0.0, 1.0}, x).value).epsilon(1e-15));
  }
  CHECK(g_elementary_params(2, {0.0, 0.5, 1.0}, Parity::even) == std::vector<double>{2.0, 1.0, 2.0});
  CHECK(g_elementary_params(2, {0.0, 0.5, 1.0}, Parity::odd) == std::vector<double>{3.0, 2.0, 3.0});
}

TEST_CASE("recursion and closed form agree for M <= 3") {
  const std::vector<std::vector<double>> nus{{0.0, 0.5}, {0.0, 1.0}, {0.5, 1.0}, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.5}};
  for (Parity p : {Parity::even, Parity::odd}) {
    for (const auto& nu : nus) {
      const int M = static_cast<int>(nu.size());
      for (int j : {0, 1}) {
        Weight w = g_elementary(j, 1, {nu[0]}, p);
        for (int s = 1; s < M; ++s) w = g_recursion_step(w, nu[s], p);
        const Weight closed = g_elementary(j, M, nu, p);
        for (double x : {0.01, 0.1, 1.0, 3.0, 10.0})
          CHECK(std::abs(w(x).value - closed(x).value) < 1e-6);
      }
    }
  }
}

TEST_CASE("Gaussian-initial weights") {
  // M = 1, nu = 0, j = 0: prefactor 1/(2 sqrt(pi)) times G^{3,0}(lambda^2/4 | 0, 1/2, 0).
  const Weight g = g_gauss(0, 1, {0.0});
  CHECK(g_gauss_params(0, {0.0}, Parity::even) == std::vector<double>{0.0, 0.5, 0.0});
  CHECK(g_gauss_prefactor({0.0}, Parity::even) == doctest::Approx(0.5 / std::sqrt(kPi)));
  for (double x : {0.2, 1.0, 3.0})
    CHECK(g(x).value == doctest::Approx(0.5 / std::sqrt(kPi) * meijer_g_q0({0.0, 0.5, 0.0}, x * x / 4).value));
  // Independent oracle: one recursion step from the initial weight e^{-b^2}.
  for (Parity p : {Parity::even, Parity::odd}) {
    for (const std::vector<double>& nu : {std::vector<double>{0.0}, std::vector<double>{0.5}, std::vector<double>{1.0}}) {
      for (int j : {0, 2}) {
        const Weight direct = g_recursion_step(g_gauss(j, 0, {}, p), nu[0], p);
        const Weight closed = g_gauss(j, 1, nu, p);
        for (double x : {0.1, 0.7, 2.5})
          CHECK(closed(x).value == doctest::Approx(direct(x).value).epsilon(1e-9));
      }
    }
  }
  // Moments: int lambda^{2k} g_0(lambda) = 1/2 Gamma(k + 1/2) Gamma(2k + 1).
  for (int k : {0, 1, 2}) {
    const double numeric =
        integrate_positive([&](double x) { return std::pow(x, 2 * k) * g(x).value; }, -40.0, std::log(200.0));
    CHECK(numeric == doctest::Approx(0.5 * std::tgamma(k + 0.5) * std::tgamma(2.0 * k + 1)).epsilon(1e-6));
  }
}

TEST_CASE("oscillatory kernel") {
  for (double a : {0.5, 1.0, 2.0}) {
    const Weight even = gk_integral(a, {1.0}, 0.0, Parity::even);
    const Weight odd = gk_integral(a, {1.0}, 0.0, Parity::odd);
    for (double l : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double ce = 0.5 * (std::exp(-(l + a)) + std::exp(-std::abs(l - a)));
      const double co = 0.5 * (std::exp(-std::abs(l - a)) - std::exp(-(l + a)));
      CHECK(std::abs(even(l).value - ce) < 1e-7);
      CHECK(std::abs(odd(l).value - co) < 1e-7);
      CHECK(even(-l).value == doctest::Approx(even(l).value).epsilon(1e-12));
      CHECK(odd(-l).value == doctest::Approx(-odd(l).value).epsilon(1e-12));
    }
  }
  // a -> 0: the cosine transform of 1/(1+c^2).
  const Weight zero = gk_integral(1e-12, {1.0}, 0.0, Parity::even);
  for (double l : {0.2, 1.5, 4.0}) CHECK(std::abs(zero(l).value - std::exp(-l)) < 1e-8);
  // Pure Gaussian damping with scale b = 2 and t = 0.5 together, against the Gaussian-only limit.
  const Weight gauss = gk_integral(1.0, {}, 1.0, Parity::even);
  for (double l : {0.3, 2.0}) {
    const double exact = (std::exp(-0.5 * (1 - l) * (1 - l)) + std::exp(-0.5 * (1 + l) * (1 + l))) /
                         std::sqrt(2 * kPi);
    CHECK(std::abs(gauss(l).value - exact) < 1e-10);
  }
  // Two rational factors: partial fractions give an exact transform.
  const double b1 = 0.5, b2 = 2.0;
  const Weight two = gk_integral(1.0, {b1, b2}, 0.0, Parity::even);
  auto f_exact = [&](double w) {
    // 1/((1+b1^2c^2)(1+b2^2c^2)) = [b2^2/(1+b2^2c^2) - b1^2/(1+b1^2c^2)]/(b2^2-b1^2).
    w = std::abs(w);
    return (b2 * b2 * kPi / (2 * b2) * std::exp(-w / b2) - b1 * b1 * kPi / (2 * b1) * std::exp(-w / b1)) /
           (b2 * b2 - b1 * b1);
  };
  for (double l : {0.4, 1.0, 3.0})
    CHECK(std::abs(two(l).value - (f_exact(1 - l) + f_exact(1 + l)) / kPi) < 1e-9);
  CHECK_THROWS_AS(gk_integral(1.0, {}, 0.0, Parity::even), NonIntegrable);
}

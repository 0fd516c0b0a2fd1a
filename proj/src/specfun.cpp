#include "rmt/specfun.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <math.h>

namespace rmt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLogPi = 1.14472988584940017414;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

// Stirling series for log Gamma(z), |z| >= 15.
std::complex<double> stirling(std::complex<double> z) {
  static const double bern[] = {1.0 / 12.0,        -1.0 / 360.0,       1.0 / 1260.0,
                                -1.0 / 1680.0,     1.0 / 1188.0,       -691.0 / 360360.0,
                                1.0 / 156.0,       -3617.0 / 122400.0};
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series = 0.0;
  std::complex<double> power = inv;
  for (double c : bern) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}
}  // namespace

double log_gamma(double x, int* sign) {
  int s = 1;
  const double v = ::lgamma_r(x, &s);
  if (sign) *sign = s;
  return v;
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection; log sin(pi z) is evaluated without overflow for large |Im z|.
    const std::complex<double> iu(0.0, 1.0);
    std::complex<double> log_sin;
    if (z.imag() >= 0.0) {
      const std::complex<double> w = std::exp(2.0 * iu * kPi * z);
      log_sin = -iu * kPi * z + std::log(1.0 - w) - std::log(-2.0 * iu);
    } else {
      const std::complex<double> w = std::exp(-2.0 * iu * kPi * z);
      log_sin = iu * kPi * z + std::log(1.0 - w) - std::log(2.0 * iu);
    }
    return kLogPi - log_sin - log_gamma(1.0 - z);
  }
  std::complex<double> shift_log = 0.0;
  std::complex<double> product = 1.0;
  int factors = 0;
  while (std::abs(z) < 15.0) {
    product *= z;
    z += 1.0;
    if (++factors == 8) {
      shift_log += std::log(product);
      product = 1.0;
      factors = 0;
    }
  }
  shift_log += std::log(product);
  return stirling(z) - shift_log;
}

double log_pochhammer(double a, int k, int* sign) {
  if (k == 0) {
    if (sign) *sign = 1;
    return 0.0;
  }
  const double nearest = std::round(a);
  if (a <= 0.0 && nearest == a) {
    // (a)_k with a a nonpositive integer: finite product, possibly zero.
    int s = 1;
    double acc = 0.0;
    for (int i = 0; i < k; ++i) {
      const double f = a + i;
      if (f == 0.0) {
        if (sign) *sign = 0;
        return -std::numeric_limits<double>::infinity();
      }
      if (f < 0.0) s = -s;
      acc += std::log(std::abs(f));
    }
    if (sign) *sign = s;
    return acc;
  }
  int s1 = 1, s2 = 1;
  const double v = log_gamma(a + k, &s1) - log_gamma(a, &s2);
  if (sign) *sign = s1 * s2;
  return v;
}

double digamma(double x) { return boost::math::digamma(x); }

double hyp_1Fq_terminating(int n, const std::vector<double>& b, double z) {
  if (n < 0) throw InvalidParams("hyp_1Fq_terminating: n must be nonnegative");
  if (z == 0.0) return 1.0;
  double sum = 0.0;
  const double log_z = std::log(std::abs(z));
  for (int k = 0; k <= n; ++k) {
    int sign = (k % 2 == 0) ? 1 : -1;  // sign of (-n)_k
    double log_term = log_gamma(n + 1.0) - log_gamma(n - k + 1.0) - log_gamma(k + 1.0) + k * log_z;
    for (double bi : b) {
      int s = 1;
      const double lp = log_pochhammer(bi, k, &s);
      if (s == 0) throw InvalidParams("hyp_1Fq_terminating: lower parameter hits a pole");
      log_term -= lp;
      sign *= s;
    }
    if (z < 0.0 && k % 2 == 1) sign = -sign;
    sum += sign * std::exp(log_term);
  }
  return sum;
}

// ---- product-ensemble weights ----

Weight g_recursion_step(Weight prev, double nu_s, Parity parity) {
  const double alpha = 2.0 * nu_s - 1.0 + (parity == Parity::odd ? 1.0 : 0.0);
  // Substituting b = e^u turns the Mellin convolution into a smooth, doubly
  // exponentially decaying integrand on the real line.
  return [prev = std::move(prev), alpha](double lambda) -> Estimate {
    if (!(lambda > 0.0)) throw InvalidParams("g_recursion_step: lambda must be positive");
    const double u_hi = std::log(80.0 + 10.0 * std::max(alpha, 0.0));
    const double u_lo = -40.0;
    auto integrand = [&](double u, double* err) {
      const double b = std::exp(u);
      const Estimate inner = prev(lambda / b);
      const double w = std::exp(-b + (alpha + 1.0) * u);
      *err = w * inner.err;
      return w * inner.value;
    };
    double h = 0.1;
    std::vector<double> values, errs;
    int n = static_cast<int>(std::ceil((u_hi - u_lo) / h));
    if (n % 2 == 1) ++n;
    h = (u_hi - u_lo) / n;
    values.resize(n + 1);
    errs.resize(n + 1);
    for (int i = 0; i <= n; ++i) values[i] = integrand(u_lo + i * h, &errs[i]);
    double fine = 0.0, coarse = 0.0, propagated = 0.0;
    for (int i = 0; i <= n; ++i) {
      fine += values[i];
      propagated += errs[i];
      if (i % 2 == 0) coarse += values[i];
    }
    fine *= h;
    coarse *= 2.0 * h;
    propagated *= h;
    // The endpoints carry negligible weight, so the plain sums are trapezoid sums.
    const double disc = std::abs(fine - coarse);
    return {fine, disc + propagated + 1e-15 * std::abs(fine)};
  };
}

std::vector<double> g_elementary_params(int j, const std::vector<double>& nu, Parity parity) {
  const double shift = parity == Parity::odd ? 1.0 : 0.0;
  std::vector<double> b;
  for (std::size_t l = nu.size(); l-- > 1;) b.push_back(2.0 * nu[l] + shift);
  b.push_back(2.0 * nu[0] + j + shift);
  return b;
}

Weight g_elementary(int j, int M, const std::vector<double>& nu, Parity parity) {
  if (M < 1 || static_cast<int>(nu.size()) != M)
    throw InvalidParams("g_elementary: need M >= 1 and nu of length M");
  if (j < 0) throw InvalidParams("g_elementary: j must be nonnegative");
  const std::vector<double> b = g_elementary_params(j, nu, parity);
  if (M == 1) {
    const double power = b[0];
    return [power](double lambda) -> Estimate {
      if (!(lambda > 0.0)) throw InvalidParams("g_elementary: lambda must be positive");
      const double v = std::exp(power * std::log(lambda) - lambda);
      return {v, 4e-16 * v};
    };
  }
  return [b](double lambda) -> Estimate {
    if (!(lambda > 0.0)) throw InvalidParams("g_elementary: lambda must be positive");
    return meijer_g_q0(b, lambda);
  };
}

std::vector<double> g_gauss_params(int j, const std::vector<double>& nu, Parity parity) {
  const double shift = parity == Parity::odd ? 0.5 : 0.0;
  std::vector<double> b;
  for (double v : nu) {
    b.push_back(v + shift);
    b.push_back(v + shift + 0.5);
  }
  b.push_back(j + 2.0 * shift);
  return b;
}

double g_gauss_prefactor(const std::vector<double>& nu, Parity parity) {
  const double shift = parity == Parity::odd ? 0.5 : 0.0;
  double log_c = 0.0;
  for (double v : nu) log_c += (2.0 * (v + shift) - 1.0) * std::log(2.0) - 0.5 * kLogPi;
  return std::exp(log_c);
}

Weight g_gauss(int j, int M, const std::vector<double>& nu, Parity parity) {
  if (M < 0 || static_cast<int>(nu.size()) != M)
    throw InvalidParams("g_gauss: nu must have length M");
  if (j < 0) throw InvalidParams("g_gauss: j must be nonnegative");
  if (M == 0) {
    // Initial weights b^{2j} e^{-b^2} (even) and b^{2j+2} e^{-b^2} (odd).
    const double power = 2.0 * j + (parity == Parity::odd ? 2.0 : 0.0);
    return [power](double lambda) -> Estimate {
      if (!(lambda > 0.0)) throw InvalidParams("g_gauss: lambda must be positive");
      const double v = std::exp(power * std::log(lambda) - lambda * lambda);
      return {v, 4e-16 * v};
    };
  }
  const std::vector<double> b = g_gauss_params(j, nu, parity);
  const double prefactor = g_gauss_prefactor(nu, parity);
  const double scale = std::pow(4.0, -M);
  return [b, prefactor, scale](double lambda) -> Estimate {
    if (!(lambda > 0.0)) throw InvalidParams("g_gauss: lambda must be positive");
    const Estimate g = meijer_g_q0(b, lambda * lambda * scale);
    return {prefactor * g.value, prefactor * g.err};
  };
}

}  // namespace rmt

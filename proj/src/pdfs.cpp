#include "rmt/pdfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmt {

namespace {

constexpr double kMinGap = 1e-8;
const double kLog2 = std::log(2.0);

double lgam(double x) { return log_gamma(x); }

void check_ordered(const std::vector<double>& v, const char* what, bool allow_zero = false) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) && !(allow_zero && v[i] == 0.0))
      throw InvalidParams(std::string(what) + ": entries must be positive");
    if (i > 0 && !(v[i] - v[i - 1] > kMinGap))
      throw DegenerateSpectrum(std::string(what) + ": entries must be strictly increasing (gap > 1e-8)");
  }
}

// log|prod_{j<k}(u_k^2 - u_j^2)| (+ sum log u_j for odd) and its sign.
double log_vandermonde(const std::vector<double>& u, Parity parity, double* sign) {
  double acc = 0.0, s = 1.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (std::size_t k = j + 1; k < u.size(); ++k) {
      const double d = u[k] * u[k] - u[j] * u[j];
      acc += std::log(std::abs(d));
      if (d < 0) s = -s;
    }
    if (parity == Parity::odd) acc += std::log(u[j]);
  }
  *sign = s;
  return acc;
}

double log_vandermonde_plain(const std::vector<double>& u, double* sign) {
  double acc = 0.0, s = 1.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    for (std::size_t k = j + 1; k < u.size(); ++k) {
      const double d = u[k] - u[j];
      acc += std::log(std::abs(d));
      if (d < 0) s = -s;
    }
  *sign = s;
  return acc;
}

// Determinant of an error-carrying matrix with the first-order bound
// sum_ij |cofactor_ij| err_ij.
struct DetWithError {
  DetResult det;
  double err;
};

DetWithError det_with_error(const RealMatrix& a, const RealMatrix& e) {
  const int n = static_cast<int>(a.rows());
  DetWithError out{stable_det(a), 0.0};
  if (n == 1) {
    out.err = e(0, 0);
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (e(i, j) == 0.0) continue;
      RealMatrix minor(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      out.err += std::abs(stable_det(minor).value()) * e(i, j);
    }
  return out;
}

DensityResult assemble(double log_prefactor, double prefactor_sign, const DetWithError& d) {
  DensityResult r;
  const double scale = std::exp(log_prefactor);
  r.log_value = log_prefactor + d.det.log_abs;
  r.value = prefactor_sign * d.det.value() * scale;
  r.err = d.err * scale;
  return r;
}

DensityResult kernel_density(const std::vector<double>& lam, const std::vector<double>& a,
                             Parity parity, const std::function<Estimate(int, double)>& kernel) {
  const int n = static_cast<int>(lam.size());
  if (static_cast<int>(a.size()) != n) throw DimensionMismatch("density: lam and a differ in length");
  if (n == 0) throw InvalidParams("density: empty spectrum");
  check_ordered(lam, "lambda");
  check_ordered(a, "a");
  RealMatrix g(n, n), ge(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Estimate e = kernel(i, lam[j]);
      g(i, j) = e.value;
      ge(i, j) = e.err;
    }
  double s_lam, s_a;
  const double lv = log_vandermonde(lam, parity, &s_lam) - log_vandermonde(a, parity, &s_a);
  return assemble(lv, s_lam * s_a, det_with_error(g, ge));
}

DensityResult theorem_density(const PositiveSpectrum& lam, const PositiveSpectrum& a,
                              const std::vector<double>& b_eigs, double t, Parity parity) {
  if (t < 0.0) throw InvalidParams("density: t must be nonnegative");
  if (t == 0.0 && b_eigs.empty()) throw NonIntegrable("density: t = 0 needs at least one b");
  std::vector<Weight> kernels;
  for (double ak : a.values) kernels.push_back(gk_integral(ak, b_eigs, t, parity));
  return kernel_density(lam.values, a.values, parity,
                        [&](int i, double x) { return kernels[i](x); });
}

void check_nu(const std::vector<double>& nu, int M) {
  if (static_cast<int>(nu.size()) != M) throw InvalidSpec("ensemble: nu must have length M");
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] < 0.0) throw InvalidSpec("ensemble: nu must be nonnegative");
    if (i > 0 && nu[i] < nu[i - 1]) throw InvalidSpec("ensemble: nu must be nondecreasing");
  }
}

std::vector<double> sorted_b0(const EnsembleSpec& spec) {
  std::vector<double> b = spec.b0_values;
  std::sort(b.begin(), b.end());
  if (static_cast<int>(b.size()) != spec.m) throw InvalidSpec("ensemble: b0_values must have length m");
  check_ordered(b, "b0_values");
  return b;
}

}  // namespace

DensityResult PolynomialEnsemble::density(const std::vector<double>& lam) const {
  if (static_cast<int>(lam.size()) != n) throw DimensionMismatch("density: wrong number of eigenvalues");
  if (static_cast<int>(weights.size()) != n) throw DimensionMismatch("density: wrong number of weights");
  check_ordered(lam, "lambda");
  RealMatrix g(n, n), ge(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const Estimate e = weights(k, lam[j]);
      g(k, j) = e.value;
      ge(k, j) = e.err;
    }
  double s;
  const double lv = log_vandermonde(lam, parity, &s) - log_norm.value_or(0.0);
  return assemble(lv, s, det_with_error(g, ge));
}

DensityResult density_theorem_even(const PositiveSpectrum& lam, const PositiveSpectrum& a,
                                   const std::vector<double>& b_eigs, double t) {
  return theorem_density(lam, a, b_eigs, t, Parity::even);
}

DensityResult density_theorem_odd(const PositiveSpectrum& lam, const PositiveSpectrum& a,
                                  const std::vector<double>& b_eigs, double t) {
  return theorem_density(lam, a, b_eigs, t, Parity::odd);
}

double rank_two_kernel(double a_i, double lambda, double b1, Parity parity) {
  if (!(b1 > 0.0)) throw InvalidParams("rank_two_kernel: b1 must be positive");
  const double near = std::exp(-std::abs(lambda - a_i) / b1);
  if (parity == Parity::even) return (near + std::exp(-(lambda + a_i) / b1)) / (2.0 * b1);
  // near - far = near (1 - e^{-2 min/b1}), without cancellation for small arguments.
  return -near * std::expm1(-2.0 * std::min(lambda, a_i) / b1) / (2.0 * b1);
}

DensityResult density_rank_two(const PositiveSpectrum& lam, const PositiveSpectrum& a, double b1,
                               Parity parity) {
  return kernel_density(lam.values, a.values, parity, [&](int i, double x) -> Estimate {
    const double v = rank_two_kernel(a[i], x, b1, parity);
    return {v, 4e-16 * std::abs(v)};
  });
}

DensityResult density_fixed_B(const PositiveSpectrum& lam, const std::vector<double>& b, int n, int m,
                              Parity parity) {
  if (m < 1 || n < m) throw InvalidParams("density_fixed_B: need 1 <= m <= n");
  if (static_cast<int>(b.size()) != m || static_cast<int>(lam.size()) != m)
    throw DimensionMismatch("density_fixed_B: lam and b must have length m");
  check_ordered(b, "b");
  check_ordered(lam.values, "lambda");
  const int odd = parity == Parity::odd ? 1 : 0;
  const int power = 2 * (n - m) + odd;
  // log of prod_{l=n-m}^{n-1} 1/(2l+odd)! and the algebraic prefactors.
  double logc = 0.0;
  for (int l = n - m; l <= n - 1; ++l) logc -= lgam(2.0 * l + odd + 1.0);
  double s1, s2;
  logc += log_vandermonde(lam.values, Parity::even, &s1) - log_vandermonde(b, Parity::odd, &s2);
  for (int l = 0; l < m; ++l) logc += power * (std::log(lam[l]) - std::log(b[l]));
  RealMatrix e(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) e(j, k) = std::exp(-lam[j] / b[k]);
  return assemble(logc, s1 * s2, det_with_error(e, RealMatrix(4e-16 * e)));
}

DensityResult density_lmb(const PositiveSpectrum& lam, int n, int m, Parity parity) {
  if (m < 1 || n < m) throw InvalidParams("density_lmb: need 1 <= m <= n");
  if (static_cast<int>(lam.size()) != m) throw DimensionMismatch("density_lmb: lam must have length m");
  check_ordered(lam.values, "lambda");
  const int odd = parity == Parity::odd ? 1 : 0;
  const int power = 2 * (n - m) + odd;
  double logc = -0.5 * m * (m - 1) * kLog2;
  for (int l = n - m; l <= n - 1; ++l) logc -= lgam(2.0 * l + odd + 1.0);
  for (int l = 0; l < m; ++l) logc -= lgam(l + 1.0);
  double logv = 0.0;
  for (int l = 0; l < m; ++l) logv += power * std::log(lam[l]) - lam[l];
  double s1, s2;
  logv += log_vandermonde_plain(lam.values, &s1) + log_vandermonde(lam.values, Parity::even, &s2);
  DensityResult r;
  r.log_value = logc + logv;
  r.value = s1 * s2 * std::exp(r.log_value);
  r.err = 1e-14 * std::abs(r.value);
  return r;
}

double product_log_bimoment(const EnsembleSpec& spec, int k, int l) {
  const double odd = spec.parity == Parity::odd ? 1.0 : 0.0;
  switch (spec.b0_kind) {
    case B0Kind::elementary: {
      // int x^{2k} G^{M,0}(b | x) dx = prod Gamma(b_i + 2k + 1)
      double acc = 0.0;
      for (double bi : g_elementary_params(l, spec.nu, spec.parity)) acc += lgam(bi + 2.0 * k + 1.0);
      return acc;
    }
    case B0Kind::gaussian_antisym: {
      if (spec.M == 0) return lgam(k + l + 0.5 + odd) - kLog2;
      // lambda = 2^M sqrt(x): the moment becomes a Mellin transform at s = k + 1/2.
      double acc = std::log(g_gauss_prefactor(spec.nu, spec.parity)) +
                   (2.0 * spec.M * k + spec.M - 1.0) * kLog2;
      for (double bi : g_gauss_params(l, spec.nu, spec.parity)) acc += lgam(bi + k + 0.5);
      return acc;
    }
    case B0Kind::fixed: {
      const std::vector<double> b = sorted_b0(spec);
      double acc = (2.0 * k + 1.0) * std::log(b[l]);
      for (double bi : g_elementary_params(0, spec.nu, spec.parity)) acc += lgam(bi + 2.0 * k + 1.0);
      return acc;
    }
  }
  throw InvalidSpec("product_log_bimoment: unknown initial matrix");
}

PolynomialEnsemble product_ensemble(const EnsembleSpec& spec) {
  if (spec.m < 1) throw InvalidSpec("ensemble: m must be positive");
  check_nu(spec.nu, spec.M);
  if (spec.t != 0.0 || !spec.a_values.empty())
    throw UnsupportedCase("product_ensemble: sum terms have no polynomial-ensemble density here");
  PolynomialEnsemble pe;
  pe.n = spec.m;
  pe.parity = Parity::even;
  const int m = spec.m;
  switch (spec.b0_kind) {
    case B0Kind::elementary:
      if (spec.M == 0) throw UnsupportedCase("product_ensemble: elementary B0 with M = 0 has a fixed spectrum");
      for (int j = 0; j < m; ++j) pe.weights.evaluators.push_back(g_elementary(j, spec.M, spec.nu, spec.parity));
      pe.weights.provenance = spec.M == 1 ? Provenance::closed_form : Provenance::mellin_barnes;
      break;
    case B0Kind::gaussian_antisym:
      for (int j = 0; j < m; ++j) pe.weights.evaluators.push_back(g_gauss(j, spec.M, spec.nu, spec.parity));
      pe.weights.provenance = spec.M == 0 ? Provenance::closed_form : Provenance::mellin_barnes;
      break;
    case B0Kind::fixed: {
      if (spec.M == 0) throw UnsupportedCase("product_ensemble: fixed B0 with M = 0 has a fixed spectrum");
      const std::vector<double> b = sorted_b0(spec);
      const std::vector<double> params = g_elementary_params(0, spec.nu, spec.parity);
      for (int k = 0; k < m; ++k) {
        const double bk = b[k];
        pe.weights.evaluators.push_back([params, bk](double lambda) -> Estimate {
          if (!(lambda > 0.0)) throw InvalidParams("weight: lambda must be positive");
          return meijer_g_q0(params, lambda / bk);
        });
      }
      pe.weights.provenance = spec.M == 1 ? Provenance::closed_form : Provenance::mellin_barnes;
      break;
    }
  }
  // Andreief: the ordered-cone integral of Delta^even det[g] is det of the bimoments.
  RealMatrix logs(m, m), signs = RealMatrix::Ones(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) logs(k, l) = product_log_bimoment(spec, k, l);
  const DetResult z = stable_det_log_entries(logs, signs);
  if (!(z.sign > 0.0)) throw InvalidSpec("product_ensemble: bimoment determinant is not positive");
  pe.log_norm = z.log_abs;
  return pe;
}

DensityResult density_product(const PositiveSpectrum& lam, const EnsembleSpec& spec) {
  return product_ensemble(spec).density(lam.values);
}

double complex_product_log_norm(int m, const std::vector<double>& nu) {
  double acc = 0.0;
  for (int i = 1; i <= m; ++i) {
    acc += lgam(static_cast<double>(i));
    for (double v : nu) acc += lgam(v + i);
  }
  return acc;
}

DensityResult density_complex_product(const std::vector<double>& x, int m, int K,
                                      const std::vector<double>& nu) {
  if (m < 1 || K < 1) throw InvalidParams("density_complex_product: need m, K >= 1");
  if (static_cast<int>(nu.size()) != K) throw DimensionMismatch("density_complex_product: nu must have length K");
  if (static_cast<int>(x.size()) != m) throw DimensionMismatch("density_complex_product: x must have length m");
  for (double v : nu)
    if (!(v > -1.0)) throw InvalidParams("density_complex_product: nu entries must exceed -1");
  check_ordered(x, "x");
  RealMatrix g(m, m), ge(m, m);
  for (int k = 0; k < m; ++k) {
    // Bottom parameters (nu_K, ..., nu_2, nu_1 + k).
    std::vector<double> b;
    for (int j = K - 1; j >= 1; --j) b.push_back(nu[j]);
    b.push_back(nu[0] + k);
    for (int j = 0; j < m; ++j) {
      const Estimate e = meijer_g_q0(b, x[j]);
      g(k, j) = e.value;
      ge(k, j) = e.err;
    }
  }
  double s;
  const double lv = log_vandermonde_plain(x, &s) - complex_product_log_norm(m, nu);
  return assemble(lv, s, det_with_error(g, ge));
}

double defosseux_det_integral(const PositiveSpectrum& lam, const PositiveSpectrum& a, Parity parity) {
  const int n = static_cast<int>(lam.size());
  if (static_cast<int>(a.size()) != n) throw DimensionMismatch("defosseux: lam and a differ in length");
  if (n < 1) throw InvalidParams("defosseux: empty spectrum");
  check_ordered(lam.values, "lambda");
  check_ordered(a.values, "a");
  // The interlacing region is a box, and the integrand exp(2 sum z) factorizes;
  // each factor is kept in log form, log int_lo^hi e^{2z} dz.
  constexpr double kEmpty = -std::numeric_limits<double>::infinity();
  auto log_box = [&](double lo, double hi) {
    if (!(hi > lo)) return kEmpty;
    return 2.0 * hi + std::log1p(-std::exp(-2.0 * (hi - lo))) - kLog2;
  };
  double log_total = 0.0;
  if (parity == Parity::even) {
    for (int j = 1; j < n; ++j) log_total -= a[j] + lam[j];
    for (int j = 0; j + 1 < n; ++j)
      log_total += log_box(std::max(lam[j], a[j]), std::min(lam[j + 1], a[j + 1]));
    const double first = std::exp(-(lam[0] + a[0])) + std::exp(-std::abs(lam[0] - a[0]));
    return 0.5 * first * std::exp(log_total);
  }
  for (int j = 0; j < n; ++j) {
    log_total -= a[j] + lam[j];
    const double lo = j == 0 ? 0.0 : std::max(lam[j - 1], a[j - 1]);
    log_total += log_box(lo, std::min(lam[j], a[j]));
  }
  return std::exp(log_total);
}

}  // namespace rmt

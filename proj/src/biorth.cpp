// Biorthogonal system of the elementary product ensemble and of the complex
// Gaussian product.
//
// Exact quantities (bimoments, the coefficients of phi_n in the weights, Mellin
// moments of the contour representation) are computed in 50-digit binary floating
// point; only the final values are rounded to double.

#include "rmt/biorth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace rmt {

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

void check_params(int M, const std::vector<double>& nu) {
  if (M < 1) throw InvalidParams("biorth: depth M must be at least 1");
  if (static_cast<int>(nu.size()) != M) throw DimensionMismatch("biorth: nu must have M entries");
  for (double v : nu)
    if (!(v >= 0.0)) throw InvalidParams("biorth: nu entries must be nonnegative");
}

Big big_gamma(double x) { return boost::math::tgamma(Big(x)); }

Big big_bimoment(int k, int l, const std::vector<double>& nu) {
  Big v = big_gamma(2.0 * nu[0] + 2.0 * k + l + 1.0);
  for (std::size_t i = 1; i < nu.size(); ++i) v *= big_gamma(2.0 * nu[i] + 2.0 * k + 1.0);
  return v;
}

// Solves a x = rhs with full pivoting.
std::vector<Big> solve_full_pivot(std::vector<std::vector<Big>> a, std::vector<Big> rhs) {
  const int n = static_cast<int>(rhs.size());
  std::vector<int> col(n);
  for (int i = 0; i < n; ++i) col[i] = i;
  for (int p = 0; p < n; ++p) {
    int pr = p, pc = p;
    Big best = 0;
    for (int i = p; i < n; ++i)
      for (int j = p; j < n; ++j)
        if (abs(a[i][j]) > best) {
          best = abs(a[i][j]);
          pr = i;
          pc = j;
        }
    if (best == 0) throw NonIntegrable("biorth: singular bimoment system");
    std::swap(a[p], a[pr]);
    std::swap(rhs[p], rhs[pr]);
    if (pc != p) {
      for (int i = 0; i < n; ++i) std::swap(a[i][p], a[i][pc]);
      std::swap(col[p], col[pc]);
    }
    for (int i = p + 1; i < n; ++i) {
      const Big f = a[i][p] / a[p][p];
      if (f == 0) continue;
      for (int j = p; j < n; ++j) a[i][j] -= f * a[p][j];
      rhs[i] -= f * rhs[p];
    }
  }
  std::vector<Big> y(n);
  for (int i = n - 1; i >= 0; --i) {
    Big s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * y[j];
    y[i] = s / a[i][i];
  }
  std::vector<Big> x(n);
  for (int i = 0; i < n; ++i) x[col[i]] = y[i];
  return x;
}

std::vector<Big> big_phi_coefficients(int n, const std::vector<double>& nu) {
  std::vector<std::vector<Big>> b(n + 1, std::vector<Big>(n + 1));
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) b[k][l] = big_bimoment(k, l, nu);
  std::vector<Big> rhs(n + 1, Big(0));
  rhs[n] = 1;
  return solve_full_pivot(std::move(b), std::move(rhs));
}

std::vector<Big> big_p_coefficients(int n, const std::vector<double>& nu) {
  std::vector<Big> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    Big v = big_gamma(n + 1.0) / (big_gamma(k + 1.0) * big_gamma(n - k + 1.0));
    for (double ni : nu) v *= big_gamma(2.0 * ni + 2.0 * n + 1.0) / big_gamma(2.0 * ni + 2.0 * k + 1.0);
    c[k] = ((n - k) % 2 == 0) ? v : Big(-v);
  }
  return c;
}

// Bottom parameters nu_1, nu_1 - 1/2, ..., nu_M, nu_M - 1/2 of the dual function.
std::vector<double> interlaced_params(const std::vector<double>& nu) {
  std::vector<double> b;
  for (double v : nu) {
    b.push_back(v);
    b.push_back(v - 0.5);
  }
  return b;
}

Big big_h(int n, const std::vector<double>& nu) {
  Big h = big_gamma(n + 1.0);
  for (double v : nu) h *= pow(Big(2), 2 * n) * big_gamma(v + n + 1.0) * big_gamma(v + n + 0.5);
  return h;
}

// int_0^inf x^{2k} phi_n(x) dx for the contour representation: the Mellin transform
// of G^{2M,1} at s = k + 1 is prod Gamma(b_i + k + 1) (-k)_n.
Big big_contour_moment(int k, int n, int M, const std::vector<double>& nu) {
  if (k < n) return Big(0);
  Big v = pow(Big(4), M * k) / big_h(n, nu);
  for (double b : interlaced_params(nu)) v *= big_gamma(b + k + 1.0);
  // (-k)_n = (-1)^n k! / (k - n)!, which cancels the (-1)^n prefactor.
  v *= big_gamma(k + 1.0) / big_gamma(k - n + 1.0);
  return v;
}

double prod_gamma_log(int n, const std::vector<double>& nu) {
  double s = log_gamma(n + 1.0);
  for (double v : nu) s += log_gamma(n + v + 1.0);
  return s;
}

void check_complex(int n, int K, const std::vector<double>& nu) {
  if (n < 0) throw InvalidParams("pq_complex: n must be nonnegative");
  if (K < 1 || static_cast<int>(nu.size()) != K) throw DimensionMismatch("pq_complex: nu must have K entries");
  for (double v : nu)
    if (!(v > -1.0)) throw InvalidParams("pq_complex: nu entries must exceed -1");
}

// Rounded coefficient vectors, cached per (degree, nu) since the 50-digit work
// dominates repeated pointwise evaluation.
using CoefficientKey = std::pair<int, std::vector<double>>;

template <class Compute>
const std::vector<double>& cached(std::map<CoefficientKey, std::vector<double>>& cache, int n,
                                  const std::vector<double>& nu, Compute compute) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, nu});
  if (it == cache.end()) {
    std::vector<double> out;
    for (const Big& c : compute()) out.push_back(static_cast<double>(c));
    it = cache.emplace(CoefficientKey{n, nu}, std::move(out)).first;
  }
  return it->second;
}

}  // namespace

double bimoment_log(int k, int l, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  if (k < 0 || l < 0) throw InvalidParams("bimoment: indices must be nonnegative");
  double s = log_gamma(2.0 * nu[0] + 2.0 * k + l + 1.0);
  for (int i = 1; i < M; ++i) s += log_gamma(2.0 * nu[i] + 2.0 * k + 1.0);
  return s;
}

BimomentMatrix BimomentMatrix::build(int m, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  if (m < 0) throw InvalidParams("BimomentMatrix: size must be nonnegative");
  BimomentMatrix b;
  b.m = m;
  b.M = M;
  b.nu = nu;
  b.log_abs.resize(m + 1, m + 1);
  for (int k = 0; k <= m; ++k)
    for (int l = 0; l <= m; ++l) b.log_abs(k, l) = bimoment_log(k, l, M, nu);
  return b;
}

DetResult BimomentMatrix::determinant() const {
  return stable_det_log_entries(log_abs, RealMatrix::Ones(m + 1, m + 1));
}

double BimomentMatrix::log_det_closed_form() const {
  double s = 0.0;
  for (int k = 0; k <= m; ++k) {
    s += k * std::log(2.0) + log_gamma(k + 1.0);
    for (double v : nu) s += log_gamma(2.0 * v + 2.0 * k + 1.0);
  }
  return s;
}

std::vector<double> p_n_coefficients(int n, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  if (n < 0) throw InvalidParams("p_n: n must be nonnegative");
  static std::map<CoefficientKey, std::vector<double>> cache;
  return cached(cache, n, nu, [&] { return big_p_coefficients(n, nu); });
}

double p_n(double x, int n, int M, const std::vector<double>& nu) {
  const std::vector<double> c = p_n_coefficients(n, M, nu);
  const long double x2 = static_cast<long double>(x) * x;
  long double acc = 0.0L;
  for (int k = n; k >= 0; --k) acc = acc * x2 + c[k];
  return static_cast<double>(acc);
}

double p_n_hypergeometric(double x, int n, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  std::vector<double> b;
  double log_pref = 0.0;
  for (double v : nu) {
    b.push_back(1.0 + v);
    b.push_back(v + 0.5);
    log_pref += log_gamma(2.0 * v + 2.0 * n + 1.0) - log_gamma(2.0 * v + 1.0);
  }
  const double f = hyp_1Fq_terminating(n, b, x * x / std::pow(4.0, M));
  return (n % 2 == 0 ? 1.0 : -1.0) * std::exp(log_pref) * f;
}

double p_n_meijer(double x, int n, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  std::vector<double> c;
  for (double v : nu) {
    c.push_back(-v);
    c.push_back(0.5 - v);
  }
  const double g = meijer_g_10_terminating(n, c, x * x / std::pow(4.0, M));
  return (n % 2 == 0 ? 1.0 : -1.0) * std::exp(log_h_n(n, M, nu)) * g;
}

double p_n_monic(double x, int n, int M, const std::vector<double>& nu) {
  const std::vector<double> c = p_n_coefficients(n, M, nu);
  return p_n(x, n, M, nu) / c.back();
}

double log_h_n(int n, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  double s = log_gamma(n + 1.0);
  for (double v : nu) s += 2.0 * n * std::log(2.0) + log_gamma(v + n + 1.0) + log_gamma(v + n + 0.5);
  return s;
}

std::vector<double> phi_n_coefficients(int n, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  if (n < 0) throw InvalidParams("phi_n: n must be nonnegative");
  static std::map<CoefficientKey, std::vector<double>> cache;
  return cached(cache, n, nu, [&] { return big_phi_coefficients(n, nu); });
}

namespace {

struct SolveValue {
  Estimate est;
  double scale;  // sum of |c_l g_l|, the size before cancellation
};

SolveValue phi_solve_detail(double x, int n, int M, const std::vector<double>& nu) {
  if (!(x > 0.0)) throw InvalidParams("phi_n: x must be positive");
  const std::vector<double> c = phi_n_coefficients(n, M, nu);
  long double acc = 0.0L, scale = 0.0L, err = 0.0L;
  for (int l = 0; l <= n; ++l) {
    const Estimate g = g_elementary(l, M, nu, Parity::even)(x);
    acc += static_cast<long double>(c[l]) * g.value;
    scale += std::abs(c[l] * g.value);
    err += std::abs(c[l]) * g.err;
  }
  err += 4.0L * std::numeric_limits<double>::epsilon() * scale;
  return {{static_cast<double>(acc), static_cast<double>(err)}, static_cast<double>(scale)};
}

}  // namespace

Estimate phi_n_solve(double x, int n, int M, const std::vector<double>& nu) {
  return phi_solve_detail(x, n, M, nu).est;
}

Estimate phi_n_mellin_barnes(double x, int n, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  if (n < 0) throw InvalidParams("phi_n: n must be nonnegative");
  if (!(x > 0.0)) throw InvalidParams("phi_n: x must be positive");
  const Estimate g = meijer_g_q1(n, interlaced_params(nu), x * x / std::pow(4.0, M));
  const double pref = (n % 2 == 0 ? 1.0 : -1.0) * x *
                      std::exp(-(2.0 * M - 1.0) * std::log(2.0) - log_h_n(n, M, nu));
  return {pref * g.value, std::abs(pref) * g.err};
}

Estimate phi_n(double x, int n, int M, const std::vector<double>& nu) {
  const SolveValue s = phi_solve_detail(x, n, M, nu);
  const Estimate mb = phi_n_mellin_barnes(x, n, M, nu);
  const double diff = std::abs(s.est.value - mb.value);
  const double tol = 1e-6 * std::max({s.scale, std::abs(mb.value), 1e-300}) + 4.0 * (s.est.err + mb.err);
  if (diff > tol)
    throw CrossCheckFailure("phi_n: bimoment-solve and contour paths differ by " + std::to_string(diff) +
                            " at x = " + std::to_string(x));
  return {s.est.value, std::max(s.est.err, diff)};
}

double P_n_literal(int n, int K, const std::vector<double>& nu, double x) {
  return (n % 2 == 0 ? 1.0 : -1.0) * pq_complex(n, K, nu, x).P;
}

PQValue pq_complex(int n, int K, const std::vector<double>& nu, double x) {
  check_complex(n, K, nu);
  // Parameters are listed as nu_K, ..., nu_1.
  std::vector<double> c, b;
  for (int j = K - 1; j >= 0; --j) {
    c.push_back(-nu[j]);
    b.push_back(nu[j]);
  }
  const double lg = prod_gamma_log(n, nu);
  PQValue out;
  out.P = std::exp(lg) * meijer_g_01_terminating(n, c, x);
  if (x > 0.0) {
    const Estimate g = meijer_g_q1(n, b, x);
    const double pref = (n % 2 == 0 ? 1.0 : -1.0) * std::exp(-lg);
    out.Q = {pref * g.value, std::abs(pref) * g.err};
  }
  return out;
}

namespace {

struct Panel {
  double lo, hi;
  bool graded;
};

template <int N>
void add_nodes(double lo, double hi, std::vector<double>& nodes, std::vector<double>& weights) {
  using GL = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = GL::abscissa();
  const auto& w = GL::weights();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    if (abscissa[i] == 0.0) {
      nodes.push_back(mid);
      weights.push_back(half * w[i]);
      continue;
    }
    nodes.push_back(mid - half * abscissa[i]);
    weights.push_back(half * w[i]);
    nodes.push_back(mid + half * abscissa[i]);
    weights.push_back(half * w[i]);
  }
}

}  // namespace

GramQuadrature gram_by_quadrature(const std::vector<std::function<double(double)>>& left,
                                  const std::vector<std::function<double(double)>>& right) {
  const int nl = static_cast<int>(left.size()), nr = static_cast<int>(right.size());
  GramQuadrature out{RealMatrix::Zero(nl, nr), RealMatrix::Zero(nl, nr)};
  // Panels in u = sqrt(x): geometric grading towards 0 for edge singularities, then
  // panels of width 1/2 until the contributions vanish.
  constexpr double kWidth = 0.5;
  constexpr int kGraded = 32;
  constexpr double kUMax = 400.0;
  std::vector<Panel> graded;
  for (int i = kGraded; i >= 1; --i) graded.push_back({kWidth * std::ldexp(1.0, -i), kWidth * std::ldexp(1.0, 1 - i), true});

  auto panel_sums = [&](const Panel& p, RealMatrix& fine, RealMatrix& coarse) {
    std::vector<double> nf, wf, nc, wc;
    if (p.graded) {
      add_nodes<12>(p.lo, p.hi, nf, wf);
      add_nodes<8>(p.lo, p.hi, nc, wc);
    } else {
      add_nodes<20>(p.lo, p.hi, nf, wf);
      add_nodes<12>(p.lo, p.hi, nc, wc);
    }
    auto accumulate = [&](const std::vector<double>& nodes, const std::vector<double>& w, RealMatrix& sum) {
      sum = RealMatrix::Zero(nl, nr);
      std::vector<double> fl(nl), fr(nr);
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double u = nodes[q], x = u * u, jac = 2.0 * u * w[q];
        for (int j = 0; j < nl; ++j) fl[j] = left[j](x);
        for (int k = 0; k < nr; ++k) fr[k] = right[k](x);
        for (int j = 0; j < nl; ++j)
          for (int k = 0; k < nr; ++k) sum(j, k) += jac * fl[j] * fr[k];
      }
    };
    accumulate(nf, wf, fine);
    accumulate(nc, wc, coarse);
  };

  RealMatrix fine, coarse;
  double peak = 1.0;  // largest panel contribution, the scale of any cancellation
  for (const Panel& p : graded) {
    panel_sums(p, fine, coarse);
    out.value += fine;
    out.err += (fine - coarse).cwiseAbs();
    peak = std::max(peak, fine.cwiseAbs().maxCoeff());
  }
  int quiet = 0;
  for (double lo = kWidth; lo < kUMax && quiet < 3; lo += kWidth) {
    panel_sums({lo, lo + kWidth, false}, fine, coarse);
    out.value += fine;
    out.err += (fine - coarse).cwiseAbs();
    peak = std::max(peak, fine.cwiseAbs().maxCoeff());
    quiet = fine.cwiseAbs().maxCoeff() < 1e-18 * peak ? quiet + 1 : 0;
  }
  if (quiet < 3) throw QuadratureFailure("gram_by_quadrature: integrands do not decay", 0.0, 0.0);
  return out;
}

namespace {
constexpr double kBiorthTolerance = 1e-6;
}

BiorthCheck biorth_check(int n_max, int M, const std::vector<double>& nu) {
  check_params(M, nu);
  if (n_max < 0) throw InvalidParams("biorth_check: n_max must be nonnegative");
  BiorthCheck r;
  r.n_max = n_max;
  r.M = M;
  r.nu = nu;
  const int s = n_max + 1;
  r.exact = RealMatrix::Zero(s, s);
  for (int j = 0; j < s; ++j) {
    const std::vector<Big> a = big_p_coefficients(j, nu);
    for (int k = 0; k < s; ++k) {
      Big acc = 0;
      for (int i = 0; i <= j; ++i) acc += a[i] * big_contour_moment(i, k, M, nu);
      r.exact(j, k) = static_cast<double>(acc);
    }
  }
  r.exact_max_dev = (r.exact - RealMatrix::Identity(s, s)).cwiseAbs().maxCoeff();

  std::vector<std::function<double(double)>> ps, phis;
  for (int j = 0; j < s; ++j) {
    ps.push_back([j, M, &nu](double x) { return p_n(x, j, M, nu); });
    phis.push_back([k = j, M, &nu](double x) { return x > 0.0 ? phi_n_mellin_barnes(x, k, M, nu).value : 0.0; });
  }
  const GramQuadrature g = gram_by_quadrature(ps, phis);
  r.quadrature = g.value;
  r.quadrature_err = g.err;
  const RealMatrix dev = (g.value - RealMatrix::Identity(s, s)).cwiseAbs();
  r.quadrature_max_dev = dev.maxCoeff();
  r.quadrature_consistent = (dev.array() <= kBiorthTolerance + 2.0 * g.err.array()).all();

  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (int k = 0; k < s; ++k) {
      const SolveValue sv = phi_solve_detail(x, k, M, nu);
      const Estimate mb = phi_n_mellin_barnes(x, k, M, nu);
      const double rel = std::abs(sv.est.value - mb.value) / std::max(sv.scale, 1e-300);
      r.solve_vs_contour_max_diff = std::max(r.solve_vs_contour_max_diff, rel);
    }
  }
  return r;
}

}  // namespace rmt

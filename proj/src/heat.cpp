// Heat-kernel finite-difference check and the W identity.

#include <algorithm>
#include <cmath>

#include "rmt/verify.hpp"

namespace rmt {

namespace {

using Real = long double;

// Determinant of a small matrix by Gaussian elimination with partial pivoting.
Real small_det(std::vector<std::vector<Real>> a) {
  const std::size_t n = a.size();
  Real det = 1.0L;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t piv = p;
    for (std::size_t i = p + 1; i < n; ++i)
      if (std::fabs(a[i][p]) > std::fabs(a[piv][p])) piv = i;
    if (a[piv][p] == 0.0L) return 0.0L;
    if (piv != p) {
      std::swap(a[piv], a[p]);
      det = -det;
    }
    det *= a[p][p];
    for (std::size_t i = p + 1; i < n; ++i) {
      const Real f = a[i][p] / a[p][p];
      for (std::size_t j = p; j < n; ++j) a[i][j] -= f * a[p][j];
    }
  }
  return det;
}

// Extended precision keeps rounding well below the O(h^4) differences at h/4.
Real kernel_ld(Parity parity, const std::vector<Real>& x, const std::vector<double>& y, Real t) {
  const Real pi = 3.141592653589793238462643383279502884L;
  const std::size_t m = x.size();
  std::vector<std::vector<Real>> a(m, std::vector<Real>(m));
  const Real norm = 1.0L / std::sqrt(2.0L * pi * t);
  const Real sgn = parity == Parity::even ? 1.0L : -1.0L;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      const Real dm = x[j] - y[k], dp = x[j] + y[k];
      a[j][k] = norm * (std::exp(-dm * dm / (2.0L * t)) + sgn * std::exp(-dp * dp / (2.0L * t)));
    }
  return small_det(std::move(a));
}

// |1/2 sum_j d2/dxj2 psi - d/dt psi| by central differences.
double fd_residual(Parity parity, const std::vector<double>& x, const std::vector<double>& y, double t,
                   double h) {
  const std::size_t m = x.size();
  std::vector<Real> base(x.begin(), x.end());
  const Real hx = h * std::sqrt(t), ht = h * t;
  const Real centre = kernel_ld(parity, base, y, t);
  Real lap = 0.0L;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Real> up = base, down = base;
    up[j] += hx;
    down[j] -= hx;
    lap += (kernel_ld(parity, up, y, t) - 2.0L * centre + kernel_ld(parity, down, y, t)) / (hx * hx);
  }
  const Real dt = (kernel_ld(parity, base, y, t + ht) - kernel_ld(parity, base, y, t - ht)) / (2.0L * ht);
  return static_cast<double>(std::fabs(0.5L * lap - dt));
}

std::vector<std::vector<double>> default_cloud(int m) {
  const std::vector<std::vector<double>> full{
      {0.7, 1.3, 2.1}, {0.5, 1.1, 1.9}, {1.0, 1.8, 2.6}, {0.8, 2.0, 2.9}, {1.2, 1.6, 3.1}};
  std::vector<std::vector<double>> out;
  for (const auto& p : full) out.emplace_back(p.begin(), p.begin() + m);
  return out;
}

}  // namespace

double heat_kernel(Parity parity, const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (x.size() != y.size()) throw DimensionMismatch("heat_kernel: x and y differ in length");
  if (!(t > 0.0)) throw InvalidParams("heat_kernel: t must be positive");
  return static_cast<double>(kernel_ld(parity, std::vector<Real>(x.begin(), x.end()), y, t));
}

TestReport heat_equation_check(const HeatCheckConfig& cfg) {
  if (cfg.m < 1 || cfg.m > 3) throw InvalidParams("heat_equation_check: m must be in 1..3");
  if (!(cfg.t > 0.0)) throw InvalidParams("heat_equation_check: t must be positive");
  const auto cloud = cfg.x_points.empty() ? default_cloud(cfg.m) : cfg.x_points;
  std::vector<double> y = cfg.y;
  if (y.empty()) {
    const std::vector<double> full{0.9, 1.6, 2.4};
    y.assign(full.begin(), full.begin() + cfg.m);
  }
  if (static_cast<int>(y.size()) != cfg.m) throw DimensionMismatch("heat_equation_check: y has wrong length");

  std::vector<double> residuals;
  for (double h : {cfg.h, cfg.h / 2.0, cfg.h / 4.0}) {
    double worst = 0.0;
    for (const auto& x : cloud) {
      if (static_cast<int>(x.size()) != cfg.m) throw DimensionMismatch("heat_equation_check: bad point");
      worst = std::max(worst, fd_residual(cfg.parity, x, y, cfg.t, h));
    }
    residuals.push_back(worst);
  }
  const double r1 = residuals[1] / residuals[0], r2 = residuals[2] / residuals[1];
  TestReport r;
  r.name = "heat_" + to_string(cfg.parity) + "_m" + std::to_string(cfg.m);
  r.statistic = std::max(std::abs(r1 - 0.25), std::abs(r2 - 0.25));
  r.threshold = 0.05;
  r.passed = r1 >= 0.2 && r1 <= 0.3 && r2 >= 0.2 && r2 <= 0.3;
  r.n_samples = cloud.size();
  r.details = {{"residuals", residuals}, {"ratios", {r1, r2}}, {"t", cfg.t}, {"h", cfg.h}};
  return r;
}

double identity_W_residual(const std::vector<double>& x, Parity parity, double* scale) {
  const std::size_t m = x.size();
  double total = 0.0, size = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double dw = 0.0, d2w = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      const double d = x[j] * x[j] - x[k] * x[k];
      dw -= 2.0 * x[j] / d;
      d2w -= 2.0 / d - 4.0 * x[j] * x[j] / (d * d);
    }
    if (parity == Parity::odd) {
      dw -= 1.0 / x[j];
      d2w += 1.0 / (x[j] * x[j]);
    }
    total += d2w - dw * dw;
    size += std::abs(d2w) + dw * dw;
  }
  if (scale) *scale = size;
  return total;
}

TestReport identity_W_check(int m, int trials, const RngStream& rng, Parity parity) {
  if (m < 2) throw InvalidParams("identity_W_check: m must be at least 2");
  RngStream r = rng;
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    std::vector<double> x;
    // Redraw until the pairwise gaps exceed 1e-3.
    for (;;) {
      x.clear();
      for (int j = 0; j < m; ++j) x.push_back(0.1 + 4.0 * r.uniform());
      std::sort(x.begin(), x.end());
      bool ok = true;
      for (int j = 0; j + 1 < m; ++j) ok = ok && x[j + 1] - x[j] > 1e-3;
      if (ok) break;
    }
    double scale = 0.0;
    const double res = identity_W_residual(x, parity, &scale);
    worst = std::max(worst, std::abs(res) / scale);
  }
  TestReport rep;
  rep.name = "identity_W_" + to_string(parity) + "_m" + std::to_string(m);
  rep.statistic = worst;
  rep.threshold = 1e-8;
  rep.passed = worst < 1e-8;
  rep.n_samples = static_cast<std::size_t>(trials);
  rep.seed = rng.seed();
  return rep;
}

}  // namespace rmt

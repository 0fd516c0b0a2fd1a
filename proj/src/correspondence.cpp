// Real anti-symmetric products against their complex Gaussian counterparts.

#include <algorithm>
#include <cmath>

#include "rmt/pdfs.hpp"
#include "rmt/specfun.hpp"
#include "rmt/verify.hpp"

namespace rmt {

std::string to_string(CorrespondenceCase c) {
  switch (c) {
    case CorrespondenceCase::cor1even: return "cor1even";
    case CorrespondenceCase::prop56: return "prop56";
    case CorrespondenceCase::prop57: return "prop57";
  }
  return "?";
}

CorrespondenceCase parse_correspondence_case(const std::string& s) {
  if (s == "cor1even") return CorrespondenceCase::cor1even;
  if (s == "prop56") return CorrespondenceCase::prop56;
  if (s == "prop57") return CorrespondenceCase::prop57;
  throw InvalidSpec("unknown correspondence case '" + s + "'");
}

EnsembleSpec correspondence_ensemble(CorrespondenceCase which, int m, int M, const std::vector<double>& nu) {
  EnsembleSpec e;
  e.m = m;
  e.M = M;
  e.nu = nu;
  e.parity = which == CorrespondenceCase::cor1even ? Parity::even : Parity::odd;
  e.b0_kind = which == CorrespondenceCase::prop57 ? B0Kind::gaussian_antisym : B0Kind::elementary;
  e.validate();
  return e;
}

std::vector<double> correspondence_complex_nu(CorrespondenceCase which, const std::vector<double>& nu) {
  std::vector<double> out;
  for (double v : nu) {
    if (which == CorrespondenceCase::cor1even) {
      out.push_back(v);
      out.push_back(v - 0.5);
    } else {
      out.push_back(v);
      out.push_back(v + 0.5);
    }
  }
  // The Gaussian initial matrix contributes one more factor.
  if (which == CorrespondenceCase::prop57) out.push_back(0.5);
  return out;
}

std::vector<double> correspondence_shapes(CorrespondenceCase which, const std::vector<double>& nu) {
  std::vector<double> shapes = correspondence_complex_nu(which, nu);
  for (double& s : shapes) s += 1.0;
  return shapes;
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)>& density, double x_max, int cells)
    : u_max_(std::sqrt(x_max)), cdf_(cells + 1, 0.0) {
  // Midpoint rule in u avoids evaluating at x = 0, where x^{-1/2} edges live.
  const double h = u_max_ / cells;
  for (int i = 0; i < cells; ++i) {
    const double u = (i + 0.5) * h;
    cdf_[i + 1] = cdf_[i] + h * 2.0 * u * density(u * u);
  }
}

double TabulatedCdf::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  const double u = std::sqrt(x);
  const int cells = static_cast<int>(cdf_.size()) - 1;
  if (u >= u_max_) return cdf_.back();
  const double pos = u / u_max_ * cells;
  const int i = std::min(static_cast<int>(pos), cells - 1);
  const double f = pos - i;
  return (1.0 - f) * cdf_[i] + f * cdf_[i + 1];
}

LargerEigenvalueCdf::LargerEigenvalueCdf(const std::vector<double>& complex_nu, int cells) {
  const int K = static_cast<int>(complex_nu.size());
  if (K < 1) throw InvalidParams("LargerEigenvalueCdf: empty parameter list");
  auto params = [&](int k) {
    std::vector<double> b;
    for (int j = K - 1; j >= 1; --j) b.push_back(complex_nu[j]);
    b.push_back(complex_nu[0] + k);
    return b;
  };
  const std::vector<double> b0 = params(0), b1 = params(1);
  auto w0 = [&](double x) { return meijer_g_q0(b0, x).value; };
  auto w1 = [&](double x) { return meijer_g_q0(b1, x).value; };

  // Range: extend until the heavier weight times x^3 is negligible.
  double u_max = 4.0;
  while (u_max < 1e3) {
    const double x = u_max * u_max;
    if (std::abs(w1(x)) * x * x * x < 1e-14) break;
    u_max *= 1.25;
  }
  const double h = u_max / cells;
  const double log_z = complex_product_log_norm(2, complex_nu);
  std::vector<double> a0(cells + 1, 0.0), a1(cells + 1, 0.0), m0(cells + 1, 0.0), m1(cells + 1, 0.0);
  u_edges_.assign(cells + 1, 0.0);
  cdf_.assign(cells + 1, 0.0);
  for (int i = 0; i < cells; ++i) {
    const double u = (i + 0.5) * h, x = u * u, jac = 2.0 * u * h;
    const double v0 = w0(x), v1 = w1(x);
    // Cumulative moments at the cell midpoint (half a cell beyond the left edge).
    const double ha0 = a0[i] + 0.5 * jac * v0, ha1 = a1[i] + 0.5 * jac * v1;
    const double hm0 = m0[i] + 0.5 * jac * x * v0, hm1 = m1[i] + 0.5 * jac * x * v1;
    // int_0^x (x - y) (w0(y) w1(x) - w1(y) w0(x)) dy.
    const double inner = v1 * (x * ha0 - hm0) - v0 * (x * ha1 - hm1);
    a0[i + 1] = a0[i] + jac * v0;
    a1[i + 1] = a1[i] + jac * v1;
    m0[i + 1] = m0[i] + jac * x * v0;
    m1[i + 1] = m1[i] + jac * x * v1;
    u_edges_[i + 1] = (i + 1) * h;
    cdf_[i + 1] = cdf_[i] + jac * inner * std::exp(-log_z);
  }
  total_ = cdf_.back();
  if (std::abs(total_ - 1.0) > 1e-4)
    throw CrossCheckFailure("LargerEigenvalueCdf: total mass " + std::to_string(total_) + " is not 1");
  // Pointwise agreement of the separable form with the determinantal density.
  const double xa = 0.3 * u_max * u_max / 100.0, xb = 2.5 * xa;
  const double direct = density_complex_product({xa, xb}, 2, K, complex_nu).value;
  const double separable = (xb - xa) * (w0(xa) * w1(xb) - w1(xa) * w0(xb)) * std::exp(-log_z);
  if (std::abs(direct - separable) > 1e-8 * std::max(1.0, std::abs(direct)))
    throw CrossCheckFailure("LargerEigenvalueCdf: weight ordering disagrees with the jpdf");
  for (double& c : cdf_) c /= total_;
}

double LargerEigenvalueCdf::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  const double u = std::sqrt(x);
  if (u >= u_edges_.back()) return 1.0;
  const double h = u_edges_[1];
  const int i = std::min(static_cast<int>(u / h), static_cast<int>(cdf_.size()) - 2);
  const double f = u / h - i;
  return (1.0 - f) * cdf_[i] + f * cdf_[i + 1];
}

TestReport correspondence_report(const CorrespondenceConfig& cfg, const RngStream& rng, unsigned workers) {
  if (cfg.m != 1 && cfg.m != 2) throw UnsupportedCase("correspondence_report: m must be 1 or 2");
  if (cfg.m == 2 && cfg.reference_shapes)
    throw UnsupportedCase("correspondence_report: reference shapes apply to m = 1 only");
  const EnsembleSpec spec = correspondence_ensemble(cfg.which, cfg.m, cfg.M, cfg.nu);
  const double scale = std::pow(4.0, cfg.M);
  const std::vector<double> shapes = cfg.reference_shapes ? *cfg.reference_shapes
                                                          : correspondence_shapes(cfg.which, cfg.nu);
  const std::string name = "correspondence_" + to_string(cfg.which) + "_m" + std::to_string(cfg.m) + "_M" +
                           std::to_string(cfg.M);

  // x = lambda_max^2 / 4^M from the real product.
  auto real_draws = [&](std::size_t n, const RngStream& base) {
    return mc_collect(
        n, base,
        [&](RngStream& r) {
          const double l = sample_product(spec, r).values.back();
          return l * l / scale;
        },
        workers);
  };

  TestReport rep;
  if (cfg.m == 1) {
    rep = with_retry(
        [&](std::size_t n, const RngStream& base) {
          const std::vector<double> xs = real_draws(n, base.substream(0));
          const std::vector<double> ref = mc_collect(
              n, base.substream(1), [&](RngStream& r) { return sample_gamma_product(shapes, r); }, workers);
          TestReport t = ks_two_sample(xs, ref, cfg.significance, name);
          t.n_samples = n;  // per side
          // First moment of lambda^2 against 4^M prod(shapes).
          double mean = 0.0, sq = 0.0;
          for (double x : xs) {
            mean += scale * x;
            sq += scale * scale * x * x;
          }
          mean /= xs.size();
          const double var = sq / xs.size() - mean * mean;
          double expected = scale;
          for (double s : shapes) expected *= s;
          t.details["mean_lambda_sq"] = mean;
          t.details["stderr_lambda_sq"] = std::sqrt(var / xs.size());
          t.details["expected_mean_lambda_sq"] = expected;
          return t;
        },
        cfg.n_samples, rng);
    rep.details["reference_shapes"] = shapes;
  } else {
    const std::vector<double> complex_nu = correspondence_complex_nu(cfg.which, cfg.nu);
    const LargerEigenvalueCdf cdf(complex_nu);
    rep = with_retry(
        [&](std::size_t n, const RngStream& base) {
          return ks_one_sample(real_draws(n, base.substream(0)), [&](double x) { return cdf(x); },
                               cfg.significance, name);
        },
        cfg.n_samples, rng);
    rep.details["complex_nu"] = complex_nu;
    rep.details["cdf_total_mass"] = cdf.total_mass();
  }
  rep.details["nu"] = cfg.nu;
  return rep;
}

}  // namespace rmt

#include "rmt/hcint.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/specfun.hpp"

namespace rmt {

std::string to_string(HCKind k) {
  switch (k) {
    case HCKind::unitary: return "unitary";
    case HCKind::orth_even: return "orth_even";
    case HCKind::orth_odd: return "orth_odd";
    case HCKind::symplectic: return "symplectic";
  }
  return "?";
}

HCKind parse_hc_kind(const std::string& s) {
  if (s == "unitary") return HCKind::unitary;
  if (s == "orth_even") return HCKind::orth_even;
  if (s == "orth_odd") return HCKind::orth_odd;
  if (s == "symplectic") return HCKind::symplectic;
  throw InvalidParams("unknown group: " + s);
}

namespace {

constexpr double kMinGap = 1e-8;

void check_spectrum(const HCGroup& g, const std::vector<double>& v, const char* label) {
  if (static_cast<int>(v.size()) != g.size)
    throw DimensionMismatch(std::string("hc: ") + label + " has the wrong length");
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (g.kind != HCKind::unitary && !(s[i] > kMinGap))
      throw DegenerateSpectrum(std::string("hc: ") + label + " must be strictly positive");
    if (i > 0 && s[i] - s[i - 1] <= kMinGap)
      throw DegenerateSpectrum(std::string("hc: ") + label + " has coincident values");
  }
}

// log|prod_{j<k}(f(u_k) - f(u_j))| and its sign.
void log_vandermonde(const std::vector<double>& u, bool squared, double* log_abs, double* sign) {
  double acc = 0.0, sg = 1.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    for (std::size_t j = 0; j < k; ++j) {
      const double d = squared ? u[k] * u[k] - u[j] * u[j] : u[k] - u[j];
      acc += std::log(std::abs(d));
      if (d < 0) sg = -sg;
    }
  *log_abs = acc;
  *sign = sg;
}

}  // namespace

RhsValue hc_rhs(const HCGroup& group, const std::vector<double>& x, const std::vector<double>& y) {
  check_spectrum(group, x, "x");
  check_spectrum(group, y, "y");
  const int n = group.size;
  RealMatrix log_entries(n, n), signs(n, n);
  double log_const = 0.0;
  double lv_x = 0, sv_x = 1, lv_y = 0, sv_y = 1;
  switch (group.kind) {
    case HCKind::unitary:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          log_entries(i, j) = x[i] * y[j];
          signs(i, j) = 1.0;
        }
        log_const += log_gamma(i + 1.0);
      }
      log_vandermonde(x, false, &lv_x, &sv_x);
      log_vandermonde(y, false, &lv_y, &sv_y);
      break;
    case HCKind::orth_even:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double u = x[i] * y[j];
          log_entries(i, j) = u + std::log1p(std::exp(-2.0 * u));  // log 2cosh(u)
          signs(i, j) = 1.0;
        }
        log_const += log_gamma(2.0 * (i + 1) - 1.0) - std::log(2.0);
      }
      log_vandermonde(x, true, &lv_x, &sv_x);
      log_vandermonde(y, true, &lv_y, &sv_y);
      break;
    case HCKind::orth_odd:
    case HCKind::symplectic:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double u = x[i] * y[j];
          log_entries(i, j) = u + std::log1p(-std::exp(-2.0 * u));  // log 2sinh(u)
          signs(i, j) = 1.0;
        }
        log_const += log_gamma(2.0 * (i + 1)) - std::log(2.0);
        lv_x += std::log(x[i]);
        lv_y += std::log(y[i]);
      }
      {
        double a, sa, b, sb;
        log_vandermonde(x, true, &a, &sa);
        log_vandermonde(y, true, &b, &sb);
        lv_x += a;
        lv_y += b;
        sv_x = sa;
        sv_y = sb;
      }
      break;
  }
  const DetResult det = stable_det_log_entries(log_entries, signs);
  RhsValue r;
  r.sign = det.sign * sv_x * sv_y;
  r.log_abs = det.log_abs + log_const - lv_x - lv_y;
  r.value = r.sign == 0.0 ? 0.0 : r.sign * std::exp(r.log_abs);
  return r;
}

ComplexMatrix hc_matrix(const HCGroup& group, const std::vector<double>& spectrum) {
  const int n = group.size;
  if (static_cast<int>(spectrum.size()) != n) throw DimensionMismatch("hc_matrix: wrong length");
  switch (group.kind) {
    case HCKind::unitary: {
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      for (int i = 0; i < n; ++i) a(i, i) = spectrum[i];
      return a;
    }
    case HCKind::orth_even:
    case HCKind::orth_odd: {
      const Parity p = group.kind == HCKind::orth_even ? Parity::even : Parity::odd;
      return assemble_block({spectrum, p}).entries().cast<cdouble>();
    }
    case HCKind::symplectic: {
      // Quaternion-real blocks diag(i x_j, -i x_j) in the interleaved layout of haar_symplectic.
      ComplexMatrix a = ComplexMatrix::Zero(2 * n, 2 * n);
      for (int i = 0; i < n; ++i) {
        a(2 * i, 2 * i) = cdouble(0.0, spectrum[i]);
        a(2 * i + 1, 2 * i + 1) = cdouble(0.0, -spectrum[i]);
      }
      return a;
    }
  }
  return {};
}

namespace {

void check_structure(const HCGroup& group, const ComplexMatrix& m, const char* label) {
  const double scale = std::max(1.0, m.norm());
  const int expect = group.kind == HCKind::orth_even    ? 2 * group.size
                     : group.kind == HCKind::orth_odd   ? 2 * group.size + 1
                     : group.kind == HCKind::symplectic ? 2 * group.size
                                                        : group.size;
  if (m.rows() != expect || m.cols() != expect)
    throw DimensionMismatch(std::string("hc_lhs_mc: ") + label + " has the wrong size");
  double residual = 0.0;
  switch (group.kind) {
    case HCKind::unitary:
      residual = (m - m.adjoint()).norm();
      break;
    case HCKind::orth_even:
    case HCKind::orth_odd:
      residual = m.imag().norm() + (m.real() + m.real().transpose()).norm();
      break;
    case HCKind::symplectic: {
      // Quaternion-real (X Z = Z conj(X)) and anti-Hermitian.
      ComplexMatrix z = ComplexMatrix::Zero(expect, expect);
      for (int i = 0; i < group.size; ++i) {
        z(2 * i, 2 * i + 1) = 1.0;
        z(2 * i + 1, 2 * i) = -1.0;
      }
      residual = (m * z - z * m.conjugate()).norm() + (m + m.adjoint()).norm();
      break;
    }
  }
  if (residual > 1e-10 * scale)
    throw StructureViolation(std::string("hc_lhs_mc: ") + label + " violates the group structure",
                             residual);
}

}  // namespace

MeanEstimate hc_lhs_mc(const HCGroup& group, const ComplexMatrix& x, const ComplexMatrix& y,
                       std::size_t n_samples, const RngStream& rng, unsigned workers) {
  check_structure(group, x, "X");
  check_structure(group, y, "Y");
  const int dim = static_cast<int>(x.rows());
  std::function<double(RngStream&)> draw;
  switch (group.kind) {
    case HCKind::unitary:
      draw = [&x, &y, dim](RngStream& r) {
        const ComplexMatrix u = haar_unitary(dim, r);
        return std::exp((u * x * u.adjoint() * y).trace().real());
      };
      break;
    case HCKind::orth_even:
    case HCKind::orth_odd: {
      draw = [xr = RealMatrix(x.real()), yr = RealMatrix(y.real()), dim](RngStream& r) {
        const RealMatrix o = haar_orthogonal(dim, r);
        return std::exp(0.5 * (xr * o * yr * o.transpose()).trace());
      };
      break;
    }
    case HCKind::symplectic:
      draw = [&x, &y, n = group.size](RngStream& r) {
        const ComplexMatrix s = haar_symplectic(n, r);
        return std::exp(0.5 * (x * s * y.adjoint() * s.adjoint()).trace().real());
      };
      break;
  }
  return mc_mean(n_samples, rng, draw, workers);
}

HCResult hc_compare(const HCGroup& group, const std::vector<double>& x,
                    const std::vector<double>& y, std::size_t n_samples, const RngStream& rng,
                    unsigned workers) {
  const RhsValue exact = hc_rhs(group, x, y);
  const MeanEstimate mc =
      hc_lhs_mc(group, hc_matrix(group, x), hc_matrix(group, y), n_samples, rng, workers);
  HCResult r;
  r.exact_rhs = exact.value;
  r.log_abs_rhs = exact.log_abs;
  r.mc_mean = mc.mean;
  r.mc_stderr = mc.std_error;
  r.n_samples = mc.n;
  if (mc.std_error > 0.0) {
    r.z_score = (mc.mean - exact.value) / mc.std_error;
  } else {
    r.z_score = mc.mean == exact.value ? 0.0 : std::numeric_limits<double>::infinity();
  }
  r.passed = std::abs(r.z_score) <= kHCZThreshold;
  return r;
}

}  // namespace rmt

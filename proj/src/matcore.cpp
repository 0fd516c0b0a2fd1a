#include "rmt/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmt {

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw InvalidSpec("parity must be 'even' or 'odd', got '" + s + "'");
}

AntisymmetricReal::AntisymmetricReal(int n_dim) : a_(RealMatrix::Zero(n_dim, n_dim)) {}

AntisymmetricReal AntisymmetricReal::from_matrix(const RealMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw DimensionMismatch("anti-symmetric matrix must be square");
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  const double residual = (a + a.transpose()).norm() / scale;
  if (a.norm() > 0 && residual > tol)
    throw StructureViolation("matrix is not anti-symmetric within tolerance", residual);
  AntisymmetricReal out(static_cast<int>(a.rows()));
  out.a_ = 0.5 * (a - a.transpose());
  return out;
}

void AntisymmetricReal::set(int j, int k, double v) {
  if (j == k) throw InvalidSpec("diagonal of an anti-symmetric matrix is fixed at 0");
  a_(j, k) = v;
  a_(k, j) = -v;
}

ComplexMatrix AntisymmetricReal::hermitian_form() const {
  return cdouble(0.0, 1.0) * a_.cast<cdouble>();
}

AntiSelfDual::AntiSelfDual(ComplexMatrix h1, ComplexMatrix h2, double tol)
    : h1_(std::move(h1)), h2_(std::move(h2)) {
  if (h1_.rows() != h1_.cols() || h2_.rows() != h2_.cols() || h1_.rows() != h2_.rows())
    throw DimensionMismatch("anti-self-dual blocks must be square and of equal size");
  const double scale = std::max({h1_.norm(), h2_.norm(), std::numeric_limits<double>::min()});
  const double r1 = (h1_ + h1_.adjoint()).norm() / scale;
  const double r2 = (h2_ - h2_.transpose()).norm() / scale;
  if (r1 > tol) throw StructureViolation("H1 is not anti-Hermitian", r1);
  if (r2 > tol) throw StructureViolation("H2 is not symmetric", r2);
}

ComplexMatrix AntiSelfDual::assembled() const {
  const Eigen::Index n = h1_.rows();
  ComplexMatrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = h1_;
  h.topRightCorner(n, n) = h2_;
  h.bottomLeftCorner(n, n) = -h2_.conjugate();
  h.bottomRightCorner(n, n) = h1_.conjugate();
  return h;
}

ComplexMatrix AntiSelfDual::hermitian_form() const { return cdouble(0.0, 1.0) * assembled(); }

double AntiSelfDual::duality_residual(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows() / 2;
  ComplexMatrix j = ComplexMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -ComplexMatrix::Identity(n, n);
  return (h + j * h.transpose() * j.transpose()).norm();
}

PositiveSpectrum make_spectrum(std::vector<double> values, bool has_zero_mode) {
  std::sort(values.begin(), values.end());
  PositiveSpectrum s;
  s.values = std::move(values);
  s.has_zero_mode = has_zero_mode;
  return s;
}

namespace {

// Sort eigenvalues of a Hermitian matrix with +/- symmetric spectrum and pair
// them from the outside in.
PositiveSpectrum pair_spectrum(const Eigen::VectorXd& evals_sorted, double norm) {
  const Eigen::Index n = evals_sorted.size();
  PositiveSpectrum out;
  out.has_zero_mode = (n % 2 == 1);
  double residual = 0.0;
  for (Eigen::Index k = 0; k < n / 2; ++k) {
    const double lo = evals_sorted(k), hi = evals_sorted(n - 1 - k);
    residual = std::max(residual, std::abs(lo + hi));
    out.values.push_back(0.5 * (hi - lo));
  }
  if (out.has_zero_mode) residual = std::max(residual, std::abs(evals_sorted(n / 2)));
  std::sort(out.values.begin(), out.values.end());
  out.pairing_residual = residual;
  if (residual > 1e-8 * std::max(norm, 1.0))
    throw StructureViolation("spectrum is not symmetric under negation", residual);
  return out;
}

}  // namespace

PositiveSpectrum positive_spectrum_hermitian(const ComplexMatrix& h, double tol) {
  if (h.rows() != h.cols()) throw DimensionMismatch("matrix must be square");
  const double scale = std::max(h.norm(), std::numeric_limits<double>::min());
  const double herm = (h - h.adjoint()).norm() / scale;
  if (h.norm() > 0 && herm > tol) throw StructureViolation("matrix is not Hermitian", herm);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return pair_spectrum(es.eigenvalues(), h.norm());
}

PositiveSpectrum positive_spectrum(const AntisymmetricReal& a, double tol) {
  (void)tol;  // structure is exact by construction
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.hermitian_form(), Eigen::EigenvaluesOnly);
  return pair_spectrum(es.eigenvalues(), a.entries().norm());
}

PositiveSpectrum positive_spectrum(const AntiSelfDual& h, double tol) {
  const ComplexMatrix hf = h.hermitian_form();
  const double res = AntiSelfDual::duality_residual(h.assembled());
  if (res > tol * std::max(hf.norm(), 1.0)) throw StructureViolation("duality residual too large", res);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hf, Eigen::EigenvaluesOnly);
  return pair_spectrum(es.eigenvalues(), hf.norm());
}

AntisymmetricReal assemble_block(const BlockSpec& spec) {
  for (double v : spec.values)
    if (!(v > 0)) throw InvalidSpec("block values must be positive");
  const int m = static_cast<int>(spec.values.size());
  const int offset = spec.parity == Parity::odd ? 1 : 0;
  AntisymmetricReal a(2 * m + offset);
  for (int j = 0; j < m; ++j) a.set(offset + 2 * j, offset + 2 * j + 1, spec.values[j]);
  return a;
}

double vandermonde(const std::vector<double>& u, Parity parity) {
  double v = 1.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    for (std::size_t k = j + 1; k < u.size(); ++k) v *= (u[k] * u[k] - u[j] * u[j]);
  if (parity == Parity::odd)
    for (double x : u) v *= x;
  return v;
}

double vandermonde_plain(const std::vector<double>& u) {
  double v = 1.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    for (std::size_t k = j + 1; k < u.size(); ++k) v *= (u[k] - u[j]);
  return v;
}

double DetResult::value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log_abs); }

cdouble ComplexDetResult::value() const {
  return std::abs(phase) == 0.0 ? cdouble(0.0, 0.0) : phase * std::exp(log_abs);
}

namespace {

template <class Matrix>
bool scale_rows(Matrix& a, double& log_scale) {
  log_scale = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double s = a.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) return false;
    a.row(i) /= s;
    log_scale += std::log(s);
  }
  return true;
}

}  // namespace

DetResult stable_det(const RealMatrix& in) {
  if (in.rows() != in.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  DetResult r;
  if (in.rows() == 0) {
    r.sign = 1.0;
    r.log_abs = 0.0;
    return r;
  }
  RealMatrix a = in;
  double log_scale = 0.0;
  if (!scale_rows(a, log_scale)) return r;
  Eigen::FullPivLU<RealMatrix> lu(a);
  double sign = lu.permutationP().determinant() * lu.permutationQ().determinant();
  double log_abs = log_scale;
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double d = u(i, i);
    if (d == 0.0) return DetResult{};
    if (d < 0) sign = -sign;
    log_abs += std::log(std::abs(d));
  }
  r.sign = sign;
  r.log_abs = log_abs;
  return r;
}

ComplexDetResult stable_det(const ComplexMatrix& in) {
  if (in.rows() != in.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  ComplexDetResult r;
  if (in.rows() == 0) {
    r.phase = 1.0;
    r.log_abs = 0.0;
    return r;
  }
  ComplexMatrix a = in;
  double log_scale = 0.0;
  if (!scale_rows(a, log_scale)) return r;
  Eigen::FullPivLU<ComplexMatrix> lu(a);
  cdouble phase = lu.permutationP().determinant() * lu.permutationQ().determinant();
  double log_abs = log_scale;
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const cdouble d = u(i, i);
    if (std::abs(d) == 0.0) return ComplexDetResult{};
    phase *= d / std::abs(d);
    log_abs += std::log(std::abs(d));
  }
  r.phase = phase;
  r.log_abs = log_abs;
  return r;
}

DetResult stable_det_log_entries(const RealMatrix& log_abs, const RealMatrix& sign) {
  const Eigen::Index n = log_abs.rows();
  if (n != log_abs.cols() || sign.rows() != n || sign.cols() != n)
    throw DimensionMismatch("log-entry determinant needs matching square inputs");
  RealMatrix a(n, n);
  double shift = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (sign(i, j) != 0.0) row_max = std::max(row_max, log_abs(i, j));
    if (!std::isfinite(row_max)) return DetResult{};
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = sign(i, j) == 0.0 ? 0.0 : sign(i, j) * std::exp(log_abs(i, j) - row_max);
    shift += row_max;
  }
  DetResult r = stable_det(a);
  if (r.sign != 0.0) r.log_abs += shift;
  return r;
}

}  // namespace rmt

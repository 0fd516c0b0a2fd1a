#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "rmt/errors.hpp"

namespace rmt {

using cdouble = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Parity { even, odd };

std::string to_string(Parity p);
Parity parse_parity(const std::string& s);

// Real square matrix with A^T = -A, exact by construction.
class AntisymmetricReal {
 public:
  explicit AntisymmetricReal(int n_dim = 0);

  // Validates the anti-symmetry residual ||A + A^T||_F / ||A||_F against tol,
  // then stores the exactly anti-symmetric part.
  static AntisymmetricReal from_matrix(const RealMatrix& a, double tol = 1e-10);

  int n_dim() const { return static_cast<int>(a_.rows()); }
  const RealMatrix& entries() const { return a_; }
  double operator()(int j, int k) const { return a_(j, k); }

  // Sets entry (j,k) to v and (k,j) to -v; j != k required.
  void set(int j, int k, double v);

  // The Hermitian form iA.
  ComplexMatrix hermitian_form() const;

 private:
  RealMatrix a_;
};

// 2n x 2n block matrix [[H1, H2], [-conj(H2), conj(H1)]] with H1 anti-Hermitian
// and H2 symmetric.
class AntiSelfDual {
 public:
  AntiSelfDual() = default;
  AntiSelfDual(ComplexMatrix h1, ComplexMatrix h2, double tol = 1e-10);

  int n_blocks() const { return static_cast<int>(h1_.rows()); }
  const ComplexMatrix& h1() const { return h1_; }
  const ComplexMatrix& h2() const { return h2_; }

  ComplexMatrix assembled() const;
  ComplexMatrix hermitian_form() const;

  // ||H + H^D||_F with H^D = J H^T J^T, J = [[0, I], [-I, 0]].
  static double duality_residual(const ComplexMatrix& h);

 private:
  ComplexMatrix h1_, h2_;
};

struct PositiveSpectrum {
  std::vector<double> values;  // ascending, nonnegative
  bool has_zero_mode = false;
  double pairing_residual = 0.0;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

PositiveSpectrum make_spectrum(std::vector<double> values, bool has_zero_mode = false);

PositiveSpectrum positive_spectrum(const AntisymmetricReal& a, double tol = 1e-10);
PositiveSpectrum positive_spectrum(const AntiSelfDual& h, double tol = 1e-10);
// Hermitian matrix H with H^T = -H (purely imaginary), e.g. iA for real anti-symmetric A.
PositiveSpectrum positive_spectrum_hermitian(const ComplexMatrix& h, double tol = 1e-10);

struct BlockSpec {
  std::vector<double> values;
  Parity parity = Parity::even;
};

// diag([[0,x_1],[-x_1,0]], ...); odd parity prepends a scalar 0 block.
AntisymmetricReal assemble_block(const BlockSpec& spec);

// prod_{j<k}(u_k^2 - u_j^2), times prod u_j for odd parity.
double vandermonde(const std::vector<double>& u, Parity parity);
// prod_{j<k}(u_k - u_j).
double vandermonde_plain(const std::vector<double>& u);

// Determinant in sign/log-magnitude form.
struct DetResult {
  double sign = 0.0;
  double log_abs = -std::numeric_limits<double>::infinity();
  double value() const;
};

struct ComplexDetResult {
  cdouble phase{0.0, 0.0};
  double log_abs = -std::numeric_limits<double>::infinity();
  cdouble value() const;
};

DetResult stable_det(const RealMatrix& a);
ComplexDetResult stable_det(const ComplexMatrix& a);

// Determinant of the matrix with entries sign(j,k) * exp(log_abs(j,k)); used when
// the entries themselves are not representable in double precision.
DetResult stable_det_log_entries(const RealMatrix& log_abs, const RealMatrix& sign);

}  // namespace rmt

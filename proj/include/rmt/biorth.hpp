#pragma once

#include <functional>
#include <vector>

#include "rmt/matcore.hpp"
#include "rmt/specfun.hpp"

namespace rmt {

// Bimoments int_0^inf x^{2k} g_l(x) dx of the elementary-product weights
// g_l = G^{M,0}_{0,M}(- ; 2nu_M, ..., 2nu_2, 2nu_1 + l | x), k, l = 0..m.
struct BimomentMatrix {
  int m = 0;
  int M = 1;
  std::vector<double> nu;
  RealMatrix log_abs;  // all entries are positive

  static BimomentMatrix build(int m, int M, const std::vector<double>& nu);
  DetResult determinant() const;
  // log of prod_{k=0}^m 2^k k! prod_i Gamma(2 nu_i + 2k + 1).
  double log_det_closed_form() const;
};

double bimoment_log(int k, int l, int M, const std::vector<double>& nu);

// Biorthogonal polynomial in x^2, normalized with unit coefficient of x^{2n}.
double p_n(double x, int n, int M, const std::vector<double>& nu);
// Coefficients of x^{2k}, k = 0..n.
std::vector<double> p_n_coefficients(int n, int M, const std::vector<double>& nu);
// The same polynomial through the terminating 1F_{2M} sum and the G^{1,0} sum.
double p_n_hypergeometric(double x, int n, int M, const std::vector<double>& nu);
double p_n_meijer(double x, int n, int M, const std::vector<double>& nu);
// p_n divided by its leading coefficient (which is 1 in this normalization).
double p_n_monic(double x, int n, int M, const std::vector<double>& nu);

// log of n! prod_i 2^{2n} Gamma(nu_i + n + 1) Gamma(nu_i + n + 1/2).
double log_h_n(int n, int M, const std::vector<double>& nu);

// Coefficients c_l with phi_n = sum_l c_l g_l, from the bimoment system solved
// in 50-digit arithmetic.
std::vector<double> phi_n_coefficients(int n, int M, const std::vector<double>& nu);
Estimate phi_n_solve(double x, int n, int M, const std::vector<double>& nu);
// (-1)^n x / (2^{2M-1} h_n) G^{2M,1}_{1,2M+1}(-n ; nu_1, nu_1 - 1/2, ..., 0 | x^2 / 2^{2M}).
Estimate phi_n_mellin_barnes(double x, int n, int M, const std::vector<double>& nu);
// Solve path, verified against the contour path; throws CrossCheckFailure.
Estimate phi_n(double x, int n, int M, const std::vector<double>& nu);

// Biorthogonal pair of the complex product with K factors (nu_0 = 0 implicit):
// P is the monic polynomial, Q the dual function.
struct PQValue {
  double P = 0.0;
  Estimate Q;
};
PQValue pq_complex(int n, int K, const std::vector<double>& nu, double x);
// The polynomial exactly as the display (-1)^n prod Gamma(n + nu_j + 1) G^{0,1}(...)
// reads under the standard Meijer-G convention; equals (-1)^n P_n.
double P_n_literal(int n, int K, const std::vector<double>& nu, double x);

// int_0^inf f_j(x) h_k(x) dx for all pairs, by Gauss-Legendre panels in u = sqrt(x)
// with each function sampled once per node. The panel width is halved once for
// the error estimate.
struct GramQuadrature {
  RealMatrix value;
  RealMatrix err;
};
GramQuadrature gram_by_quadrature(const std::vector<std::function<double(double)>>& left,
                                  const std::vector<std::function<double(double)>>& right);

struct BiorthCheck {
  int n_max = 0;
  int M = 1;
  std::vector<double> nu;
  RealMatrix exact;       // from exact Mellin moments of the contour representation
  RealMatrix quadrature;  // numeric integrals with contour-path phi_k
  // Entrywise panel-rule differences. For deep products these are dominated by the
  // rounding of phi values times the size of the cancelling terms (about 1e10 for
  // p_4 phi_0 at M = 2), which puts the attainable accuracy near 1e-5.
  RealMatrix quadrature_err;
  double exact_max_dev = 0.0;
  double quadrature_max_dev = 0.0;
  bool quadrature_consistent = false;  // |Q - I| <= 1e-6 + 2 err entrywise
  double solve_vs_contour_max_diff = 0.0;  // pointwise, on a sample grid
};
BiorthCheck biorth_check(int n_max, int M, const std::vector<double>& nu);

}  // namespace rmt

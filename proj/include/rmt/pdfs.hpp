#pragma once

#include <optional>
#include <vector>

#include "rmt/matcore.hpp"
#include "rmt/sampler.hpp"
#include "rmt/specfun.hpp"

namespace rmt {

// All densities are with respect to Lebesgue measure on the ordered cone
// 0 < lambda_1 < ... < lambda_n.
struct DensityResult {
  double value = 0.0;      // may be negative by at most err
  double log_value = 0.0;  // log|value|
  double err = 0.0;        // propagated absolute error
};

// Delta^parity(lambda) det[g_k(lambda_j)] / Z.
struct PolynomialEnsemble {
  int n = 1;
  WeightFamily weights;
  Parity parity = Parity::even;     // selects the Vandermonde factor
  std::optional<double> log_norm;   // log Z; empty means unnormalized

  DensityResult density(const std::vector<double>& lam) const;
};

// Sum ensembles Omega A Omega^T + X B X^T + sqrt(t) Y (and the anti-self-dual
// analogue, which shares the odd law).
DensityResult density_theorem_even(const PositiveSpectrum& lam, const PositiveSpectrum& a,
                                   const std::vector<double>& b_eigs, double t);
DensityResult density_theorem_odd(const PositiveSpectrum& lam, const PositiveSpectrum& a,
                                  const std::vector<double>& b_eigs, double t);
inline DensityResult density_theorem_dual(const PositiveSpectrum& lam, const PositiveSpectrum& a,
                                          const std::vector<double>& b_eigs, double t) {
  return density_theorem_odd(lam, a, b_eigs, t);
}

// Rank-two case t = 0, B = b1 [[0,i],[-i,0]] with the kernel in closed form.
DensityResult density_rank_two(const PositiveSpectrum& lam, const PositiveSpectrum& a, double b1,
                               Parity parity);
// Closed-form kernel entry of the rank-two case.
double rank_two_kernel(double a_i, double lambda, double b1, Parity parity);

// X B X^T with X of size 2n x 2m (odd: (2n+1) x (2m+1)) and B = diag(b) (x) [[0,i],[-i,0]].
DensityResult density_fixed_B(const PositiveSpectrum& lam, const std::vector<double>& b, int n, int m,
                              Parity parity);

// The b -> 1 limit of density_fixed_B.
DensityResult density_lmb(const PositiveSpectrum& lam, int n, int m, Parity parity);

// Polynomial ensemble describing the positive eigenvalues of the product B_M.
PolynomialEnsemble product_ensemble(const EnsembleSpec& spec);
DensityResult density_product(const PositiveSpectrum& lam, const EnsembleSpec& spec);
// log int_0^inf lambda^{2k} g_l(lambda) d lambda for the weights of product_ensemble.
double product_log_bimoment(const EnsembleSpec& spec, int k, int l);

// Squared singular values of X_K ... X_1 (complex Gaussian), nu_j > -1.
DensityResult density_complex_product(const std::vector<double>& x, int m, int K,
                                      const std::vector<double>& nu);
// log of the ordered-cone normalization prod_{i=1}^m Gamma(i) prod_j Gamma(nu_j + i).
double complex_product_log_norm(int m, const std::vector<double>& nu);

// Integral over the interlacing region of the separable exponential integrand that
// reproduces det[rank_two_kernel(a_i, lam_j, 1, parity)].
double defosseux_det_integral(const PositiveSpectrum& lam, const PositiveSpectrum& a, Parity parity);

}  // namespace rmt

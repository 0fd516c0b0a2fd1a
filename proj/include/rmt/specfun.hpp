#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/matcore.hpp"

namespace rmt {

// A value with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double err = 0.0;
};

using Weight = std::function<Estimate(double)>;

enum class Provenance { closed_form, quadrature, mellin_barnes, recursion };

struct WeightFamily {
  std::vector<Weight> evaluators;
  Provenance provenance = Provenance::closed_form;
  std::size_t size() const { return evaluators.size(); }
  Estimate operator()(std::size_t k, double x) const { return evaluators[k](x); }
};

// ---- Gamma-type functions ----

// log|Gamma(x)| with the sign of Gamma(x) in *sign (reentrant).
double log_gamma(double x, int* sign = nullptr);
// Principal-branch-agnostic log Gamma(z); only exp() of the result is meaningful
// for the imaginary part.
std::complex<double> log_gamma(std::complex<double> z);
// log|(a)_k| with sign.
double log_pochhammer(double a, int k, int* sign = nullptr);
double digamma(double x);

// Sum_{k=0}^n (-n)_k / prod_i (b_i)_k * z^k / k!.
double hyp_1Fq_terminating(int n, const std::vector<double>& b, double z);

// ---- Meijer G ----

enum class Orientation { standard, reciprocal_argument };

struct MeijerGSpec {
  std::vector<double> b_params;
  std::vector<double> a_params;
  Orientation orientation = Orientation::standard;
};

// G^{q,0}_{0,q}(- ; b | x) by a Mellin-Barnes contour integral.
Estimate meijer_g_q0(const MeijerGSpec& spec, double x);
Estimate meijer_g_q0(const std::vector<double>& b, double x);
// Contour evaluation without the q = 1 closed-form shortcut.
Estimate meijer_g_q0_contour(const std::vector<double>& b, double x);

// G^{q,1}_{1,q+1}(-n ; b_1..b_q, 0 | x), n a nonnegative integer.
Estimate meijer_g_q1(int n, const std::vector<double>& b, double x);

// G^{1,0}_{1,q+1}(n+1 ; 0, c_1..c_q | x): a terminating sum (polynomial in x).
double meijer_g_10_terminating(int n, const std::vector<double>& c, double x);
// G^{0,1}_{1,q+1}(n+1 ; 0, c_1..c_q | x): a terminating sum (polynomial in x).
double meijer_g_01_terminating(int n, const std::vector<double>& c, double x);

// ---- weights of the product ensembles (index j is 0-based) ----

// lambda -> int_0^inf e^{-b} b^{alpha} prev(lambda/b) db with alpha = 2 nu_s - 1
// (even) or 2 nu_s (odd).
Weight g_recursion_step(Weight prev, double nu_s, Parity parity);

// Elementary initial matrix: G^{M,0}_{0,M}(- ; 2nu_M, ..., 2nu_2, 2nu_1 + j | lambda);
// odd parity raises every bottom parameter by 1.
Weight g_elementary(int j, int M, const std::vector<double>& nu, Parity parity = Parity::even);
std::vector<double> g_elementary_params(int j, const std::vector<double>& nu, Parity parity);

// Gaussian initial matrix (entry weight exp(-sum a_jk^2)).
Weight g_gauss(int j, int M, const std::vector<double>& nu, Parity parity = Parity::even);
// Bottom parameters and prefactor of the Gaussian weight in the variable lambda^2/4^M.
std::vector<double> g_gauss_params(int j, const std::vector<double>& nu, Parity parity);
double g_gauss_prefactor(const std::vector<double>& nu, Parity parity);

// Oscillatory kernel of the sum ensembles:
// (2/pi) int_0^inf e^{-t c^2/2} cs(a c) cs(lambda c) / prod_l (1 + c^2 b_l^2) dc,
// cs = cos (even) or sin (odd).
Weight gk_integral(double a_k, const std::vector<double>& b_eigs, double t, Parity parity);

// int_0^inf e^{-t c^2/2} cos(omega c) / prod_l (1 + c^2 b_l^2) dc.
Estimate damped_cosine_transform(double omega, const std::vector<double>& b_eigs, double t);

}  // namespace rmt

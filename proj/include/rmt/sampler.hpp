#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rmt/matcore.hpp"

namespace rmt {

// Deterministic random stream keyed by (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Child stream with a stream id derived from (stream_id, index).
  RngStream substream(std::uint64_t index) const;

  double normal() { return normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_, stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

enum class ComplexScale {
  unit_parts,  // real and imaginary parts N(0,1)
  half_parts   // parts N(0,1/2): density proportional to exp(-Tr G^dagger G)
};

RealMatrix gaussian_real(int rows, int cols, RngStream& rng);
ComplexMatrix gaussian_complex(int rows, int cols, RngStream& rng,
                               ComplexScale scale = ComplexScale::unit_parts);

RealMatrix haar_orthogonal(int n, RngStream& rng);
ComplexMatrix haar_unitary(int n, RngStream& rng);

// Haar element of USp(2N) = {S unitary : S Z S^T = Z}, Z = I_N (x) [[0,1],[-1,0]].
// Rows/columns are interleaved so that each 2x2 block has the form [[z, w], [-conj(w), conj(z)]].
ComplexMatrix haar_symplectic(int n, RngStream& rng);
double symplectic_residual(const ComplexMatrix& s);
ComplexMatrix interleaved_to_block(const ComplexMatrix& s);

// Above-diagonal entries i.i.d. N(0, entry_variance).
AntisymmetricReal gaussian_antisymmetric(int n, RngStream& rng, double entry_variance = 1.0);

// Assembled Hermitian form Y = i H has density proportional to exp(-Tr Y^2 / 4).
AntiSelfDual gaussian_anti_self_dual(int n, RngStream& rng);

enum class B0Kind { elementary, gaussian_antisym, fixed };

struct EnsembleSpec {
  int m = 1;
  int M = 0;
  std::vector<double> nu;        // length M, nondecreasing, nu_0 = 0 implicit
  Parity parity = Parity::even;
  B0Kind b0_kind = B0Kind::elementary;
  std::vector<double> b0_values; // used when b0_kind == fixed
  double t = 0.0;                // weight of the Gaussian sum term
  std::vector<double> a_values;  // optional Omega A Omega^T summand

  // Gaussian B0 entries follow the exp(-sum_{j<k} a_jk^2) weight of the product
  // formulas (variance 1/2).
  double gaussian_b0_variance = 0.5;

  void validate() const;
  int dimension(int level) const;  // size of B_level
};

PositiveSpectrum sample_product(const EnsembleSpec& spec, RngStream& rng);

// M = Omega diag(a) Omega^T + X B X^T + sqrt(t) Y with Omega Haar orthogonal,
// X a (2n[+1]) x 2|b| standard Gaussian and Y Gaussian anti-symmetric.
struct SumSpec {
  std::vector<double> a;  // length n, may be all distinct positive or empty (then zero)
  int n = 1;
  std::vector<double> b;
  double t = 0.0;
  Parity parity = Parity::even;
};
PositiveSpectrum sample_sum(const SumSpec& spec, RngStream& rng);

// Anti-self-dual analogue: M = Omega A Omega^dagger + X B X^dagger + sqrt(t) Y,
// Omega Haar on USp(2n), X = [[X1, X2], [-conj(X2), conj(X1)]].
PositiveSpectrum sample_dual_sum(const SumSpec& spec, RngStream& rng);

// Rank-two perturbation diag(a) (x) [[0,i],[-i,0]] + X [[0, i b1], [-i b1, 0]] X^T.
struct RankTwoSample {
  ComplexMatrix unperturbed, perturbed;
  PositiveSpectrum lambda;
};
RankTwoSample sample_rank_two(const std::vector<double>& a, double b1, RngStream& rng);

// Complex reference ensemble, m = 1: a product of independent Gamma(shape) draws.
double sample_gamma_product(const std::vector<double>& shapes, RngStream& rng);

// Complex reference ensemble, m >= 1 with integer exponents: squared singular values
// of X_K ... X_1 with X_j of size (m + nu_j) x (m + nu_{j-1}), density exp(-Tr X^dagger X).
std::vector<double> sample_complex_product(int m, const std::vector<double>& nu, RngStream& rng);

// Monte Carlo helpers partitioned into fixed-size batches by stream id.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};
MeanEstimate mc_mean(std::size_t n_samples, const RngStream& base,
                     const std::function<double(RngStream&)>& draw, unsigned workers = 0);
std::vector<double> mc_collect(std::size_t n_samples, const RngStream& base,
                               const std::function<double(RngStream&)>& draw, unsigned workers = 0);

constexpr std::size_t kBatchSize = 1000;

}  // namespace rmt

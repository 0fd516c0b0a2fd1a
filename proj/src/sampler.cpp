#include "rmt/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/parallel.hpp"

namespace rmt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::uint64_t a = splitmix64(seed), b = splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(stream_id_ * 0x9E3779B97F4A7C15ULL + splitmix64(index + 1)));
}

RealMatrix gaussian_real(int rows, int cols, RngStream& rng) {
  RealMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

ComplexMatrix gaussian_complex(int rows, int cols, RngStream& rng, ComplexScale scale) {
  const double s = scale == ComplexScale::unit_parts ? 1.0 : std::sqrt(0.5);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = rng.normal(), im = rng.normal();
      g(i, j) = cdouble(s * re, s * im);
    }
  return g;
}

RealMatrix haar_orthogonal(int n, RngStream& rng) {
  const RealMatrix g = gaussian_real(n, n, rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

ComplexMatrix haar_unitary(int n, RngStream& rng) {
  const ComplexMatrix g = gaussian_complex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

ComplexMatrix haar_symplectic(int n, RngStream& rng) {
  // Gaussian quaternion matrix, then Gram-Schmidt over column pairs; each pair
  // spans one quaternionic column, and projections are by right multiplication
  // with 2x2 quaternion blocks so the block form is preserved.
  ComplexMatrix s(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cdouble z(rng.normal(), rng.normal()), w(rng.normal(), rng.normal());
      s(2 * j, 2 * k) = z;
      s(2 * j, 2 * k + 1) = w;
      s(2 * j + 1, 2 * k) = -std::conj(w);
      s(2 * j + 1, 2 * k + 1) = std::conj(z);
    }
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < n; ++k) {
      auto vk = s.middleCols(2 * k, 2);
      for (int l = 0; l < k; ++l) {
        const auto vl = s.middleCols(2 * l, 2);
        const Eigen::Matrix2cd proj = vl.adjoint() * vk;
        vk -= vl * proj;
      }
      const double nrm = vk.col(0).norm();
      vk /= nrm;
    }
  }
  return s;
}

double symplectic_residual(const ComplexMatrix& s) {
  const Eigen::Index n2 = s.rows();
  ComplexMatrix z = ComplexMatrix::Zero(n2, n2);
  for (Eigen::Index j = 0; j + 1 < n2; j += 2) {
    z(j, j + 1) = 1.0;
    z(j + 1, j) = -1.0;
  }
  const double sympl = (s * z * s.transpose() - z).norm();
  const double unit = (s.adjoint() * s - ComplexMatrix::Identity(n2, n2)).norm();
  return std::max(sympl, unit);
}

ComplexMatrix interleaved_to_block(const ComplexMatrix& s) {
  const Eigen::Index n = s.rows() / 2;
  Eigen::PermutationMatrix<Eigen::Dynamic> p(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    p.indices()(2 * k) = static_cast<int>(k);
    p.indices()(2 * k + 1) = static_cast<int>(n + k);
  }
  return p * s * p.transpose();
}

AntisymmetricReal gaussian_antisymmetric(int n, RngStream& rng, double entry_variance) {
  if (n < 2) throw InvalidSpec("gaussian_antisymmetric needs n >= 2");
  const double sd = std::sqrt(entry_variance);
  AntisymmetricReal a(n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) a.set(j, k, sd * rng.normal());
  return a;
}

AntiSelfDual gaussian_anti_self_dual(int n, RngStream& rng) {
  if (n < 1) throw InvalidSpec("gaussian_anti_self_dual needs n >= 1");
  // Tr Y^2 = 2(||H1||^2 + ||H2||^2); the weight exp(-Tr Y^2/4) gives unit-variance
  // diagonal parameters and variance-1/2 parts off the diagonal.
  const double off = std::sqrt(0.5);
  ComplexMatrix h1 = ComplexMatrix::Zero(n, n), h2 = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    h1(j, j) = cdouble(0.0, rng.normal());
    const double re = rng.normal(), im = rng.normal();
    h2(j, j) = cdouble(re, im);
    for (int k = j + 1; k < n; ++k) {
      const double zr = rng.normal(), zi = rng.normal();
      const cdouble z(off * zr, off * zi);
      h1(j, k) = z;
      h1(k, j) = -std::conj(z);
      const double wr = rng.normal(), wi = rng.normal();
      const cdouble w(off * wr, off * wi);
      h2(j, k) = w;
      h2(k, j) = w;
    }
  }
  return AntiSelfDual(std::move(h1), std::move(h2));
}

void EnsembleSpec::validate() const {
  if (m < 1) throw InvalidSpec("m must be positive");
  if (M < 0) throw InvalidSpec("M must be nonnegative");
  if (static_cast<int>(nu.size()) != M) throw InvalidSpec("nu must have length M");
  double prev = 0.0;
  for (double v : nu) {
    if (v < 0) throw InvalidSpec("nu entries must be nonnegative");
    if (v + 1e-12 < prev) throw InvalidSpec("nu must be nondecreasing");
    if (!is_integer(2 * v)) throw InvalidSpec("nu entries must be integers or half-integers");
    prev = v;
  }
  if (t < 0) throw InvalidSpec("t must be nonnegative");
  if (b0_kind == B0Kind::fixed) {
    if (static_cast<int>(b0_values.size()) != m) throw InvalidSpec("fixed B0 needs m values");
    for (double v : b0_values)
      if (!(v > 0)) throw InvalidSpec("fixed B0 values must be positive");
  }
  if (!a_values.empty()) {
    if (static_cast<int>(a_values.size()) != dimension(M) / 2)
      throw DimensionMismatch("a_values length must equal half the output dimension");
    for (double v : a_values)
      if (!(v > 0)) throw InvalidSpec("a_values must be positive");
  }
}

int EnsembleSpec::dimension(int level) const {
  const double nu_l = level == 0 ? 0.0 : nu.at(level - 1);
  return static_cast<int>(std::lround(2.0 * (m + nu_l))) + (parity == Parity::odd ? 1 : 0);
}

PositiveSpectrum sample_product(const EnsembleSpec& spec, RngStream& rng) {
  spec.validate();
  for (double v : spec.nu)
    if (!is_integer(v)) throw DimensionMismatch("real products need integer nu");
  const bool has_sum = spec.t > 0 || !spec.a_values.empty();
  if (spec.M == 0 && !has_sum && spec.b0_kind == B0Kind::fixed)
    return make_spectrum(spec.b0_values, spec.parity == Parity::odd);

  RealMatrix b;
  switch (spec.b0_kind) {
    case B0Kind::elementary:
      b = assemble_block({std::vector<double>(spec.m, 1.0), spec.parity}).entries();
      break;
    case B0Kind::fixed:
      b = assemble_block({spec.b0_values, spec.parity}).entries();
      break;
    case B0Kind::gaussian_antisym:
      b = gaussian_antisymmetric(spec.dimension(0), rng, spec.gaussian_b0_variance).entries();
      break;
  }
  for (int level = 1; level <= spec.M; ++level) {
    const RealMatrix x = gaussian_real(spec.dimension(level), spec.dimension(level - 1), rng);
    b = x * b * x.transpose();
  }
  const int d = spec.dimension(spec.M);
  if (!spec.a_values.empty()) {
    const RealMatrix omega = haar_orthogonal(d, rng);
    b += omega * assemble_block({spec.a_values, spec.parity}).entries() * omega.transpose();
  }
  if (spec.t > 0) b += std::sqrt(spec.t) * gaussian_antisymmetric(d, rng).entries();

  PositiveSpectrum full = positive_spectrum(AntisymmetricReal::from_matrix(b, 1e-8));
  if (!has_sum && static_cast<int>(full.values.size()) > spec.m) {
    // The product has rank 2m; the remaining values are rounding-level zeros.
    full.values.erase(full.values.begin(), full.values.end() - spec.m);
  }
  return full;
}

PositiveSpectrum sample_sum(const SumSpec& spec, RngStream& rng) {
  const int n = spec.a.empty() ? spec.n : static_cast<int>(spec.a.size());
  const int d = 2 * n + (spec.parity == Parity::odd ? 1 : 0);
  RealMatrix mat = RealMatrix::Zero(d, d);
  if (!spec.a.empty()) {
    const RealMatrix omega = haar_orthogonal(d, rng);
    mat += omega * assemble_block({spec.a, spec.parity}).entries() * omega.transpose();
  }
  if (!spec.b.empty()) {
    const int l = 2 * static_cast<int>(spec.b.size());
    const RealMatrix x = gaussian_real(d, l, rng);
    mat += x * assemble_block({spec.b, Parity::even}).entries() * x.transpose();
  }
  if (spec.t > 0) mat += std::sqrt(spec.t) * gaussian_antisymmetric(d, rng).entries();
  return positive_spectrum(AntisymmetricReal::from_matrix(mat, 1e-8));
}

namespace {

// Hermitian anti-self-dual matrix with positive eigenvalues v: i * blockdiag(-i v, i v).
ComplexMatrix dual_diagonal(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  ComplexMatrix d = ComplexMatrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    d(j, j) = v[j];
    d(n + j, n + j) = -v[j];
  }
  return d;
}

}  // namespace

PositiveSpectrum sample_dual_sum(const SumSpec& spec, RngStream& rng) {
  const int n = spec.a.empty() ? spec.n : static_cast<int>(spec.a.size());
  ComplexMatrix mat = ComplexMatrix::Zero(2 * n, 2 * n);
  if (!spec.a.empty()) {
    const ComplexMatrix omega = interleaved_to_block(haar_symplectic(n, rng));
    mat += omega * dual_diagonal(spec.a) * omega.adjoint();
  }
  if (!spec.b.empty()) {
    const int m = static_cast<int>(spec.b.size());
    const ComplexMatrix x1 = gaussian_complex(n, m, rng, ComplexScale::half_parts);
    const ComplexMatrix x2 = gaussian_complex(n, m, rng, ComplexScale::half_parts);
    ComplexMatrix x(2 * n, 2 * m);
    x.topLeftCorner(n, m) = x1;
    x.topRightCorner(n, m) = x2;
    x.bottomLeftCorner(n, m) = -x2.conjugate();
    x.bottomRightCorner(n, m) = x1.conjugate();
    mat += x * dual_diagonal(spec.b) * x.adjoint();
  }
  if (spec.t > 0) mat += std::sqrt(spec.t) * gaussian_anti_self_dual(n, rng).hermitian_form();
  mat = 0.5 * (mat + mat.adjoint()).eval();
  return positive_spectrum_hermitian(mat, 1e-8);
}

RankTwoSample sample_rank_two(const std::vector<double>& a, double b1, RngStream& rng) {
  const int n = static_cast<int>(a.size());
  const RealMatrix base = assemble_block({a, Parity::even}).entries();
  const RealMatrix x = gaussian_real(2 * n, 2, rng);
  RealMatrix j(2, 2);
  j << 0.0, b1, -b1, 0.0;
  const RealMatrix pert = base + x * j * x.transpose();
  RankTwoSample s;
  s.unperturbed = cdouble(0.0, 1.0) * base.cast<cdouble>();
  s.perturbed = cdouble(0.0, 1.0) * pert.cast<cdouble>();
  s.lambda = positive_spectrum(AntisymmetricReal::from_matrix(pert, 1e-8));
  return s;
}

double sample_gamma_product(const std::vector<double>& shapes, RngStream& rng) {
  double p = 1.0;
  for (double k : shapes) {
    if (!(k > 0)) throw InvalidSpec("Gamma shapes must be positive");
    p *= rng.gamma(k);
  }
  return p;
}

std::vector<double> sample_complex_product(int m, const std::vector<double>& nu, RngStream& rng) {
  for (double v : nu)
    if (!is_integer(v) || v < 0)
      throw UnsupportedCase("complex product sampling needs nonnegative integer exponents");
  ComplexMatrix y = ComplexMatrix::Identity(m, m);
  int prev = m;
  for (double v : nu) {
    const int rows = m + static_cast<int>(std::lround(v));
    y = gaussian_complex(rows, prev, rng, ComplexScale::half_parts) * y;
    prev = rows;
  }
  const ComplexMatrix w = y.adjoint() * y;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct BatchStats {
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
};

}  // namespace

MeanEstimate mc_mean(std::size_t n_samples, const RngStream& base,
                     const std::function<double(RngStream&)>& draw, unsigned workers) {
  const std::size_t batches = (n_samples + kBatchSize - 1) / kBatchSize;
  std::vector<BatchStats> stats(batches);
  parallel_for(
      batches,
      [&](std::size_t bi) {
        RngStream rng = base.substream(bi);
        const std::size_t count = std::min(kBatchSize, n_samples - bi * kBatchSize);
        BatchStats s;
        for (std::size_t i = 0; i < count; ++i) {
          const double v = draw(rng);
          ++s.n;
          const double d = v - s.mean;
          s.mean += d / static_cast<double>(s.n);
          s.m2 += d * (v - s.mean);
        }
        stats[bi] = s;
      },
      workers);
  BatchStats total;
  for (const auto& s : stats) {
    if (s.n == 0) continue;
    const double n_a = static_cast<double>(total.n), n_b = static_cast<double>(s.n);
    const double delta = s.mean - total.mean;
    const double n_ab = n_a + n_b;
    total.mean += delta * n_b / n_ab;
    total.m2 += s.m2 + delta * delta * n_a * n_b / n_ab;
    total.n += s.n;
  }
  MeanEstimate e;
  e.mean = total.mean;
  e.n = total.n;
  e.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                                      static_cast<double>(total.n))
                          : 0.0;
  return e;
}

std::vector<double> mc_collect(std::size_t n_samples, const RngStream& base,
                               const std::function<double(RngStream&)>& draw, unsigned workers) {
  std::vector<double> out(n_samples);
  const std::size_t batches = (n_samples + kBatchSize - 1) / kBatchSize;
  parallel_for(
      batches,
      [&](std::size_t bi) {
        RngStream rng = base.substream(bi);
        const std::size_t begin = bi * kBatchSize;
        const std::size_t end = std::min(n_samples, begin + kBatchSize);
        for (std::size_t i = begin; i < end; ++i) out[i] = draw(rng);
      },
      workers);
  return out;
}

}  // namespace rmt

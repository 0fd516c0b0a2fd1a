#pragma once

#include <string>
#include <vector>

#include "rmt/matcore.hpp"
#include "rmt/sampler.hpp"

namespace rmt {

enum class HCKind { unitary, orth_even, orth_odd, symplectic };

struct HCGroup {
  HCKind kind = HCKind::orth_even;
  int size = 1;  // N for unitary/symplectic, m for orthogonal
};

std::string to_string(HCKind k);
HCKind parse_hc_kind(const std::string& s);

struct RhsValue {
  double value = 0.0;
  double log_abs = -std::numeric_limits<double>::infinity();
  double sign = 0.0;
};

// Exact group integral, including the normalising constant.
RhsValue hc_rhs(const HCGroup& group, const std::vector<double>& x, const std::vector<double>& y);

// Defaults for spectra-to-matrix layout used by hc_compare.
ComplexMatrix hc_matrix(const HCGroup& group, const std::vector<double>& spectrum);

// Monte Carlo mean of the integrand over Haar-distributed group elements.
MeanEstimate hc_lhs_mc(const HCGroup& group, const ComplexMatrix& x, const ComplexMatrix& y,
                       std::size_t n_samples, const RngStream& rng, unsigned workers = 0);

struct HCResult {
  double exact_rhs = 0.0;
  double log_abs_rhs = 0.0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::size_t n_samples = 0;
  double z_score = 0.0;
  bool passed = false;
};

constexpr double kHCZThreshold = 4.0;

HCResult hc_compare(const HCGroup& group, const std::vector<double>& x,
                    const std::vector<double>& y, std::size_t n_samples, const RngStream& rng,
                    unsigned workers = 0);

}  // namespace rmt

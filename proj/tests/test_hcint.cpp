#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "rmt/hcint.hpp"

using namespace rmt;

namespace {
std::vector<double> random_spectrum(RngStream& r, int n, double lo, double hi) {
  for (;;) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * r.uniform());
    std::sort(v.begin(), v.end());
    bool ok = true;
    for (int i = 0; i + 1 < n; ++i) ok = ok && v[i + 1] - v[i] > 1e-2;
    if (ok) return v;
  }
}
}  // namespace

TEST_CASE("exact right-hand sides") {
  CHECK(hc_rhs({HCKind::orth_even, 1}, {1.0}, {1.0}).value == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(hc_rhs({HCKind::orth_odd, 1}, {1.0}, {1.0}).value == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(hc_rhs({HCKind::unitary, 2}, {0.0, 1.0}, {0.0, 1.0}).value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(hc_rhs({HCKind::symplectic, 1}, {1.0}, {1.0}).value == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(hc_rhs({HCKind::orth_even, 2}, {1.0, 1.0}, {0.5, 2.0}), DegenerateSpectrum);
}

TEST_CASE("right-hand side symmetries") {
  RngStream r(31, 0);
  for (HCKind k : {HCKind::unitary, HCKind::orth_even, HCKind::orth_odd, HCKind::symplectic}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 3;
      const auto x = random_spectrum(r, n, 0.1, 3.0), y = random_spectrum(r, n, 0.1, 3.0);
      const double a = hc_rhs({k, n}, x, y).value, b = hc_rhs({k, n}, y, x).value;
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
      if (k == HCKind::orth_odd) CHECK(a == hc_rhs({HCKind::symplectic, n}, x, y).value);
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const double x = 0.1 + 3.0 * r.uniform(), y = 0.1 + 3.0 * r.uniform();
    CHECK(hc_rhs({HCKind::orth_even, 1}, {x}, {y}).value == doctest::Approx(std::cosh(x * y)).epsilon(1e-14));
  }
}

TEST_CASE("right-hand sides tend to one as x -> 0") {
  for (HCKind k : {HCKind::orth_even, HCKind::orth_odd, HCKind::symplectic, HCKind::unitary}) {
    const std::vector<double> y{0.6, 1.3};
    auto dev = [&](double g) { return std::abs(hc_rhs({k, 2}, {g, 2.0 * g}, y).value - 1.0); };
    INFO(to_string(k));
    CHECK(dev(1e-3) < 1e-2);
    CHECK(dev(5e-4) < dev(1e-3));
  }
}

TEST_CASE("Monte Carlo left-hand sides") {
  const RngStream rng(7, 0);
  const HCGroup og{HCKind::orth_even, 1};
  const MeanEstimate zero = hc_lhs_mc(og, hc_matrix(og, {1.0}), ComplexMatrix::Zero(2, 2), 1000, rng);
  CHECK(zero.mean == 1.0);
  CHECK(zero.std_error == 0.0);

  const HCResult e1 = hc_compare(og, {1.0}, {1.0}, 100000, rng);
  CHECK(e1.exact_rhs == doctest::Approx(1.543081).epsilon(1e-6));
  CHECK(std::abs(e1.z_score) < 3.0);
  const HCResult s1 = hc_compare({HCKind::symplectic, 1}, {1.0}, {1.0}, 100000, rng.substream(1));
  CHECK(s1.exact_rhs == doctest::Approx(1.175201).epsilon(1e-6));
  CHECK(std::abs(s1.z_score) < 3.0);

  CHECK(hc_compare({HCKind::orth_even, 2}, {0.5, 1.5}, {0.7, 1.1}, 200000, rng.substream(2)).passed);
  CHECK(hc_compare({HCKind::orth_odd, 2}, {0.5, 1.5}, {0.7, 1.1}, 200000, rng.substream(3)).passed);
  CHECK(hc_compare({HCKind::unitary, 2}, {0.3, 1.2}, {0.4, 0.9}, 200000, rng.substream(4)).passed);
}

TEST_CASE("structure violations are rejected") {
  const HCGroup og{HCKind::orth_even, 1};
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(hc_lhs_mc(og, bad, bad, 100, RngStream(1, 0)), StructureViolation);
}

TEST_CASE("results do not depend on the worker count") {
  const HCGroup g{HCKind::orth_odd, 2};
  const HCResult a = hc_compare(g, {0.5, 1.5}, {0.7, 1.1}, 5000, RngStream(3, 0), 1);
  const HCResult b = hc_compare(g, {0.5, 1.5}, {0.7, 1.1}, 5000, RngStream(3, 0), 3);
  CHECK(a.mc_mean == b.mc_mean);
  CHECK(a.mc_stderr == b.mc_stderr);
}

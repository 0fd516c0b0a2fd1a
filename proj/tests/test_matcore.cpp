#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rmt/matcore.hpp"
#include "rmt/sampler.hpp"

using namespace rmt;

TEST_CASE("positive_spectrum of a rotation generator") {
  RealMatrix a(2, 2);
  a << 0, 1, -1, 0;
  const auto s = positive_spectrum(AntisymmetricReal::from_matrix(a));
  REQUIRE(s.size() == 1);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(s.has_zero_mode);
}

TEST_CASE("positive_spectrum of a block-diagonal generator") {
  RealMatrix a = RealMatrix::Zero(4, 4);
  a(0, 1) = 1;
  a(1, 0) = -1;
  a(2, 3) = 2;
  a(3, 2) = -2;
  const auto s = positive_spectrum(AntisymmetricReal::from_matrix(a));
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(2.0));
}

TEST_CASE("random 5x5 anti-symmetric matrix against a Hermitian eigensolver") {
  RngStream rng(11, 0);
  const auto a = gaussian_antisymmetric(5, rng);
  const auto s = positive_spectrum(a);
  CHECK(s.has_zero_mode);
  REQUIRE(s.size() == 2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.hermitian_form());
  const auto ev = es.eigenvalues();
  CHECK(std::abs(ev(2)) < 1e-12);
  CHECK(ev(3) == doctest::Approx(s[0]).epsilon(1e-12));
  CHECK(ev(4) == doctest::Approx(s[1]).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(-s[0]).epsilon(1e-12));
  CHECK(ev(0) == doctest::Approx(-s[1]).epsilon(1e-12));
}

TEST_CASE("structure violation is reported with its residual") {
  RealMatrix a(2, 2);
  a << 0, 1, -0.5, 0;
  try {
    (void)AntisymmetricReal::from_matrix(a);
    FAIL("expected StructureViolation");
  } catch (const StructureViolation& e) {
    CHECK(e.residual > 0.1);
  }
}

TEST_CASE("vandermonde variants") {
  CHECK(vandermonde({1.0}, Parity::even) == 1.0);
  CHECK(vandermonde({1.0, 2.0}, Parity::even) == 3.0);
  CHECK(vandermonde({1.0, 2.0}, Parity::odd) == 6.0);
  CHECK(vandermonde({1.0, 2.0, 3.0}, Parity::even) == 120.0);
  CHECK(vandermonde({}, Parity::even) == 1.0);
  RngStream rng(3, 1);
  for (int len = 1; len <= 6; ++len) {
    std::vector<double> u;
    double prod = 1.0;
    for (int i = 0; i < len; ++i) {
      u.push_back(0.1 + 3.0 * rng.uniform());
      prod *= u.back();
    }
    CHECK(vandermonde(u, Parity::odd) == doctest::Approx(prod * vandermonde(u, Parity::even)).epsilon(1e-14));
  }
}

TEST_CASE("stable_det examples") {
  CHECK(stable_det(RealMatrix(RealMatrix::Identity(3, 3))).value() == doctest::Approx(1.0));
  RealMatrix c(2, 2);
  c << 2 * std::cosh(1.0), 2 * std::cosh(2.0), 2 * std::cosh(2.0), 2 * std::cosh(4.0);
  const double direct = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  CHECK(stable_det(c).value() == doctest::Approx(direct).epsilon(1e-12));
  RealMatrix big = RealMatrix::Zero(2, 2);
  big(0, 0) = big(1, 1) = 1e200;
  const auto d = stable_det(big);
  CHECK(d.sign == 1.0);
  CHECK(d.log_abs == doctest::Approx(400.0 * std::log(10.0)).epsilon(1e-14));
  CHECK(std::isinf(d.value()));
  const auto z = stable_det(RealMatrix(RealMatrix::Zero(2, 2)));
  CHECK(z.value() == 0.0);
  CHECK(std::isinf(z.log_abs));
}

TEST_CASE("stable_det agrees with cofactor expansion") {
  RngStream rng(5, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const RealMatrix a2 = gaussian_real(2, 2, rng);
    CHECK(stable_det(a2).value() ==
          doctest::Approx(a2(0, 0) * a2(1, 1) - a2(0, 1) * a2(1, 0)).epsilon(1e-12));
    const RealMatrix a = gaussian_real(3, 3, rng);
    const double cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                       a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                       a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    CHECK(stable_det(a).value() == doctest::Approx(cof).epsilon(1e-12));
  }
}

TEST_CASE("log-entry determinant matches the direct one") {
  RealMatrix m(2, 2), la(2, 2), sg(2, 2);
  m << 1.5, -2.0, 0.25, 3.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      la(i, j) = std::log(std::abs(m(i, j)));
      sg(i, j) = m(i, j) < 0 ? -1.0 : 1.0;
    }
  CHECK(stable_det_log_entries(la, sg).value() == doctest::Approx(stable_det(m).value()));
}

TEST_CASE("assemble_block layouts and round trip") {
  const auto a = assemble_block({{3.0}, Parity::even});
  CHECK(a(0, 1) == 3.0);
  CHECK(a(1, 0) == -3.0);
  const auto b = assemble_block({{1.0, 2.0}, Parity::odd});
  REQUIRE(b.n_dim() == 5);
  CHECK(b.entries().row(0).norm() == 0.0);
  CHECK(b(1, 2) == 1.0);
  CHECK(b(3, 4) == 2.0);
  const auto s = positive_spectrum(b);
  CHECK(s.has_zero_mode);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(assemble_block({{-1.0}, Parity::even}), InvalidSpec);
}

TEST_CASE("pairing residual over random anti-symmetric matrices") {
  RngStream rng(17, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 8;
    const auto a = gaussian_antisymmetric(n, rng);
    const auto s = positive_spectrum(a);
    worst = std::max(worst, s.pairing_residual / std::max(1.0, a.entries().norm()));
    CHECK(static_cast<int>(s.size()) == n / 2);
    CHECK(s.has_zero_mode == (n % 2 == 1));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("anti-self-dual spectrum pairs") {
  RngStream rng(19, 4);
  const auto h = gaussian_anti_self_dual(3, rng);
  CHECK(AntiSelfDual::duality_residual(h.assembled()) == 0.0);
  const auto s = positive_spectrum(h);
  CHECK(s.size() == 3);
  CHECK(s.pairing_residual < 1e-10);
}

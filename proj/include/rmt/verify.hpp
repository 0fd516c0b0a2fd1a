#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmt/matcore.hpp"
#include "rmt/sampler.hpp"

namespace rmt {

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::optional<double> p_value;
  bool passed = false;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const TestReport& r);

// Asymptotic Kolmogorov distribution tail P(K > x).
double kolmogorov_tail(double x);

// Two-sided KS statistic sup|F_n - F| and asymptotic p-value; passes when p > significance.
TestReport ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf,
                         double significance = 0.01, const std::string& name = "ks_one_sample");
TestReport ks_two_sample(std::vector<double> s1, std::vector<double> s2,
                         double significance = 0.01, const std::string& name = "ks_two_sample");

// Runs a statistical test; on failure reruns once with 4x samples on a fresh stream.
TestReport with_retry(const std::function<TestReport(std::size_t, const RngStream&)>& run,
                      std::size_t n_samples, const RngStream& rng);

// Finite-difference check of the heat equation satisfied by the even/odd kernel.
struct HeatCheckConfig {
  Parity parity = Parity::even;
  int m = 1;
  double t = 1.0;
  double h = 1e-3;  // relative to the point scale
  std::vector<std::vector<double>> x_points;  // empty: built-in cloud
  std::vector<double> y;                       // empty: built-in
};
TestReport heat_equation_check(const HeatCheckConfig& cfg);

// Kernel psi_t(x|y) as a determinant of one-particle kernels.
double heat_kernel(Parity parity, const std::vector<double>& x, const std::vector<double>& y, double t);

// W = -sum_{j<k} log|x_j^2 - x_k^2| (minus sum log x_j for odd parity); checks
// sum_j (d2W/dxj2 - (dW/dxj)^2) at random points.
TestReport identity_W_check(int m, int trials, const RngStream& rng, Parity parity = Parity::even);
double identity_W_residual(const std::vector<double>& x, Parity parity, double* scale = nullptr);

TestReport interlacing_check(int n, const std::vector<double>& a, double b1, std::size_t n_samples,
                             const RngStream& rng, unsigned workers = 0);

// a strictly below lambda in the weak sense a_1 <= lam_1 <= a_2 <= ... (a "precedes" lambda).
bool interlaces(const std::vector<double>& below, const std::vector<double>& above);

enum class CorrespondenceCase { cor1even, prop56, prop57 };
std::string to_string(CorrespondenceCase c);
CorrespondenceCase parse_correspondence_case(const std::string& s);

struct CorrespondenceConfig {
  CorrespondenceCase which = CorrespondenceCase::cor1even;
  int m = 1;
  int M = 1;
  std::vector<double> nu{0.0};
  std::size_t n_samples = 10000;
  double significance = 0.01;
  // Overrides the derived Gamma shapes of the m = 1 reference.
  std::optional<std::vector<double>> reference_shapes;
};

// Real product ensemble behind each case.
EnsembleSpec correspondence_ensemble(CorrespondenceCase which, int m, int M, const std::vector<double>& nu);
// Exponents nu_1..nu_K of the matching complex product (K = 2M, or 2M + 1 for prop57).
std::vector<double> correspondence_complex_nu(CorrespondenceCase which, const std::vector<double>& nu);
// Gamma shapes of the complex-side reference for m = 1 (complex exponents + 1).
std::vector<double> correspondence_shapes(CorrespondenceCase which, const std::vector<double>& nu);

// CDF of the larger squared singular value of the complex product at m = 2, built
// from one-dimensional cumulative integrals of the two weights.
class LargerEigenvalueCdf {
 public:
  LargerEigenvalueCdf(const std::vector<double>& complex_nu, int cells = 8000);
  double operator()(double x) const;
  double total_mass() const { return total_; }  // before renormalization; should be 1

 private:
  std::vector<double> u_edges_, cdf_;
  double total_ = 0.0;
};

// CDF of a one-dimensional density on (0, inf) tabulated in u = sqrt(x).
class TabulatedCdf {
 public:
  TabulatedCdf(const std::function<double(double)>& density, double x_max, int cells = 20000);
  double operator()(double x) const;
  double total_mass() const { return cdf_.back(); }

 private:
  double u_max_;
  std::vector<double> cdf_;
};

TestReport correspondence_report(const CorrespondenceConfig& cfg, const RngStream& rng,
                                 unsigned workers = 0);

// ---- acceptance suite ----

struct SuiteEntry {
  int criterion = 0;
  // Reproduces a literal claim that the derivation contradicts; its failure is expected
  // and does not count against the suite.
  bool known_conflict = false;
  TestReport report;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  unsigned workers = 0;
};

// Every report of criteria 1-9, in a fixed order; criterion 10 (byte-identical
// reruns) is checked by running this twice.
std::vector<SuiteEntry> acceptance_suite(const SuiteOptions& opt);
nlohmann::json suite_json(const std::vector<SuiteEntry>& entries);
bool suite_passed(const std::vector<SuiteEntry>& entries);

}  // namespace rmt

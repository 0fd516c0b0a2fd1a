#include "rmt/verify.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/parallel.hpp"

namespace rmt {

nlohmann::json to_json(const TestReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
  j["passed"] = r.passed;
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["details"] = r.details;
  return j;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  constexpr double kPi = 3.14159265358979323846;
  if (x < 1.0) {
    // Theta-function form converges fast for small x.
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double e = (2.0 * k - 1.0) * kPi / x;
      cdf += std::exp(-e * e / 8.0);
    }
    cdf *= std::sqrt(2.0 * kPi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double tail = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    tail += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(tail, 0.0, 1.0);
}

namespace {
double ks_pvalue(double d, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_tail((root + 0.12 + 0.11 / root) * d);
}
}  // namespace

TestReport ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf,
                         double significance, const std::string& name) {
  if (samples.size() < 100) throw InvalidParams("ks_one_sample: need at least 100 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  TestReport r;
  r.name = name;
  r.statistic = d;
  r.threshold = significance;
  r.p_value = ks_pvalue(d, n);
  r.passed = *r.p_value > significance;
  r.n_samples = samples.size();
  return r;
}

TestReport ks_two_sample(std::vector<double> s1, std::vector<double> s2, double significance,
                         const std::string& name) {
  if (s1.empty() || s2.empty()) throw InvalidParams("ks_two_sample: empty sample");
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  const double n1 = static_cast<double>(s1.size()), n2 = static_cast<double>(s2.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < s1.size() && j < s2.size()) {
    const double v = std::min(s1[i], s2[j]);
    while (i < s1.size() && s1[i] == v) ++i;
    while (j < s2.size() && s2[j] == v) ++j;
    d = std::max(d, std::abs(i / n1 - j / n2));
  }
  TestReport r;
  r.name = name;
  r.statistic = d;
  r.threshold = significance;
  r.p_value = ks_pvalue(d, n1 * n2 / (n1 + n2));
  r.passed = *r.p_value > significance;
  r.n_samples = s1.size() + s2.size();
  return r;
}

TestReport with_retry(const std::function<TestReport(std::size_t, const RngStream&)>& run,
                      std::size_t n_samples, const RngStream& rng) {
  TestReport first = run(n_samples, rng);
  first.seed = rng.seed();
  if (first.passed) {
    first.details["retried"] = false;
    return first;
  }
  // Fresh stream id so the retry never reuses the first draws.
  TestReport second = run(4 * n_samples, rng.substream(0x5eed0000ULL));
  second.seed = rng.seed();
  second.details["retried"] = true;
  second.details["first_attempt"] = {{"statistic", first.statistic},
                                     {"p_value", first.p_value ? *first.p_value : -1.0},
                                     {"n_samples", first.n_samples}};
  return second;
}

bool interlaces(const std::vector<double>& below, const std::vector<double>& above) {
  if (below.size() != above.size()) return false;
  for (std::size_t k = 0; k < below.size(); ++k) {
    if (below[k] > above[k]) return false;
    if (k + 1 < below.size() && above[k] > below[k + 1]) return false;
  }
  return true;
}

TestReport interlacing_check(int n, const std::vector<double>& a, double b1, std::size_t n_samples,
                             const RngStream& rng, unsigned workers) {
  if (static_cast<int>(a.size()) != n) throw DimensionMismatch("interlacing_check: a has wrong length");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i] > a[i - 1])) throw DegenerateSpectrum("interlacing_check: a must be strictly increasing");
  constexpr int kRank = 2;
  struct Counts {
    std::size_t singular = 0, box = 0, strict = 0;
  };
  const std::size_t batches = (n_samples + kBatchSize - 1) / kBatchSize;
  std::vector<Counts> counts(batches);
  parallel_for(
      batches,
      [&](std::size_t bi) {
        RngStream r = rng.substream(bi);
        const std::size_t count = std::min(kBatchSize, n_samples - bi * kBatchSize);
        Counts c;
        for (std::size_t s = 0; s < count; ++s) {
          const RankTwoSample smp = sample_rank_two(a, b1, r);
          // Singular values of the 2n x 2n matrices, ascending.
          Eigen::JacobiSVD<ComplexMatrix> sa(smp.unperturbed), sb(smp.perturbed);
          std::vector<double> sig_a(sa.singularValues().data(), sa.singularValues().data() + 2 * n);
          std::vector<double> sig_b(sb.singularValues().data(), sb.singularValues().data() + 2 * n);
          std::sort(sig_a.begin(), sig_a.end());
          std::sort(sig_b.begin(), sig_b.end());
          const double tol = 1e-9 * (1.0 + sig_b.back());
          bool ok = true;
          for (int k = 0; k < 2 * n; ++k) {
            if (k - kRank >= 0 && sig_b[k - kRank] > sig_a[k] + tol) ok = false;
            if (k + kRank < 2 * n && sig_a[k] > sig_b[k + kRank] + tol) ok = false;
          }
          if (!ok) ++c.singular;
          const std::vector<double>& lam = smp.lambda.values;
          // The determinant formula is supported where every box
          // (max(lam_j, a_j), min(lam_{j+1}, a_{j+1})) is nonempty.
          for (int j = 0; j + 1 < n; ++j)
            if (std::max(lam[j], a[j]) >= std::min(lam[j + 1], a[j + 1])) {
              ++c.box;
              break;
            }
          if (!interlaces(a, lam) && !interlaces(lam, a)) ++c.strict;
        }
        counts[bi] = c;
      },
      workers);
  Counts total;
  for (const auto& c : counts) {
    total.singular += c.singular;
    total.box += c.box;
    total.strict += c.strict;
  }
  TestReport r;
  r.name = "interlacing_n" + std::to_string(n);
  r.statistic = static_cast<double>(total.singular + total.box);
  r.threshold = 0.0;
  // Samples where lambda encloses a (or the reverse) fall in neither interlacing
  // order yet inside the support box, so that count is informational only.
  r.passed = total.singular == 0 && total.box == 0;
  r.n_samples = n_samples;
  r.seed = rng.seed();
  r.details = {{"singular_value_violations", total.singular},
               {"support_box_violations", total.box},
               {"neither_interlacing_count", total.strict},
               {"a", a},
               {"b1", b1}};
  return r;
}

}  // namespace rmt

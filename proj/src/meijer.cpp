// Meijer G-functions of the types that occur in the product-ensemble weights.
//
// The Mellin-Barnes integral (1/2 pi i) int Gamma-products x^{-u} du is taken along
// the vertical line Re u = c through the real saddle of the integrand, which keeps
// the magnitude of the integrand close to |G| and limits cancellation. On that line
// the integrand is analytic in a strip, so the trapezoid rule converges
// geometrically; halving the step gives the error estimate.

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmt/specfun.hpp"

namespace rmt {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDropLog = 45.0;   // stop once the integrand is e^-45 below its peak
constexpr int kMaxNodes = 400000;

struct ContourIntegrand {
  std::vector<double> b;
  int poly_degree;  // multiplies by (1-u)_n when > 0
  double log_x;

  std::complex<double> log_value(std::complex<double> u) const {
    std::complex<double> acc = -u * log_x;
    for (double bj : b) acc += log_gamma(bj + u);
    for (int r = 0; r < poly_degree; ++r) acc += std::log(1.0 + r - u);
    return acc;
  }
};

double saddle_abscissa(const std::vector<double>& b, double log_x) {
  const double b_min = *std::min_element(b.begin(), b.end());
  // Offset from the leftmost pole; for small x the optimal line hugs the pole, and an
  // offset of 1/|log x| bounds the cancellation by about e |log x|.
  const double offset = log_x < -2.0 ? -1.0 / log_x : 0.5;
  const double lo_bound = -b_min + offset;
  auto slope = [&](double c) {
    double s = -log_x;
    for (double bj : b) s += digamma(bj + c);
    return s;
  };
  if (slope(lo_bound) >= 0.0) return lo_bound;
  double lo = lo_bound, hi = lo_bound + 1.0;
  while (slope(hi) < 0.0) {
    lo = hi;
    hi = lo_bound + 2.0 * (hi - lo_bound);
    if (hi > 1e8) throw ContourFailure("meijer: saddle search diverged", 0.0, 0.0);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Log-integrand samples on the half line tau >= 0 at spacing h, truncated once the
// integrand has dropped kDropLog below its running peak.
struct LineSamples {
  double h;
  std::vector<std::complex<double>> logs;
  double peak = -std::numeric_limits<double>::infinity();
};

LineSamples sample_line(const ContourIntegrand& f, double c, double h) {
  LineSamples s{h, {}};
  s.logs.reserve(1024);
  for (int k = 0;; ++k) {
    const double tau = k * h;
    const std::complex<double> l = f.log_value({c, tau});
    s.logs.push_back(l);
    s.peak = std::max(s.peak, l.real());
    if (tau > 2.0 && l.real() < s.peak - kDropLog) break;
    if (k > kMaxNodes) throw ContourFailure("meijer: contour tail does not decay", 0.0, 0.0);
  }
  return s;
}

// Halve the spacing, reusing the existing nodes; extends the tail if needed.
LineSamples refine_line(const ContourIntegrand& f, double c, const LineSamples& coarse) {
  const double h = 0.5 * coarse.h;
  LineSamples s{h, {}};
  s.peak = coarse.peak;
  s.logs.reserve(2 * coarse.logs.size() + 1);
  for (std::size_t k = 0; k < coarse.logs.size(); ++k) {
    s.logs.push_back(coarse.logs[k]);
    if (k + 1 < coarse.logs.size()) {
      const std::complex<double> l = f.log_value({c, (2.0 * k + 1.0) * h});
      s.peak = std::max(s.peak, l.real());
      s.logs.push_back(l);
    }
  }
  return s;
}

// Trapezoid sum in units of exp(peak), with the 1/pi of the symmetric line.
double line_sum(const LineSamples& s) {
  double sum = 0.0;
  for (std::size_t k = 0; k < s.logs.size(); ++k)
    sum += (k == 0 ? 0.5 : 1.0) * std::exp(s.logs[k] - s.peak).real();
  return sum * s.h / kPi;
}

Estimate contour_integral(const std::vector<double>& b, int poly_degree, double x) {
  if (!(x > 0.0)) throw InvalidParams("meijer: argument must be positive");
  if (b.empty()) throw InvalidParams("meijer: need at least one bottom parameter");
  ContourIntegrand f{b, poly_degree, std::log(x)};
  const double c = saddle_abscissa(b, f.log_x);
  const double strip = c + *std::min_element(b.begin(), b.end());
  LineSamples cur = sample_line(f, c, std::min(0.25, 0.4 * strip));
  double coarse_sum = line_sum(cur), coarse_peak = cur.peak;
  double value = 0.0, err = 0.0;
  for (int level = 0; level < 5; ++level) {
    cur = refine_line(f, c, cur);
    const double fine_sum = line_sum(cur);
    const double diff = std::abs(fine_sum - coarse_sum * std::exp(coarse_peak - cur.peak));
    const double mag = std::exp(cur.peak);
    value = fine_sum * mag;
    // Rounding floor: the line integrand is summed at magnitude ~ mag.
    err = (diff + 1e-15 * (std::abs(fine_sum) + 1.0)) * mag;
    if (diff <= 1e-13 * std::max(std::abs(fine_sum), 1e-3)) break;
    coarse_sum = fine_sum;
    coarse_peak = cur.peak;
  }
  if (!std::isfinite(value)) throw ContourFailure("meijer: non-finite result", value, err);
  if (err > 1e-6 * std::max(std::abs(value), 1e-300) && err > 1e-8)
    throw ContourFailure("meijer: contour error above target", value, err);
  return {value, err};
}

double reciprocal_gamma(double z) {
  if (z <= 0.0 && std::round(z) == z) return 0.0;
  int sign = 1;
  const double lg = log_gamma(z, &sign);
  return sign * std::exp(-lg);
}

}  // namespace

Estimate meijer_g_q0(const std::vector<double>& b, double x) {
  if (!(x > 0.0)) throw InvalidParams("meijer_g_q0: argument must be positive");
  if (b.size() == 1) {
    const double v = std::exp(b[0] * std::log(x) - x);
    return {v, 4e-16 * v};
  }
  return contour_integral(b, 0, x);
}

Estimate meijer_g_q0_contour(const std::vector<double>& b, double x) {
  return contour_integral(b, 0, x);
}

Estimate meijer_g_q0(const MeijerGSpec& spec, double x) {
  if (!spec.a_params.empty())
    throw UnsupportedCase("meijer_g_q0: only G^{q,0}_{0,q} is supported");
  const double arg = spec.orientation == Orientation::reciprocal_argument ? 1.0 / x : x;
  return meijer_g_q0(spec.b_params, arg);
}

Estimate meijer_g_q1(int n, const std::vector<double>& b, double x) {
  if (n < 0) throw InvalidParams("meijer_g_q1: n must be nonnegative");
  return contour_integral(b, n, x);
}

double meijer_g_10_terminating(int n, const std::vector<double>& c, double x) {
  if (n < 0) throw InvalidParams("meijer_g_10_terminating: n must be nonnegative");
  // Residues of Gamma(u)/Gamma(n+1+u) at u = 0, -1, ..., -n.
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double term = std::exp(k * std::log(std::abs(x)) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0));
    if (x == 0.0) term = (k == 0) ? 1.0 / std::exp(log_gamma(n + 1.0)) : 0.0;
    if (k % 2 == 1) term = -term;
    if (x < 0.0 && k % 2 == 1) term = -term;
    for (double cj : c) term *= reciprocal_gamma(1.0 - cj + k);
    sum += term;
  }
  return sum;
}

double meijer_g_01_terminating(int n, const std::vector<double>& c, double x) {
  // The residues sit at the same points with the opposite orientation.
  const double v = meijer_g_10_terminating(n, c, x);
  return (n % 2 == 0) ? v : -v;
}

}  // namespace rmt

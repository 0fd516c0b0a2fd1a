#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "rmt/specfun.hpp"

namespace rmt {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Damping {
  const std::vector<double>& b;
  double t;
  template <class T>
  T operator()(T c) const {
    T acc = std::exp(-0.5 * t * c * c);
    for (double bl : b) acc /= (T(1.0) + c * c * (bl * bl));
    return acc;
  }
};
}  // namespace

Estimate damped_cosine_transform(double omega, const std::vector<double>& b_eigs, double t) {
  if (t < 0.0) throw InvalidParams("gk_integral: t must be nonnegative");
  if (t == 0.0 && b_eigs.empty())
    throw NonIntegrable("gk_integral: no damping (t = 0 and no b)");
  omega = std::abs(omega);
  const Damping damp{b_eigs, t};
  double b_max = 0.0, b_min = std::numeric_limits<double>::infinity();
  for (double bl : b_eigs) {
    if (!(bl > 0.0)) throw InvalidParams("gk_integral: b eigenvalues must be positive");
    b_max = std::max(b_max, bl);
    b_min = std::min(b_min, bl);
  }

  // Finite part [0, cut]: Gauss-Kronrod panels no wider than a quarter period and
  // no wider than the scale on which the damping varies.
  double cut;
  double tail_value = 0.0, tail_err = 0.0;
  if (t > 0.0) {
    cut = std::sqrt(2.0 * 32.0 / t);  // e^{-t c^2/2} < 1e-14 beyond
  } else {
    cut = std::max(2.0, 4.0 / b_min);
    if (omega > 0.0) cut = std::clamp(8.0 * kPi / omega, cut, std::max(cut, 100.0));
    // Tail int_cut^inf h(c) cos(omega c) dc on the rotated path c = cut + i y, where
    // the oscillation turns into e^{-omega y} decay.
    auto rotated = [&](double y) {
      const std::complex<double> z(cut, y);
      const std::complex<double> v = std::exp(std::complex<double>(-omega * y, omega * cut)) * damp(z);
      return (std::complex<double>(0.0, 1.0) * v).real();
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double l1 = 0.0;
    tail_value = integrator.integrate(rotated, 1e-13, &tail_err, &l1);
    tail_err += 1e-15 * l1;
  }
  double width = 1.0;
  if (omega > 0.0) width = std::min(width, 0.5 * kPi / omega);
  if (b_max > 0.0) width = std::min(width, 0.5 / b_max);
  if (t > 0.0) width = std::min(width, 0.5 / std::sqrt(t));
  const long panels = std::min<long>(200000, static_cast<long>(std::ceil(cut / width)));
  const double step = cut / panels;
  double value = 0.0, err = 0.0;
  auto integrand = [&](double c) { return damp(c) * std::cos(omega * c); };
  for (long p = 0; p < panels; ++p) {
    double panel_err = 0.0;
    value += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        integrand, p * step, (p + 1) * step, 0, 0.0, &panel_err);
    err += panel_err;
  }
  if (t > 0.0) err += std::exp(-32.0) / std::sqrt(t);
  return {value + tail_value, err + tail_err + 1e-16 * std::abs(value)};
}

Weight gk_integral(double a_k, const std::vector<double>& b_eigs, double t, Parity parity) {
  if (t == 0.0 && b_eigs.empty())
    throw NonIntegrable("gk_integral: no damping (t = 0 and no b)");
  if (t < 0.0) throw InvalidParams("gk_integral: t must be nonnegative");
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  // 2 cs(ac) cs(lc) = cos((a-l)c) +- cos((a+l)c).
  return [a_k, b_eigs, t, sign](double lambda) -> Estimate {
    const Estimate f_minus = damped_cosine_transform(a_k - lambda, b_eigs, t);
    const Estimate f_plus = damped_cosine_transform(a_k + lambda, b_eigs, t);
    return {(f_minus.value + sign * f_plus.value) / kPi, (f_minus.err + f_plus.err) / kPi};
  };
}

}  // namespace rmt

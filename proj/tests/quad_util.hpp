#pragma once
// Adaptive quadrature helpers shared by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace testutil {

using Fn = std::function<double(double)>;

// Adaptive bisection with a mixed tolerance, so that integrands that vanish up to
// rounding on part of the range still terminate.
inline double adaptive(const Fn& f, double lo, double hi, double abs_tol, double rel_tol, int depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
  if (err <= std::max(abs_tol, rel_tol * std::abs(v)) || depth <= 0) return v;
  const double mid = 0.5 * (lo + hi);
  return adaptive(f, lo, mid, 0.5 * abs_tol, rel_tol, depth - 1) +
         adaptive(f, mid, hi, 0.5 * abs_tol, rel_tol, depth - 1);
}

// int_lo^hi f, split at the given breakpoints (hi may be +inf).
inline double integrate(const Fn& f, double lo, double hi, std::vector<double> breaks = {},
                        double tol = 1e-11) {
  std::vector<double> pts{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double b : breaks)
    if (b > lo && b < hi) pts.push_back(b);
  pts.push_back(hi);
  const double abs_tol = 1e-3 * tol;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (std::isinf(pts[i + 1])) {
      // Map [a, inf) onto [0, 1).
      const double a = pts[i];
      total += adaptive([&](double u) { return f(a + u / (1.0 - u)) / ((1.0 - u) * (1.0 - u)); }, 0.0, 1.0,
                        abs_tol, tol, 20);
    } else {
      total += adaptive(f, pts[i], pts[i + 1], abs_tol, tol, 20);
    }
  }
  return total;
}

// int over 0 < x < y < inf of f(x, y); f must vanish on the diagonal, where it is
// not evaluated.
inline double integrate_ordered_2d(const std::function<double(double, double)>& f,
                                   std::vector<double> breaks = {}, double tol = 1e-10) {
  return integrate(
      [&](double y) {
        return integrate([&](double x) { return y - x > 2e-8 * (1.0 + y) ? f(x, y) : 0.0; }, 0.0, y, breaks, tol);
      },
      0.0, std::numeric_limits<double>::infinity(), breaks, tol);
}

}  // namespace testutil

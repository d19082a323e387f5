#pragma once

// Test-only reference numerics. Deliberately independent of the library's
// Gauss-Legendre machinery: integrals here use adaptive Simpson so that
// closed forms and quadrature-backed results are checked through a different
// path than the one that produced them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracles {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= 15.0 * tol)
    return refined + (refined - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Integrate with breakpoints (kinks / singular endpoints between panels).
inline double integrate_split(const std::function<double(double)>& f, double a, double b,
                              std::vector<double> pts, double tol = 1e-10) {
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double acc = 0.0, prev = a;
  for (double x : pts) {
    if (x <= prev || x > b) continue;
    acc += integrate(f, prev, x, tol);
    prev = x;
  }
  if (prev < b) acc += integrate(f, prev, b, tol);
  return acc;
}

// Central five-point derivative.
inline double derivative(const std::function<double(double)>& f, double x, double step) {
  return (f(x - 2 * step) - 8.0 * f(x - step) + 8.0 * f(x + step) - f(x + 2 * step)) /
         (12.0 * step);
}

// Principal-value Hilbert transform of g truncated to (a, b), evaluated at
// x0 in (a, b): (1/pi) PV int_a^b g(t)/(x0 - t) dt. Symmetric pairing around
// the pole; g may be endpoint-singular if `sqrt_endpoints` is set, in which
// case the outer pieces use the square-root substitution.
inline double pv_hilbert(const std::function<double(double)>& g, double a, double b,
                         double x0, bool sqrt_endpoints, double tol = 1e-8) {
  const double delta = 0.45 * std::min(x0 - a, b - x0);
  // paired part around the pole
  const auto pair_sum = [&](double u) {
    return (g(x0 - u) - g(x0 + u)) / u;  // 1/(x0 - t) with t = x0 -+ u
  };
  const double eps = 1e-7 * (b - a);
  double acc = integrate(pair_sum, eps, delta, tol) + pair_sum(0.5 * eps) * eps;

  // outer parts, possibly with endpoint singularities of 1/sqrt type
  const auto raw = [&](double t) { return g(t) / (x0 - t); };
  if (sqrt_endpoints) {
    // t = a + u^2 and t = b - u^2 regularize the sqrt endpoints; start just
    // off u = 0 so t stays strictly inside (a, b) in floating point
    const double u_eps = 1e-7 * std::sqrt(b - a);
    const auto left_sub = [&](double u) { return 2.0 * u * raw(a + u * u); };
    acc += integrate(left_sub, u_eps, std::sqrt(x0 - delta - a), tol);
    const auto right_sub = [&](double u) { return 2.0 * u * raw(b - u * u); };
    acc += integrate(right_sub, u_eps, std::sqrt(b - (x0 + delta)), tol);
  } else {
    acc += integrate(raw, a, x0 - delta, tol);
    acc += integrate(raw, x0 + delta, b, tol);
  }
  return acc / std::numbers::pi;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
}

}  // namespace oracles

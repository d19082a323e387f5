#include "netmoment/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace netmoment::quadrature {

const double kGaussNodes[kGaussOrder] = {
    -0.99312859918509492479, -0.96397192727791379127, -0.91223442825132590587,
    -0.83911697182221882339, -0.74633190646015079261, -0.63605368072651502545,
    -0.51086700195082709800, -0.37370608871541956067, -0.22778585114164507808,
    -0.07652652113349733375, 0.07652652113349733375,  0.22778585114164507808,
    0.37370608871541956067,  0.51086700195082709800,  0.63605368072651502545,
    0.74633190646015079261,  0.83911697182221882339,  0.91223442825132590587,
    0.96397192727791379127,  0.99312859918509492479};

const double kGaussWeights[kGaussOrder] = {
    0.01761400713915211831, 0.04060142980038694133, 0.06267204833410906357,
    0.08327674157670474872, 0.10193011981724043504, 0.11819453196151841731,
    0.13168863844917662690, 0.14209610931838205133, 0.14917298647260374679,
    0.15275338713072585070, 0.15275338713072585070, 0.14917298647260374679,
    0.14209610931838205133, 0.13168863844917662690, 0.11819453196151841731,
    0.10193011981724043504, 0.08327674157670474872, 0.06267204833410906357,
    0.04060142980038694133, 0.01761400713915211831};

double gauss(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < kGaussOrder; ++i)
    acc += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
  return half * acc;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss(f, a, mid);
  const double right = gauss(f, mid, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= tol) return refined;
  return adaptive_rec(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_rec(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return adaptive_rec(f, a, b, gauss(f, a, b), abs_tol, max_depth);
}

double adaptive_split(const std::function<double(double)>& f, double a, double b,
                      std::vector<double> breakpoints, double abs_tol, int max_depth) {
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  double acc = 0.0;
  double prev = a;
  for (double x : breakpoints) {
    if (x <= prev || x > b) continue;
    acc += adaptive(f, prev, x, abs_tol, max_depth);
    prev = x;
  }
  if (prev < b) acc += adaptive(f, prev, b, abs_tol, max_depth);
  return acc;
}

PanelRule panel_rule(double a, double b, int npanels) {
  PanelRule rule;
  rule.nodes.reserve(static_cast<size_t>(npanels) * kGaussOrder);
  rule.weights.reserve(static_cast<size_t>(npanels) * kGaussOrder);
  const double panel_width = (b - a) / npanels;
  for (int p = 0; p < npanels; ++p) {
    const double lo = a + p * panel_width;
    const double mid = lo + 0.5 * panel_width;
    const double half = 0.5 * panel_width;
    for (int i = 0; i < kGaussOrder; ++i) {
      rule.nodes.push_back(mid + half * kGaussNodes[i]);
      rule.weights.push_back(half * kGaussWeights[i]);
    }
  }
  return rule;
}

}  // namespace netmoment::quadrature

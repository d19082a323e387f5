#pragma once

#include <functional>
#include <vector>

namespace netmoment::quadrature {

// 20-point Gauss-Legendre rule on [-1, 1].
inline constexpr int kGaussOrder = 20;
extern const double kGaussNodes[kGaussOrder];
extern const double kGaussWeights[kGaussOrder];

// Fixed 20-point Gauss-Legendre estimate on [a, b].
double gauss(const std::function<double(double)>& f, double a, double b);

// Adaptive Gauss-Legendre with bisection to absolute tolerance.
// Panels are split until the two-half refinement agrees with the single-panel
// estimate within the local tolerance share.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol = 1e-10, int max_depth = 48);

// Adaptive quadrature with interior breakpoints (integrand may have kinks or
// integrable singularities exactly at the breakpoints).
double adaptive_split(const std::function<double(double)>& f, double a, double b,
                      std::vector<double> breakpoints, double abs_tol = 1e-10,
                      int max_depth = 48);

// Composite Gauss-Legendre panel rule on [a, b]: npanels equal panels of
// kGaussOrder points each. Nodes and weights are appended in ascending order.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
PanelRule panel_rule(double a, double b, int npanels);

}  // namespace netmoment::quadrature

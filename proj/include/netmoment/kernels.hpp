#pragma once

#include <vector>

#include "netmoment/geometry.hpp"

namespace netmoment::kernels {

// Poisson kernel of the upper half-plane, P_y(x) = y / (pi (x^2 + y^2)).
double poisson(double x, double y);

// Conjugate Poisson kernel, Q_y(x) = x / (pi (x^2 + y^2)).
double conj_poisson(double x, double y);

// x-derivatives of the two kernels.
double dpoisson_dx(double x, double y);
double dconj_poisson_dx(double x, double y);

// Convolutions of the kernels (and their x-derivatives) with the indicator
// of an interval J, in closed form:
//   (P_y * chi_J)(x)   = [atan((x-lo)/y) - atan((x-hi)/y)] / pi
//   (Q_y * chi_J)(x)   = log(((x-lo)^2+y^2) / ((x-hi)^2+y^2)) / (2 pi)
//   (P_y' * chi_J)(x)  = P_y(x-lo) - P_y(x-hi)
//   (Q_y' * chi_J)(x)  = Q_y(x-lo) - Q_y(x-hi)
double conv_indicator_P(double x, double y, const Interval& J);
double conv_indicator_Q(double x, double y, const Interval& J);
double conv_indicator_dP(double x, double y, const Interval& J);
double conv_indicator_dQ(double x, double y, const Interval& J);

// Principal-value Hilbert transform of chi_J: log(|x-lo| / |x-hi|) / pi.
// x must not coincide with an endpoint of J.
double hilbert_indicator(double x, const Interval& J);

// Discrete Hilbert transform of uniformly sampled, compactly supported data,
// via the spectral multiplier -i sign(frequency). The input is zero-padded by
// a factor of 4 before the transform to suppress circular wrap-around. The
// grid must have even length >= 4.
std::vector<double> hilbert_grid(const std::vector<double>& samples);

}  // namespace netmoment::kernels

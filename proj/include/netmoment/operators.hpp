#pragma once

#include <utility>
#include <vector>

#include "netmoment/fourier.hpp"
#include "netmoment/geometry.hpp"

namespace netmoment::operators {

// One piecewise-constant component piece: value on the open interval.
struct Piece {
  Interval support;
  double value = 0.0;
};

// Two-component piecewise-constant magnetization on S; zero outside the
// listed pieces. Pieces of one component must not overlap.
struct Magnetization {
  std::vector<Piece> pieces1;
  std::vector<Piece> pieces2;
};

void validate(const Magnetization& m, const Geometry& geom);

// Uniform samples of a scalar field on [grid_lo, grid_hi] (endpoints included).
struct FieldSamples {
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  std::vector<double> values;

  double spacing() const {
    return (grid_hi - grid_lo) / static_cast<double>(values.size() - 1);
  }
  double point(size_t i) const { return grid_lo + spacing() * static_cast<double>(i); }
  // Trapezoid quadrature weight of grid point i.
  double weight(size_t i) const {
    return (i == 0 || i + 1 == values.size()) ? 0.5 * spacing() : spacing();
  }
};

inline constexpr int kDefaultFieldGrid = 4096;

// b2[m](x) = -(P_h' * m1~)(x) + (Q_h' * m2~)(x), in closed form for
// piecewise-constant m.
double forward_field(const Magnetization& m, const Geometry& geom, double x);

FieldSamples forward_field_samples(const Magnetization& m, const Geometry& geom,
                                   int npoints = kDefaultFieldGrid);

// Fourier coefficients <b2[m], ghat_n>_{L2(K)} via an FFT of the closed-form
// field sampled on a 16N midpoint grid. Hermitian output.
FourierVector forward_coeffs(const Magnetization& m, const Geometry& geom, int N);

// Projection of arbitrary field samples onto the first N modes (trapezoid rule
// on the sample grid; the grid must span exactly [-q, q]).
FourierVector project_coeffs(const FieldSamples& field, const Geometry& geom, int N);

// b2*[phi](t) = ((P_h' * phi~)(t), (Q_h' * phi~)(t)) for t in S, by adaptive
// quadrature over K against the synthesized phi.
std::pair<double, double> adjoint_eval(const FourierVector& phi, const Geometry& geom,
                                       double t, double abs_tol = 1e-10);

// Same, for phi a piecewise-constant function on K (closed forms).
std::pair<double, double> adjoint_eval_indicator(const std::vector<Piece>& phi,
                                                 const Geometry& geom, double t);

enum class TargetField { E1, E2 };

// ||b2*[phi] - e||_{L2(S,R^2)} by adaptive quadrature over S.
double adjoint_residual(const FourierVector& phi, TargetField target,
                        const Geometry& geom, double abs_tol = 1e-8);

// Consistency check of b2[m] = -d/dx a2[m] with
// a2[m] = [P_h * (m1~ - H m2~)]|_K computed through the Hilbert transforms of
// the indicator pieces and numerical convolution, differentiated on the grid.
// Returns the sup deviation from forward_field on the interior grid.
double a2_identity_check(const Magnetization& m, const Geometry& geom,
                         int npoints = kDefaultFieldGrid);

// Exact moment and norm of the piecewise data.
std::pair<double, double> moment(const Magnetization& m);
double l2_norm2(const Magnetization& m);

}  // namespace netmoment::operators

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "netmoment/fourier.hpp"
#include "netmoment/operators.hpp"
#include "netmoment/spectral.hpp"

namespace netmoment::bep {

using spectral::GramMatrix;
using spectral::Space;

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct solver_error : numerical_error {
  using numerical_error::numerical_error;
};
struct bracket_error : numerical_error {
  using numerical_error::numerical_error;
};

// Treatment of the unpenalized n = 0 mode in the W012 system (mu_0 = 0):
//   Vanish : c_0 = -sum_{n != 0} (-1)^n c_n, so the solution vanishes at +-q
//   Exclude: c_0 = 0
//   Keep   : the literal unpenalized k = 0 equation stays in the system
// Vanish reproduces the source tables; the alternatives are kept as knobs.
enum class ZeroMode { Vanish, Exclude, Keep };

enum class Target { E1, E2 };

struct BepSolution {
  FourierVector coeffs;
  double lambda = 0.0;
  double M_achieved = 0.0;
  double residual = 0.0;
  Space space = Space::L2;
  ZeroMode zero_mode = ZeroMode::Vanish;
  Geometry geom;
};

// Prefactored real reduction of one (G, r, space) problem; solves share it.
class BepSystem {
 public:
  BepSystem(const GramMatrix& G, const FourierVector& r, Space space,
            ZeroMode zero_mode, double target_norm2);

  BepSolution solve(double lambda) const;
  // Shifted-constraint variant: (G + lambda D) c = r + lambda D f.
  // M_achieved reports ||c - f|| in the space norm.
  BepSolution solve_shifted(double lambda, const FourierVector& f) const;

  // Residual of the reduced linear system, sup-norm relative to the rhs.
  double linear_system_defect(const BepSolution& sol) const;

  Space space() const { return space_; }
  double target_norm2() const { return target_norm2_; }

 private:
  Eigen::VectorXd solve_reduced(double lambda, const Eigen::VectorXd& rhs) const;
  BepSolution finish(double lambda, const Eigen::VectorXd& x_red,
                     const FourierVector* shift) const;

  int N_;
  Space space_;
  ZeroMode zero_mode_;
  double target_norm2_;
  Geometry geom_;
  Eigen::MatrixXd A_full_;   // real symmetric Gram form, full coordinates
  Eigen::VectorXd b_full_;   // real rhs, full coordinates
  Eigen::VectorXd d_full_;   // penalty diagonal in full coordinates
  Eigen::MatrixXd S_;        // closure embedding: full = S_ * reduced
  Eigen::MatrixXd A_red_;    // S^T A S
  Eigen::VectorXd b_red_;    // S^T b
  Eigen::VectorXd d_red_;    // diagonal of S^T D S (diagonal by construction)
};

// ||e_i||^2_{L2(S,R^2)} for the indicator targets.
double indicator_norm2(const Geometry& geom);

BepSolution solve_fixed_lambda(const GramMatrix& G, const FourierVector& r,
                               double lambda, Space space,
                               ZeroMode zero_mode = ZeroMode::Vanish,
                               double target_norm2 = -1.0);

// Saturates ||phi|| = M_target by bisection on log10(lambda) in [-14, 6],
// using the strict monotone decrease of M(lambda).
BepSolution solve_for_M(const GramMatrix& G, const FourierVector& r, double M_target,
                        Space space, ZeroMode zero_mode = ZeroMode::Vanish,
                        double target_norm2 = -1.0, double rel_tol = 1e-6,
                        int max_iter = 200);

struct SweepRow {
  double lambda = 0.0;
  double M = 0.0;
  double residual = 0.0;
  bool ok = true;
  std::string error;
};

std::vector<SweepRow> lambda_sweep(const GramMatrix& G, const FourierVector& r,
                                   const std::vector<double>& lambdas, Space space,
                                   ZeroMode zero_mode = ZeroMode::Vanish,
                                   double target_norm2 = -1.0);

// Normalized violation of lambda M^2 = -( c^H G c - Re(r^H c) ).
// Returns 0 for the trivial solution by convention.
double saturation_check(const BepSolution& sol, const GramMatrix& G,
                        const FourierVector& r);

BepSolution solve_shifted(const GramMatrix& G, const FourierVector& r,
                          const FourierVector& f, double lambda, Space space,
                          ZeroMode zero_mode = ZeroMode::Vanish,
                          double target_norm2 = -1.0);

// Eigenvalues of the real symmetric Gram form, descending.
std::vector<double> spectral_decay(const GramMatrix& G);

}  // namespace netmoment::bep

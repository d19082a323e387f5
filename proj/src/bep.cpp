#include "netmoment/bep.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace netmoment::bep {

namespace {

Eigen::VectorXd penalty_diagonal(int N, Space space, const Geometry& geom) {
  Eigen::VectorXd d(2 * N + 1);
  if (space == Space::L2) {
    d.setOnes();
    return d;
  }
  d(0) = 0.0;  // mu_0 = 0
  for (int n = 1; n <= N; ++n) {
    const double mu = spectral::eigenvalue_mu(n, geom.q);
    d(2 * n - 1) = mu;
    d(2 * n) = mu;
  }
  return d;
}

Eigen::MatrixXd closure_embedding(int N, Space space, ZeroMode zero_mode) {
  const int full = 2 * N + 1;
  if (space == Space::L2 || zero_mode == ZeroMode::Keep)
    return Eigen::MatrixXd::Identity(full, full);

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(full, full - 1);
  for (int col = 0; col < full - 1; ++col) S(col + 1, col) = 1.0;
  if (zero_mode == ZeroMode::Vanish) {
    // a0 = -sqrt(2) sum_n (-1)^n a_n  makes the synthesized phi vanish at +-q.
    const double rt2 = std::sqrt(2.0);
    for (int n = 1; n <= N; ++n) {
      const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
      S(0, 2 * n - 2) = -rt2 * sgn;  // a_n column (full index 2n-1)
    }
  }
  return S;
}

}  // namespace

double indicator_norm2(const Geometry& geom) { return 2.0 * geom.s; }

BepSystem::BepSystem(const GramMatrix& G, const FourierVector& r, Space space,
                     ZeroMode zero_mode, double tnorm2)
    : N_(G.N),
      space_(space),
      zero_mode_(zero_mode),
      target_norm2_(tnorm2 >= 0.0 ? tnorm2 : indicator_norm2(G.geom)),
      geom_(G.geom) {
  const auto sys = spectral::to_real_system(G, r);
  A_full_ = sys.A;
  b_full_ = sys.b;
  d_full_ = penalty_diagonal(N_, space_, geom_);
  S_ = closure_embedding(N_, space_, zero_mode_);
  A_red_ = S_.transpose() * A_full_ * S_;
  b_red_ = S_.transpose() * b_full_;
  // S^T D S stays diagonal for every closure here: the only off-diagonal
  // coupling S introduces targets the a0 coordinate, whose penalty is zero.
  d_red_ = (S_.transpose() * d_full_.asDiagonal() * S_).diagonal();
}

Eigen::VectorXd BepSystem::solve_reduced(double lambda, const Eigen::VectorXd& rhs) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("bep: lambda must be positive");
  Eigen::MatrixXd M = A_red_;
  M.diagonal() += lambda * d_red_;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() == Eigen::Success) {
    const Eigen::VectorXd x = ldlt.solve(rhs);
    if (x.allFinite()) return x;
  }
  throw solver_error("bep: regularized system is numerically singular at lambda=" +
                     std::to_string(lambda));
}

BepSolution BepSystem::finish(double lambda, const Eigen::VectorXd& x_red,
                              const FourierVector* shift) const {
  const Eigen::VectorXd x = S_ * x_red;
  BepSolution sol;
  sol.coeffs = spectral::fourier_from_real_coords(x, N_);
  sol.lambda = lambda;
  sol.space = space_;
  sol.zero_mode = zero_mode_;
  sol.geom = geom_;
  sol.residual = std::sqrt(std::max(
      0.0, x.dot(A_full_ * x) - 2.0 * b_full_.dot(x) + target_norm2_));
  Eigen::VectorXd dev = x;
  if (shift) dev -= spectral::real_coords_from_fourier(*shift);
  sol.M_achieved = (space_ == Space::L2)
                       ? dev.norm()
                       : std::sqrt(dev.dot(d_full_.asDiagonal() * dev));
  return sol;
}

BepSolution BepSystem::solve(double lambda) const {
  return finish(lambda, solve_reduced(lambda, b_red_), nullptr);
}

BepSolution BepSystem::solve_shifted(double lambda, const FourierVector& f) const {
  if (f.N != N_) throw std::invalid_argument("solve_shifted: order mismatch");
  const Eigen::VectorXd xf = spectral::real_coords_from_fourier(f);
  const Eigen::VectorXd rhs =
      b_red_ + lambda * (S_.transpose() * (d_full_.asDiagonal() * xf));
  return finish(lambda, solve_reduced(lambda, rhs), &f);
}

double BepSystem::linear_system_defect(const BepSolution& sol) const {
  const Eigen::VectorXd x = spectral::real_coords_from_fourier(sol.coeffs);
  const Eigen::VectorXd x_red = S_.transpose() * x;  // S has orthonormal-ish columns
  Eigen::MatrixXd M = A_red_;
  M.diagonal() += sol.lambda * d_red_;
  // Recover the reduced coordinates exactly for the Vanish closure, where
  // S^T S != I in the first column block.
  const Eigen::VectorXd x_exact =
      (S_.transpose() * S_).ldlt().solve(S_.transpose() * x);
  const double scale = b_red_.lpNorm<Eigen::Infinity>();
  return (M * x_exact - b_red_).lpNorm<Eigen::Infinity>() / std::max(scale, 1e-300);
}

BepSolution solve_fixed_lambda(const GramMatrix& G, const FourierVector& r,
                               double lambda, Space space, ZeroMode zero_mode,
                               double tnorm2) {
  return BepSystem(G, r, space, zero_mode, tnorm2).solve(lambda);
}

BepSolution solve_for_M(const GramMatrix& G, const FourierVector& r, double M_target,
                        Space space, ZeroMode zero_mode, double tnorm2, double rel_tol,
                        int max_iter) {
  if (!(M_target > 0.0)) throw std::invalid_argument("solve_for_M: M_target must be > 0");
  const BepSystem sys(G, r, space, zero_mode, tnorm2);

  double u_lo = -14.0, u_hi = 6.0;
  const BepSolution at_lo = sys.solve(std::pow(10.0, u_lo));
  const BepSolution at_hi = sys.solve(std::pow(10.0, u_hi));
  if (M_target > at_lo.M_achieved || M_target < at_hi.M_achieved) {
    throw bracket_error("solve_for_M: M_target=" + std::to_string(M_target) +
                        " outside reachable range [" + std::to_string(at_hi.M_achieved) +
                        ", " + std::to_string(at_lo.M_achieved) +
                        "] for lambda in [1e-14, 1e6]");
  }

  BepSolution best = at_lo;
  for (int it = 0; it < max_iter; ++it) {
    const double u_mid = 0.5 * (u_lo + u_hi);
    best = sys.solve(std::pow(10.0, u_mid));
    if (std::abs(best.M_achieved - M_target) / M_target < rel_tol) return best;
    // M(lambda) is strictly decreasing.
    if (best.M_achieved > M_target)
      u_lo = u_mid;
    else
      u_hi = u_mid;
  }
  throw solver_error("solve_for_M: bisection did not converge to relative tolerance " +
                     std::to_string(rel_tol));
}

std::vector<SweepRow> lambda_sweep(const GramMatrix& G, const FourierVector& r,
                                   const std::vector<double>& lambdas, Space space,
                                   ZeroMode zero_mode, double tnorm2) {
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("lambda_sweep: lambdas must be positive");
  const BepSystem sys(G, r, space, zero_mode, tnorm2);
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double l : lambdas) {
    SweepRow row;
    row.lambda = l;
    try {
      const BepSolution sol = sys.solve(l);
      row.M = sol.M_achieved;
      row.residual = sol.residual;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      row.M = row.residual = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double saturation_check(const BepSolution& sol, const GramMatrix& G,
                        const FourierVector& r) {
  const double M2 = sol.M_achieved * sol.M_achieved;
  if (M2 == 0.0) return 0.0;

  const int n = sol.coeffs.size();
  Eigen::VectorXcd c(n), rv(n);
  for (int i = 0; i < n; ++i) {
    c(i) = sol.coeffs.coeffs[static_cast<size_t>(i)];
    rv(i) = r.coeffs[static_cast<size_t>(i)];
  }
  const double quad = (c.adjoint() * G.entries * c).value().real();
  const double lin = (rv.adjoint() * c).value().real();
  return std::abs(sol.lambda * M2 + (quad - lin)) / (sol.lambda * M2);
}

BepSolution solve_shifted(const GramMatrix& G, const FourierVector& r,
                          const FourierVector& f, double lambda, Space space,
                          ZeroMode zero_mode, double tnorm2) {
  return BepSystem(G, r, space, zero_mode, tnorm2).solve_shifted(lambda, f);
}

std::vector<double> spectral_decay(const GramMatrix& G) {
  FourierVector zero(G.N);
  const auto sys = spectral::to_real_system(G, zero);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sys.A, Eigen::EigenvaluesOnly);
  std::vector<double> vals(eig.eigenvalues().data(),
                           eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

}  // namespace netmoment::bep

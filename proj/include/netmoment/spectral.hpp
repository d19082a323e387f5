#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "netmoment/fourier.hpp"
#include "netmoment/geometry.hpp"

namespace netmoment::spectral {

struct assembly_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Space { L2, W012 };

// Normalized Laplacian eigenfunction on K: exp(i n pi x / q) / sqrt(2q).
std::complex<double> basis_eval(int n, double x, double q);

// Laplacian eigenvalue mu_n = (n pi / q)^2.
double eigenvalue_mu(int n, double q);

// I(t1,t2,x) = P_h'(x-t1) P_h'(x-t2) + Q_h'(x-t1) Q_h'(x-t2).
double kernel_I(double t1, double t2, double x, double h);

// k(t1,t2) = int_{-s}^{s} I(t1,t2,x) dx, by adaptive Gauss-Legendre to 1e-10.
double kernel_k(double t1, double t2, const Geometry& geom);

// Gram matrix of the adjoint images of the normalized basis,
//   entry(n,k) = <b2*[ghat_k], b2*[ghat_n]>_{L2(S,R^2)}
//             = (1/2q) iint_{KxK} k(t1,t2) e^{-i n pi t1 / q} e^{i k pi t2 / q} dt1 dt2.
// Hermitian and positive semi-definite; eigenvalues decay to zero.
struct GramMatrix {
  Geometry geom;
  int N = 0;
  int panels = 0;  // Fourier-quadrature panels per dimension used in assembly
  Space space = Space::L2;
  Eigen::MatrixXcd entries;  // (2N+1) x (2N+1), index = N + n

  std::complex<double> entry(int n, int k) const { return entries(N + n, N + k); }
};

struct AssemblyOptions {
  int panels = 0;           // 0: pick from N and geometry
  bool self_check = true;   // compare 5 random entries against 2D quadrature
  unsigned check_seed = 12345;
};

GramMatrix gram_assemble(const Geometry& geom, int N, Space space = Space::L2,
                         const AssemblyOptions& opts = {});

// Direct 2D quadrature of a single Gram entry (slow; used for cross-checks).
std::complex<double> gram_entry_quadrature(const Geometry& geom, int n, int k,
                                           double abs_tol = 1e-9);

enum class Target { E1, E2 };

// Right-hand side r_n = <e_i, b2*[ghat_n]>_{L2(S,R^2)}. Closed-form integrands:
//   e1: int_S P_h'(x-t) dx = P_h(s-t) - P_h(s+t)      (P even)
//   e2: int_S Q_h'(x-t) dx = Q_h(s-t) + Q_h(s+t)      (Q odd)
// evaluated against conj(ghat_n) by composite Gauss-Legendre panels.
FourierVector rhs_vector(const Geometry& geom, int N, Target target, int panels = 0);

// Reduction of the Hermitian system to an equivalent real symmetric one over
// the orthonormal trigonometric basis {1, cos(n pi x/q), sin(n pi x/q)}/norm.
// Real coordinate layout: x = [a0, a1, b1, a2, b2, ...] with
//   c0 = a0,  c_n = (a_n - i b_n)/sqrt(2),  c_{-n} = conj(c_n).
struct RealSystem {
  Eigen::MatrixXd A;  // (2N+1) x (2N+1) symmetric
  Eigen::VectorXd b;  // (2N+1)
  int N = 0;
};
RealSystem to_real_system(const GramMatrix& G, const FourierVector& r,
                          double hermitian_tol = 1e-12);

Eigen::VectorXd real_coords_from_fourier(const FourierVector& c);
FourierVector fourier_from_real_coords(const Eigen::VectorXd& x, int N);

// Gram cache: binary files keyed by exact (s, q, h, N, panels) equality.
// Directory resolution: explicit argument, else $NETMOMENT_CACHE_DIR, else
// ./.netmoment-cache.
std::string cache_directory(const std::string& override_dir = "");
std::string cache_file_path(const std::string& dir, const Geometry& geom, int N,
                            int panels);
bool save_gram_cache(const GramMatrix& G, const std::string& dir = "");
std::optional<GramMatrix> load_gram_cache(const Geometry& geom, int N, int panels,
                                          const std::string& dir = "");

// Default panel count used by gram_assemble / rhs_vector for this order.
int default_panels(const Geometry& geom, int N);

}  // namespace netmoment::spectral

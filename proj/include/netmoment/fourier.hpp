#pragma once

#include <complex>
#include <vector>

namespace netmoment {

// Truncated expansion on the normalized Fourier basis of K = (-q, q),
//   ghat_n(x) = exp(i n pi x / q) / sqrt(2q),   n = -N..N,
// stored as coeffs[N + n]. A real-valued function has Hermitian symmetry
// c_{-n} = conj(c_n) with real c_0.
struct FourierVector {
  int N = 0;
  std::vector<std::complex<double>> coeffs;

  FourierVector() = default;
  explicit FourierVector(int order)
      : N(order), coeffs(static_cast<size_t>(2 * order + 1), {0.0, 0.0}) {}

  int size() const { return 2 * N + 1; }
  std::complex<double>& at(int n) { return coeffs[static_cast<size_t>(N + n)]; }
  const std::complex<double>& at(int n) const {
    return coeffs[static_cast<size_t>(N + n)];
  }

  // Max deviation from Hermitian symmetry.
  double hermitian_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermitian_defect() <= tol; }
  // Force exact Hermitian symmetry by averaging c_n with conj(c_{-n}).
  void symmetrize();

  // l2 norm of the coefficients = L2(K) norm of the synthesized function.
  double l2_norm() const;
  // Weighted norm sqrt(sum mu_n |c_n|^2) with mu_n = (n pi / q)^2
  // = L2(K) norm of the derivative.
  double w_norm(double q) const;

  // Pointwise synthesis phi(x) = sum c_n ghat_n(x).
  std::complex<double> synth(double x, double q) const;
  // Real part of the synthesis (the value, for Hermitian vectors).
  double synth_real(double x, double q) const;
};

FourierVector operator+(const FourierVector& a, const FourierVector& b);
FourierVector operator-(const FourierVector& a, const FourierVector& b);
FourierVector operator*(double scale, const FourierVector& a);

}  // namespace netmoment

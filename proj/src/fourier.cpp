#include "netmoment/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netmoment {

double FourierVector::hermitian_defect() const {
  double worst = 0.0;
  for (int n = 0; n <= N; ++n)
    worst = std::max(worst, std::abs(at(n) - std::conj(at(-n))));
  return worst;
}

void FourierVector::symmetrize() {
  for (int n = 1; n <= N; ++n) {
    const auto avg = 0.5 * (at(n) + std::conj(at(-n)));
    at(n) = avg;
    at(-n) = std::conj(avg);
  }
  at(0) = std::complex<double>(at(0).real(), 0.0);
}

double FourierVector::l2_norm() const {
  double acc = 0.0;
  for (const auto& c : coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

double FourierVector::w_norm(double q) const {
  double acc = 0.0;
  for (int n = -N; n <= N; ++n) {
    const double freq = n * std::numbers::pi / q;
    acc += freq * freq * std::norm(at(n));
  }
  return std::sqrt(acc);
}

std::complex<double> FourierVector::synth(double x, double q) const {
  // Accumulate with a recurrent phase rotation, fixed order n = -N..N.
  const double theta = std::numbers::pi * x / q;
  const std::complex<double> step(std::cos(theta), std::sin(theta));
  std::complex<double> phase(std::cos(-N * theta), std::sin(-N * theta));
  std::complex<double> acc(0.0, 0.0);
  for (int n = -N; n <= N; ++n) {
    acc += at(n) * phase;
    phase *= step;
  }
  return acc / std::sqrt(2.0 * q);
}

double FourierVector::synth_real(double x, double q) const { return synth(x, q).real(); }

static void check_same_order(const FourierVector& a, const FourierVector& b) {
  if (a.N != b.N) throw std::invalid_argument("FourierVector: order mismatch");
}

FourierVector operator+(const FourierVector& a, const FourierVector& b) {
  check_same_order(a, b);
  FourierVector out(a.N);
  for (int i = 0; i < a.size(); ++i) out.coeffs[i] = a.coeffs[i] + b.coeffs[i];
  return out;
}

FourierVector operator-(const FourierVector& a, const FourierVector& b) {
  check_same_order(a, b);
  FourierVector out(a.N);
  for (int i = 0; i < a.size(); ++i) out.coeffs[i] = a.coeffs[i] - b.coeffs[i];
  return out;
}

FourierVector operator*(double scale, const FourierVector& a) {
  FourierVector out(a.N);
  for (int i = 0; i < a.size(); ++i) out.coeffs[i] = scale * a.coeffs[i];
  return out;
}

}  // namespace netmoment

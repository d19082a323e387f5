#include "netmoment/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace netmoment::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

void require_height(double y) {
  if (!(y > 0.0)) throw std::domain_error("kernel height y must be positive");
}

// FFTW planning is not thread-safe; execution of a ready plan is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double poisson(double x, double y) {
  require_height(y);
  return y / (kPi * (x * x + y * y));
}

double conj_poisson(double x, double y) {
  require_height(y);
  return x / (kPi * (x * x + y * y));
}

double dpoisson_dx(double x, double y) {
  require_height(y);
  const double r2 = x * x + y * y;
  return -2.0 * x * y / (kPi * r2 * r2);
}

double dconj_poisson_dx(double x, double y) {
  require_height(y);
  const double r2 = x * x + y * y;
  return (y * y - x * x) / (kPi * r2 * r2);
}

double conv_indicator_P(double x, double y, const Interval& J) {
  require_height(y);
  return (std::atan((x - J.lo) / y) - std::atan((x - J.hi) / y)) / kPi;
}

double conv_indicator_Q(double x, double y, const Interval& J) {
  require_height(y);
  const double a = x - J.lo, b = x - J.hi;
  return 0.5 / kPi * std::log((a * a + y * y) / (b * b + y * y));
}

double conv_indicator_dP(double x, double y, const Interval& J) {
  return poisson(x - J.lo, y) - poisson(x - J.hi, y);
}

double conv_indicator_dQ(double x, double y, const Interval& J) {
  return conj_poisson(x - J.lo, y) - conj_poisson(x - J.hi, y);
}

double hilbert_indicator(double x, const Interval& J) {
  if (x == J.lo || x == J.hi)
    throw std::domain_error("hilbert_indicator: singular at interval endpoints");
  return std::log(std::abs(x - J.lo) / std::abs(x - J.hi)) / kPi;
}

std::vector<double> hilbert_grid(const std::vector<double>& samples) {
  const size_t m = samples.size();
  if (m < 4 || m % 2 != 0)
    throw std::invalid_argument("hilbert_grid: need an even grid of length >= 4");

  // The circular kernel differs from 1/(pi u) by ~ pi u / (3 L^2); an 8x
  // padded circle keeps that correction below 1e-5 across a +-50 window
  // for unit-mass data.
  const size_t padded = 8 * m;
  const size_t offset = (padded - m) / 2;  // center the data in the padded window
  std::vector<double> in(padded, 0.0);
  for (size_t i = 0; i < m; ++i) in[offset + i] = samples[i];

  const size_t nspec = padded / 2 + 1;
  std::vector<fftw_complex> spec(nspec);
  std::vector<double> out(padded);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(padded), in.data(), spec.data(),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(padded), spec.data(), out.data(),
                               FFTW_ESTIMATE);
  }
  fftw_execute(fwd);

  // Multiply by -i on strictly positive frequencies; zero out DC and Nyquist.
  spec[0][0] = spec[0][1] = 0.0;
  spec[nspec - 1][0] = spec[nspec - 1][1] = 0.0;
  for (size_t k = 1; k + 1 < nspec; ++k) {
    const double re = spec[k][0], im = spec[k][1];
    spec[k][0] = im;
    spec[k][1] = -re;
  }
  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }

  std::vector<double> result(m);
  const double scale = 1.0 / static_cast<double>(padded);
  for (size_t i = 0; i < m; ++i) result[i] = out[offset + i] * scale;
  return result;
}

}  // namespace netmoment::kernels

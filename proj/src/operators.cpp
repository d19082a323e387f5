#include "netmoment/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "netmoment/kernels.hpp"
#include "netmoment/quadrature.hpp"

namespace netmoment::operators {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void validate(const Magnetization& m, const Geometry& geom) {
  geom.validate();
  auto check_component = [&](const std::vector<Piece>& pieces, const char* name) {
    std::vector<Interval> sorted;
    sorted.reserve(pieces.size());
    for (const auto& p : pieces) {
      if (!(p.support.lo < p.support.hi))
        throw std::invalid_argument(std::string("Magnetization: degenerate piece in ") +
                                    name);
      if (p.support.lo < -geom.s - 1e-12 || p.support.hi > geom.s + 1e-12)
        throw std::invalid_argument(std::string("Magnetization: piece outside S in ") +
                                    name);
      sorted.push_back(p.support);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i].lo < sorted[i - 1].hi - 1e-14)
        throw std::invalid_argument(std::string("Magnetization: overlapping pieces in ") +
                                    name);
  };
  check_component(m.pieces1, "m1");
  check_component(m.pieces2, "m2");
}

double forward_field(const Magnetization& m, const Geometry& geom, double x) {
  const double h = geom.h;
  double acc = 0.0;
  for (const auto& p : m.pieces1)
    acc -= p.value * kernels::conv_indicator_dP(x, h, p.support);
  for (const auto& p : m.pieces2)
    acc += p.value * kernels::conv_indicator_dQ(x, h, p.support);
  return acc;
}

FieldSamples forward_field_samples(const Magnetization& m, const Geometry& geom,
                                   int npoints) {
  if (npoints < 2) throw std::invalid_argument("forward_field_samples: npoints < 2");
  FieldSamples out;
  out.grid_lo = -geom.q;
  out.grid_hi = geom.q;
  out.values.resize(static_cast<size_t>(npoints));
  const double dx = (out.grid_hi - out.grid_lo) / (npoints - 1);
  for (int i = 0; i < npoints; ++i)
    out.values[static_cast<size_t>(i)] = forward_field(m, geom, out.grid_lo + i * dx);
  return out;
}

FourierVector forward_coeffs(const Magnetization& m, const Geometry& geom, int N) {
  if (N < 1) throw std::invalid_argument("forward_coeffs: N must be >= 1");
  validate(m, geom);
  // 16N oversampling, floored so that midpoint aliasing (set by the jump of
  // the field derivative at +-q, ~ 1/M^2) stays below 1e-8 at small N too.
  const int M = std::max(16 * N, 16384);
  const double q = geom.q;
  const double dx = 2.0 * q / M;

  std::vector<std::complex<double>> buf(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const double x = -q + (j + 0.5) * dx;  // midpoint grid
    buf[static_cast<size_t>(j)] = forward_field(m, geom, x);
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex*>(buf.data()),
                            reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }

  // c_n = dx (-1)^n e^{-i pi n / M} FFT_n / sqrt(2q), FFT index mod M.
  FourierVector c(N);
  const double norm = dx / std::sqrt(2.0 * q);
  for (int n = -N; n <= N; ++n) {
    const int idx = ((n % M) + M) % M;
    const double phase = -kPi * n / M;
    const std::complex<double> rot(std::cos(phase), std::sin(phase));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    c.at(n) = norm * sign * rot * buf[static_cast<size_t>(idx)];
  }
  c.symmetrize();
  return c;
}

FourierVector project_coeffs(const FieldSamples& field, const Geometry& geom, int N) {
  if (field.values.size() < 2)
    throw std::invalid_argument("project_coeffs: too few samples");
  if (std::abs(field.grid_lo + geom.q) > 1e-12 || std::abs(field.grid_hi - geom.q) > 1e-12)
    throw std::invalid_argument("project_coeffs: grid must span [-q, q]");
  FourierVector c(N);
  const double q = geom.q;
  const double norm = 1.0 / std::sqrt(2.0 * q);
  for (int n = -N; n <= N; ++n) {
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < field.values.size(); ++i) {
      const double theta = -n * kPi * field.point(i) / q;
      const double wf = field.weight(i) * field.values[i];
      re += wf * std::cos(theta);
      im += wf * std::sin(theta);
    }
    c.at(n) = std::complex<double>(re, im) * norm;
  }
  c.symmetrize();
  return c;
}

std::pair<double, double> adjoint_eval(const FourierVector& phi, const Geometry& geom,
                                       double t, double abs_tol) {
  const double q = geom.q, h = geom.h;
  const auto comp1 = [&](double u) {
    return kernels::dpoisson_dx(t - u, h) * phi.synth_real(u, q);
  };
  const auto comp2 = [&](double u) {
    return kernels::dconj_poisson_dx(t - u, h) * phi.synth_real(u, q);
  };
  // The kernels vary on the h scale around u = t.
  std::vector<double> breaks;
  if (std::abs(t) < q) breaks.push_back(t);
  const double v1 = quadrature::adaptive_split(comp1, -q, q, breaks, abs_tol);
  const double v2 = quadrature::adaptive_split(comp2, -q, q, breaks, abs_tol);
  return {v1, v2};
}

std::pair<double, double> adjoint_eval_indicator(const std::vector<Piece>& phi,
                                                 const Geometry& geom, double t) {
  double v1 = 0.0, v2 = 0.0;
  for (const auto& p : phi) {
    v1 += p.value * kernels::conv_indicator_dP(t, geom.h, p.support);
    v2 += p.value * kernels::conv_indicator_dQ(t, geom.h, p.support);
  }
  return {v1, v2};
}

double adjoint_residual(const FourierVector& phi, TargetField target,
                        const Geometry& geom, double abs_tol) {
  const auto integrand = [&](double t) {
    const auto [v1, v2] = adjoint_eval(phi, geom, t, abs_tol * 1e-2);
    const double d1 = v1 - (target == TargetField::E1 ? 1.0 : 0.0);
    const double d2 = v2 - (target == TargetField::E2 ? 1.0 : 0.0);
    return d1 * d1 + d2 * d2;
  };
  const double val = quadrature::adaptive(integrand, -geom.s, geom.s, abs_tol, 20);
  return std::sqrt(std::max(val, 0.0));
}

namespace {

// Hilbert transform of m2~, all pieces in closed form.
double hilbert_m2(const Magnetization& m, double t) {
  double acc = 0.0;
  for (const auto& p : m.pieces2) {
    if (t == p.support.lo || t == p.support.hi) continue;  // measure-zero grid hit
    acc += p.value * kernels::hilbert_indicator(t, p.support);
  }
  return acc;
}

double a2_eval(const Magnetization& m, const Geometry& geom, double x, double window) {
  const double h = geom.h;
  double acc = 0.0;
  // P * m1~: the integrand is supported on the pieces.
  for (const auto& p : m.pieces1) {
    const auto f = [&](double u) { return kernels::poisson(x - u, h) * p.value; };
    std::vector<double> br;
    if (p.support.contains(x)) br.push_back(x);
    acc += quadrature::adaptive_split(f, p.support.lo, p.support.hi, br, 1e-10);
  }
  // -P * (H m2~): log singularities at the piece endpoints, 1/t decay.
  const auto g = [&](double u) { return -kernels::poisson(x - u, h) * hilbert_m2(m, u); };
  std::vector<double> breaks{x};
  for (const auto& p : m.pieces2) {
    breaks.push_back(p.support.lo);
    breaks.push_back(p.support.hi);
  }
  acc += quadrature::adaptive_split(g, -window, window, breaks, 1e-10);
  return acc;
}

}  // namespace

double a2_identity_check(const Magnetization& m, const Geometry& geom, int npoints) {
  validate(m, geom);
  if (npoints < 16) throw std::invalid_argument("a2_identity_check: grid too small");
  const double q = geom.q;
  const double dx = 2.0 * q / (npoints - 1);
  const double window = 50.0 * std::max(1.0, geom.q);

  // a2 on the grid extended by the 5-point stencil margin.
  std::vector<double> a2(static_cast<size_t>(npoints) + 4);
  {
    std::atomic<int> next{-2};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= npoints + 2) break;
        a2[static_cast<size_t>(i + 2)] = a2_eval(m, geom, -q + i * dx, window);
      }
    };
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min(n, 16u); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  double worst = 0.0;
  for (int i = 2; i < npoints - 2; ++i) {
    const size_t j = static_cast<size_t>(i + 2);
    const double deriv =
        (a2[j - 2] - 8.0 * a2[j - 1] + 8.0 * a2[j + 1] - a2[j + 2]) / (12.0 * dx);
    const double field = forward_field(m, geom, -q + i * dx);
    worst = std::max(worst, std::abs(-deriv - field));
  }
  return worst;
}

std::pair<double, double> moment(const Magnetization& m) {
  double m1 = 0.0, m2 = 0.0;
  for (const auto& p : m.pieces1) m1 += p.value * p.support.length();
  for (const auto& p : m.pieces2) m2 += p.value * p.support.length();
  return {m1, m2};
}

double l2_norm2(const Magnetization& m) {
  double acc = 0.0;
  for (const auto& p : m.pieces1) acc += p.value * p.value * p.support.length();
  for (const auto& p : m.pieces2) acc += p.value * p.value * p.support.length();
  return acc;
}

}  // namespace netmoment::operators

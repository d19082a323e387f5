#include "netmoment/experiments.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace netmoment::experiments {

BuiltinMag builtin_by_name(const std::string& name) {
  if (name == "constant") return BuiltinMag::Constant;
  if (name == "large_support") return BuiltinMag::LargeSupport;
  if (name == "steps") return BuiltinMag::Steps;
  if (name == "small_support") return BuiltinMag::SmallSupport;
  throw std::invalid_argument("unknown builtin magnetization: " + name);
}

std::string builtin_name(BuiltinMag which) {
  switch (which) {
    case BuiltinMag::Constant: return "constant";
    case BuiltinMag::LargeSupport: return "large_support";
    case BuiltinMag::Steps: return "steps";
    case BuiltinMag::SmallSupport: return "small_support";
  }
  throw std::invalid_argument("unknown builtin magnetization enum");
}

Magnetization builtin_magnetization(BuiltinMag which) {
  Magnetization m;
  switch (which) {
    case BuiltinMag::Constant:
      m.pieces1 = {{{-1.0, 1.0}, -0.05}};
      m.pieces2 = {{{-1.0, 1.0}, 0.05}};
      break;
    case BuiltinMag::LargeSupport:
      m.pieces1 = {{{-1.0, 0.0}, -0.1}};
      m.pieces2 = {{{0.0, 1.0}, 0.1}};
      break;
    case BuiltinMag::Steps:
      m.pieces1 = {{{-0.2, 0.0}, -0.05},
                   {{0.0, 0.2}, -0.1},
                   {{0.2, 0.4}, -0.2},
                   {{0.4, 0.6}, -0.1},
                   {{0.6, 0.8}, -0.05}};
      m.pieces2 = {{{-0.8, -0.6}, 0.05},
                   {{-0.6, -0.4}, 0.1},
                   {{-0.4, -0.2}, 0.2},
                   {{-0.2, 0.0}, 0.1},
                   {{0.0, 0.2}, 0.05}};
      break;
    case BuiltinMag::SmallSupport:
      m.pieces1 = {{{-0.5, -0.49}, 10.0}, {{0.0, 0.01}, -10.0}, {{0.2, 0.21}, -10.0}};
      m.pieces2 = {{{-0.9, -0.89}, 10.0}, {{-0.3, -0.29}, -10.0}, {{0.2, 0.21}, 10.0}};
      break;
  }
  return m;
}

std::pair<double, double> true_moment(const Magnetization& m) {
  return operators::moment(m);
}

double estimate_moment(const FourierVector& data, const bep::BepSolution& phi) {
  if (data.N != phi.coeffs.N)
    throw std::invalid_argument("estimate_moment: truncation order mismatch");
  double acc = 0.0;
  for (int i = 0; i < data.size(); ++i)
    acc += (data.coeffs[static_cast<size_t>(i)] *
            std::conj(phi.coeffs.coeffs[static_cast<size_t>(i)]))
               .real();
  return acc;
}

double relative_error(double true_value, double estimate) {
  if (true_value == 0.0)
    throw std::domain_error("relative_error: undefined for zero true moment");
  return std::abs(true_value - estimate) / std::abs(true_value);
}

double grid_norm(const FieldSamples& f) {
  double acc = 0.0;
  for (size_t i = 0; i < f.values.size(); ++i)
    acc += f.weight(i) * f.values[i] * f.values[i];
  return std::sqrt(acc);
}

double grid_inner(const FieldSamples& a, const FieldSamples& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("grid_inner: grid mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    acc += a.weight(i) * a.values[i] * b.values[i];
  return acc;
}

namespace {

// Box-Muller over mt19937_64, spelled out so realizations are bit-stable.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform() {
    // 53-bit mantissa uniform in [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

FieldSamples generate_noise(const NoiseSpec& spec, const FieldSamples& like,
                            const Geometry& geom) {
  if (spec.level < 0.0) throw std::invalid_argument("noise level must be >= 0");
  FieldSamples eta;
  eta.grid_lo = like.grid_lo;
  eta.grid_hi = like.grid_hi;
  eta.values.assign(like.values.size(), 0.0);
  if (spec.level == 0.0) return eta;

  if (spec.shape == NoiseShape::GaussianGrid) {
    GaussianStream g(spec.seed);
    for (auto& v : eta.values) v = g.next();
  } else {
    const int n0 = 1 + static_cast<int>(spec.seed % 64);
    for (size_t i = 0; i < eta.values.size(); ++i)
      eta.values[i] = std::cos(n0 * std::numbers::pi * eta.point(i) / geom.q);
  }
  const double nrm = grid_norm(eta);
  const double scale = spec.level / nrm;
  for (auto& v : eta.values) v *= scale;
  return eta;
}

NoisyBound noisy_estimate_bound(const Magnetization& m, const bep::BepSolution& phi,
                                const NoiseSpec& noise, int target_component) {
  if (target_component != 1 && target_component != 2)
    throw std::invalid_argument("noisy_estimate_bound: target component is 1 or 2");
  const Geometry& geom = phi.geom;
  const auto data = operators::forward_coeffs(m, geom, phi.coeffs.N);
  const double clean = estimate_moment(data, phi);

  FieldSamples phi_grid;
  phi_grid.grid_lo = -geom.q;
  phi_grid.grid_hi = geom.q;
  phi_grid.values.resize(operators::kDefaultFieldGrid);
  const double dx = 2.0 * geom.q / (operators::kDefaultFieldGrid - 1);
  for (size_t i = 0; i < phi_grid.values.size(); ++i)
    phi_grid.values[i] =
        phi.coeffs.synth_real(-geom.q + dx * static_cast<double>(i), geom.q);

  const FieldSamples eta = generate_noise(noise, phi_grid, geom);
  const double noisy = clean + grid_inner(eta, phi_grid);

  const auto [m1, m2] = true_moment(m);
  const double truth = target_component == 1 ? m1 : m2;

  NoisyBound out;
  out.observed = std::abs(noisy - truth);
  out.bound = std::sqrt(operators::l2_norm2(m)) * phi.residual +
              phi.coeffs.l2_norm() * noise.level;
  return out;
}

MomentReport run_estimation(const Magnetization& m, const std::string& mag_name,
                            const bep::BepSolution& phi1, const bep::BepSolution& phi2,
                            const Geometry& geom) {
  if (phi1.space != phi2.space || phi1.lambda != phi2.lambda)
    throw std::invalid_argument("run_estimation: estimator pair mismatch");
  const auto data = operators::forward_coeffs(m, geom, phi1.coeffs.N);
  MomentReport rep;
  rep.magnetization = mag_name;
  rep.space = phi1.space;
  rep.lambda = phi1.lambda;
  std::tie(rep.m1_true, rep.m2_true) = true_moment(m);
  rep.m1_est = estimate_moment(data, phi1);
  rep.m2_est = estimate_moment(data, phi2);
  rep.eps1 = relative_error(rep.m1_true, rep.m1_est);
  rep.eps2 = relative_error(rep.m2_true, rep.m2_est);
  rep.M1 = phi1.M_achieved;
  rep.M2 = phi2.M_achieved;
  return rep;
}

}  // namespace netmoment::experiments

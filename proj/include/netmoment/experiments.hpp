#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netmoment/bep.hpp"
#include "netmoment/operators.hpp"

namespace netmoment::experiments {

using operators::FieldSamples;
using operators::Magnetization;

// The four synthetic magnetizations, with the piecewise data as printed.
enum class BuiltinMag { Constant, LargeSupport, Steps, SmallSupport };

BuiltinMag builtin_by_name(const std::string& name);
std::string builtin_name(BuiltinMag which);
Magnetization builtin_magnetization(BuiltinMag which);

// (<m1>, <m2>) exactly from the piecewise data.
std::pair<double, double> true_moment(const Magnetization& m);

// <b2[m], phi>_{L2(K)} = sum_n Re(data_n conj(c_n)) in the normalized basis.
double estimate_moment(const FourierVector& data, const bep::BepSolution& phi);

// |true - est| / |true|; true must be nonzero.
double relative_error(double true_value, double estimate);

enum class NoiseShape { GaussianGrid, SingleFrequency };

struct NoiseSpec {
  double level = 0.0;  // L2(K) norm of the generated noise
  std::uint64_t seed = 0;
  NoiseShape shape = NoiseShape::GaussianGrid;
};

// Noise realization on the sampling grid of `like`, rescaled so that its
// trapezoid-rule L2(K) norm equals level exactly. Bit-reproducible per seed.
FieldSamples generate_noise(const NoiseSpec& spec, const FieldSamples& like,
                            const Geometry& geom);

double grid_norm(const FieldSamples& f);
double grid_inner(const FieldSamples& a, const FieldSamples& b);

struct NoisyBound {
  double observed = 0.0;  // |<b2[m] + eta, phi> - <m_i>|
  double bound = 0.0;     // ||m|| * residual(phi) + ||phi||_{L2(K)} * ||eta||
};

// Evaluates the noisy estimation error and its a-priori bound for target
// component i (1 or 2). The noise term uses the L2(K) norm of phi (equal to
// M in the L2 space), which is what Cauchy-Schwarz guarantees.
NoisyBound noisy_estimate_bound(const Magnetization& m, const bep::BepSolution& phi,
                                const NoiseSpec& noise, int target_component);

struct MomentReport {
  std::string magnetization;
  bep::Space space = bep::Space::L2;
  double lambda = 0.0;
  double m1_true = 0.0, m2_true = 0.0;
  double m1_est = 0.0, m2_est = 0.0;
  double eps1 = 0.0, eps2 = 0.0;
  double M1 = 0.0, M2 = 0.0;  // achieved norms of the two estimators
};

// Runs the estimation pipeline for one magnetization with both estimators.
MomentReport run_estimation(const Magnetization& m, const std::string& mag_name,
                            const bep::BepSolution& phi1, const bep::BepSolution& phi2,
                            const Geometry& geom);

}  // namespace netmoment::experiments

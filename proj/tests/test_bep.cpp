#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "netmoment/bep.hpp"
#include "oracles.hpp"

using namespace netmoment;
namespace sp = netmoment::spectral;

namespace {

const Geometry& geom() {
  static Geometry g = reference_geometry();
  return g;
}

constexpr int kOrder = 24;

const sp::GramMatrix& gram() {
  static sp::GramMatrix G = sp::gram_assemble(geom(), kOrder);
  return G;
}

const FourierVector& rhs1() {
  static FourierVector r = sp::rhs_vector(geom(), kOrder, sp::Target::E1);
  return r;
}

const FourierVector& rhs2() {
  static FourierVector r = sp::rhs_vector(geom(), kOrder, sp::Target::E2);
  return r;
}

double complex_norm(const FourierVector& v) { return v.l2_norm(); }

}  // namespace

TEST_CASE("trivial and dominated solves") {
  FourierVector zero(kOrder);
  const auto sol = bep::solve_fixed_lambda(gram(), zero, 1e-3, bep::Space::L2);
  CHECK(sol.M_achieved == 0.0);
  CHECK(sol.residual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const double lam = 1e6;
  const auto big = bep::solve_fixed_lambda(gram(), rhs1(), lam, bep::Space::L2);
  CHECK(big.M_achieved <= complex_norm(rhs1()) / lam * (1.0 + 1e-3));
  CHECK(big.M_achieved > 0.0);

  CHECK_THROWS_AS(bep::solve_fixed_lambda(gram(), rhs1(), -1.0, bep::Space::L2),
                  std::invalid_argument);
}

TEST_CASE("solution realness and linear-system defect") {
  for (auto space : {bep::Space::L2, bep::Space::W012}) {
    for (auto mode : {bep::ZeroMode::Vanish, bep::ZeroMode::Exclude, bep::ZeroMode::Keep}) {
      const bep::BepSystem sys(gram(), rhs2(), space, mode, bep::indicator_norm2(geom()));
      const auto sol = sys.solve(1e-4);
      CHECK(sol.coeffs.is_hermitian(1e-13));
      auto rng = oracles::rng(5);
      for (int i = 0; i < 100; ++i) {
        const double x = oracles::uniform(rng, -geom().q, geom().q);
        CHECK(std::abs(sol.coeffs.synth(x, geom().q).imag()) < 1e-12);
      }
      CHECK(sys.linear_system_defect(sol) < 1e-10);
    }
  }
}

TEST_CASE("saturation identity holds and is sensitive") {
  for (auto [space, lam] :
       {std::pair{bep::Space::L2, 1e-3}, {bep::Space::L2, 1e-6},
        {bep::Space::W012, 1e-5}, {bep::Space::W012, 1e-8}}) {
    auto sol = bep::solve_fixed_lambda(gram(), rhs1(), lam, space);
    CHECK(bep::saturation_check(sol, gram(), rhs1()) < 1e-8);
    // a 1% perturbation must be visible
    for (auto& c : sol.coeffs.coeffs) c *= 1.01;
    sol.M_achieved *= 1.01;
    CHECK(bep::saturation_check(sol, gram(), rhs1()) > 1e-4);
  }
  FourierVector zero(kOrder);
  const auto trivial = bep::solve_fixed_lambda(gram(), zero, 1e-3, bep::Space::L2);
  CHECK(bep::saturation_check(trivial, gram(), zero) == 0.0);
}

TEST_CASE("lambda to M bisection round-trips") {
  const auto ref = bep::solve_fixed_lambda(gram(), rhs1(), 1e-3, bep::Space::L2);
  const auto sat = bep::solve_for_M(gram(), rhs1(), ref.M_achieved, bep::Space::L2);
  CHECK(sat.lambda == doctest::Approx(1e-3).epsilon(1e-4));
  CHECK(sat.M_achieved == doctest::Approx(ref.M_achieved).epsilon(1e-6));

  // shrinking targets drive lambda up and the solution toward zero
  const auto big_lam = bep::solve_fixed_lambda(gram(), rhs1(), 1e4, bep::Space::L2);
  const auto tiny = bep::solve_for_M(gram(), rhs1(), big_lam.M_achieved, bep::Space::L2);
  CHECK(tiny.lambda > 1e3);
  CHECK(tiny.M_achieved < 1e-3);

  CHECK_THROWS_AS(bep::solve_for_M(gram(), rhs1(), 1e20, bep::Space::L2),
                  bep::bracket_error);
  CHECK_THROWS_AS(bep::solve_for_M(gram(), rhs1(), 1e-30, bep::Space::L2),
                  bep::bracket_error);
  CHECK_THROWS_AS(bep::solve_for_M(gram(), rhs1(), -1.0, bep::Space::L2),
                  std::invalid_argument);
}

TEST_CASE("sweep: M decreasing, residual increasing") {
  std::vector<double> lambdas;
  for (int e = 1; e <= 9; ++e) lambdas.push_back(std::pow(10.0, -e));
  for (auto space : {bep::Space::L2, bep::Space::W012}) {
    const auto rows = bep::lambda_sweep(gram(), rhs1(), lambdas, space);
    REQUIRE(rows.size() == lambdas.size());
    for (size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].ok);
      CHECK(rows[i].M > rows[i - 1].M);                // lambda decreases down the list
      CHECK(rows[i].residual < rows[i - 1].residual);  // fit improves
    }
  }
  CHECK_THROWS_AS(bep::lambda_sweep(gram(), rhs1(), {1e-3, -1.0}, bep::Space::L2),
                  std::invalid_argument);
}

TEST_CASE("shifted solves") {
  const double lam = 1e-4;
  const auto plain = bep::solve_fixed_lambda(gram(), rhs1(), lam, bep::Space::L2);
  FourierVector zero(kOrder);
  const auto shifted0 = bep::solve_shifted(gram(), rhs1(), zero, lam, bep::Space::L2);
  for (int n = -kOrder; n <= kOrder; ++n)
    CHECK(std::abs(shifted0.coeffs.at(n) - plain.coeffs.at(n)) == 0.0);

  // large lambda keeps the solution near the shift
  const auto f = plain.coeffs;
  const double big = 1e5;
  const auto near_f = bep::solve_shifted(gram(), rhs1(), f, big, bep::Space::L2);
  Eigen::VectorXcd fv(2 * kOrder + 1), rv(2 * kOrder + 1);
  for (int i = 0; i < 2 * kOrder + 1; ++i) {
    fv(i) = f.coeffs[static_cast<size_t>(i)];
    rv(i) = rhs1().coeffs[static_cast<size_t>(i)];
  }
  const double drift = (rv - gram().entries * fv).norm();
  CHECK(near_f.M_achieved <= drift / big * (1.0 + 1e-3));

  // W012 variant solves (G + lam diag(mu)) d = r + lam diag(mu) f
  const auto wshift = bep::solve_shifted(gram(), rhs2(), f, 1e-5, bep::Space::W012);
  CHECK(wshift.coeffs.is_hermitian(1e-12));
  CHECK(wshift.M_achieved > 0.0);
}

TEST_CASE("zero-mode closures differ only in the unpenalized mode") {
  const double lam = 1e-6;
  const auto vanish =
      bep::solve_fixed_lambda(gram(), rhs2(), lam, bep::Space::W012, bep::ZeroMode::Vanish);
  const auto exclude =
      bep::solve_fixed_lambda(gram(), rhs2(), lam, bep::Space::W012, bep::ZeroMode::Exclude);
  const auto keep =
      bep::solve_fixed_lambda(gram(), rhs2(), lam, bep::Space::W012, bep::ZeroMode::Keep);

  const double q = geom().q;
  // vanish: the synthesized function is zero at the interval ends
  CHECK(std::abs(vanish.coeffs.synth_real(q, q)) < 1e-10);
  CHECK(std::abs(vanish.coeffs.synth_real(-q, q)) < 1e-10);
  // exclude: the zero coefficient is pinned
  CHECK(std::abs(exclude.coeffs.at(0)) == 0.0);
  // keep: the literal k = 0 equation holds
  Eigen::VectorXcd dv(2 * kOrder + 1), rv(2 * kOrder + 1);
  for (int i = 0; i < 2 * kOrder + 1; ++i) {
    dv(i) = keep.coeffs.coeffs[static_cast<size_t>(i)];
    rv(i) = rhs2().coeffs[static_cast<size_t>(i)];
  }
  const std::complex<double> row0 = (gram().entries.row(kOrder) * dv).value();
  CHECK(std::abs(row0 - rv(kOrder)) < 1e-10);

  // e1 is odd, so all closures coincide there
  const auto v1 =
      bep::solve_fixed_lambda(gram(), rhs1(), lam, bep::Space::W012, bep::ZeroMode::Vanish);
  const auto e1 =
      bep::solve_fixed_lambda(gram(), rhs1(), lam, bep::Space::W012, bep::ZeroMode::Exclude);
  CHECK(std::abs(v1.M_achieved - e1.M_achieved) < 1e-9 * v1.M_achieved);
}

TEST_CASE("W012 norm accounting matches quadrature of the derivative") {
  const auto sol =
      bep::solve_fixed_lambda(gram(), rhs1(), 1e-6, bep::Space::W012);
  CHECK(sol.M_achieved == doctest::Approx(sol.coeffs.w_norm(geom().q)).epsilon(1e-12));

  // synthesize the derivative and integrate its square
  const double q = geom().q;
  FourierVector deriv(kOrder);
  for (int n = -kOrder; n <= kOrder; ++n)
    deriv.at(n) = sol.coeffs.at(n) * std::complex<double>(0.0, n * M_PI / q);
  const double quad = oracles::integrate(
      [&](double x) {
        const double v = deriv.synth_real(x, q);
        return v * v;
      },
      -q, q, 1e-12);
  CHECK(std::sqrt(quad) == doctest::Approx(sol.M_achieved).epsilon(1e-6));
  // and the L2 norm stays finite and sane
  CHECK(sol.coeffs.l2_norm() < sol.M_achieved);
}

TEST_CASE("spectral decay of the gram form") {
  const auto vals = bep::spectral_decay(gram());
  REQUIRE(vals.size() == static_cast<size_t>(2 * kOrder + 1));
  CHECK(vals.front() > 0.0);
  for (size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1]);
  CHECK(vals.back() > -1e-10 * vals.front());
}

#include <doctest.h>

#include "qme/dynamics.hpp"
#include "qme/gaussian.hpp"
#include "test_helpers.hpp"

using namespace qme;
using test::max_abs;

namespace {

RealMatrix tmsv_cov_raw(double r) { return tmsv_covariance(r, 0.0).cov; }

// Squeezing-bath chain shared by several cases: bath -> Fock jump operators
// -> quadrature rows -> drift/diffusion.
DriftDiffusion squeezing_dd(double r, double theta, Index d = 4) {
  const BathState bath = bath_from_squeezing(r, theta);
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  const Subsystems osc{SubsystemSpec::oscillator(d), SubsystemSpec::oscillator(d)};
  return drift_diffusion(jumps_to_quadrature(jump_ops_2q(bath, osc, c), {d, d}));
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("symplectic form and vacuum") {
  const RealMatrix omega = symplectic_form(2);
  CHECK((omega + omega.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(omega(0, 2) == 1.0);
  CHECK(omega(2, 0) == -1.0);
  const GaussianState vac = GaussianState::vacuum(2);
  CHECK((vac.cov - RealMatrix::Identity(4, 4) / 2.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-mode squeezed covariance") {
  SUBCASE("r = 0 is the vacuum") {
    CHECK((tmsv_cov_raw(0.0) - RealMatrix::Identity(4, 4) / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("r = 1 entries") {
    const RealMatrix cov = tmsv_cov_raw(1.0);
    CHECK(cov(0, 0) == doctest::Approx(std::cosh(2.0) / 2.0).epsilon(1e-12));
    CHECK(cov(0, 0) == doctest::Approx(1.8811).epsilon(1e-4));
    CHECK(cov(0, 1) == doctest::Approx(-1.8134).epsilon(1e-4));
    CHECK(cov(2, 3) == doctest::Approx(+1.8134).epsilon(1e-4));
  }
  SUBCASE("pure for every r") {
    for (double r : {0.3, 1.0, 2.5}) {
      const RealVector nu = symplectic_eigenvalues(tmsv_cov_raw(r));
      REQUIRE(nu.size() == 2);
      CHECK(nu(0) == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(nu(1) == doctest::Approx(0.5).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(tmsv_covariance(-0.2), std::invalid_argument);
}

TEST_CASE("quadrature extraction from Fock operators") {
  SUBCASE("single-mode loss") {
    const double gamma = 0.8;
    const Index d = 6;
    std::vector<OperatorMatrix> jumps{
        OperatorMatrix({d}, Matrix(std::sqrt(gamma) * annihilation(d)))};
    const LinearJumpSet set = jumps_to_quadrature(jumps, {d});
    REQUIRE(set.c.rows() == 1);
    CHECK(std::abs(set.c(0, 0) - Complex(std::sqrt(gamma / 2.0), 0.0)) < 1e-12);
    CHECK(std::abs(set.c(0, 1) - Complex(0.0, std::sqrt(gamma / 2.0))) < 1e-12);
  }
  SUBCASE("unsqueezed bath gives two independent loss rows") {
    const BathState bath = bath_from_squeezing(0.0, 0.0);
    const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
    const Subsystems osc{SubsystemSpec::oscillator(4), SubsystemSpec::oscillator(4)};
    const LinearJumpSet set = jumps_to_quadrature(jump_ops_2q(bath, osc, c), {4, 4});
    // row 0 touches only mode 1, row 1 only mode 2
    CHECK(std::abs(set.c(0, 1)) < 1e-14);
    CHECK(std::abs(set.c(0, 3)) < 1e-14);
    CHECK(std::abs(set.c(1, 0)) < 1e-14);
    CHECK(std::abs(set.c(1, 2)) < 1e-14);
  }
  SUBCASE("squeezing rows mix the two modes with cosh/sinh weights") {
    const double r = 1.0;
    const BathState bath = bath_from_squeezing(r, 0.0);
    const double big_gamma = effective_rate(bath, 1.0);
    const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
    const Subsystems osc{SubsystemSpec::oscillator(5), SubsystemSpec::oscillator(5)};
    const LinearJumpSet set = jumps_to_quadrature(jump_ops_2q(bath, osc, c), {5, 5});
    const double q1 = std::sqrt(big_gamma / 2.0) * std::cosh(r);
    const double q2 = std::sqrt(big_gamma / 2.0) * std::sinh(r);
    CHECK(std::abs(set.c(0, 0) - Complex(q1, 0.0)) < 1e-12);
    CHECK(std::abs(set.c(0, 1) - Complex(q2, 0.0)) < 1e-12);
    CHECK(std::abs(set.c(0, 2) - Complex(0.0, q1)) < 1e-12);
    CHECK(std::abs(set.c(0, 3) - Complex(0.0, -q2)) < 1e-12);
  }
  SUBCASE("nonlinear operators are rejected") {
    const Index d = 6;
    const Matrix a = annihilation(d);
    std::vector<OperatorMatrix> jumps{OperatorMatrix({d}, Matrix(a * a))};
    CHECK_THROWS_AS(jumps_to_quadrature(jumps, {d}), std::invalid_argument);
  }
}

TEST_CASE("drift and diffusion") {
  SUBCASE("single-mode loss contracts toward vacuum") {
    const double gamma = 1.3;
    std::vector<OperatorMatrix> jumps{
        OperatorMatrix({6}, Matrix(std::sqrt(gamma) * annihilation(6)))};
    const DriftDiffusion dd = drift_diffusion(jumps_to_quadrature(jumps, {6}));
    CHECK((dd.drift + gamma / 2.0 * RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dd.diffusion - gamma / 2.0 * RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("squeezing bath: contracting drift, squeezed diffusion") {
    const double r = 0.8;
    const DriftDiffusion dd = squeezing_dd(r, 0.0);
    const double big_gamma = effective_rate(bath_from_squeezing(r, 0.0), 1.0);
    CHECK((dd.drift + big_gamma / 2.0 * RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dd.diffusion - big_gamma * tmsv_cov_raw(r)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("maximally entangled limit: drift vanishes, diffusion stays finite") {
    // b_gg = b_ee = 1/sqrt2, the infinite-squeezing boundary.  Gamma -> 0
    // kills the drift, while Gamma * Sigma(r) tends to a finite rank-2
    // diffusion: the cavities heat diffusively and never relax.
    const BathState bell = BathState::bell_phi(0.0);
    const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
    const Subsystems osc{SubsystemSpec::oscillator(4), SubsystemSpec::oscillator(4)};
    const DriftDiffusion dd =
        drift_diffusion(jumps_to_quadrature(jump_ops_2q(bell, osc, c), {4, 4}));
    CHECK(dd.drift.cwiseAbs().maxCoeff() < 1e-14);
    RealMatrix limit = RealMatrix::Zero(4, 4);
    limit(0, 0) = limit(1, 1) = limit(2, 2) = limit(3, 3) = 0.5;
    limit(0, 1) = limit(1, 0) = -0.5;
    limit(2, 3) = limit(3, 2) = 0.5;
    CHECK((dd.diffusion - limit).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("Lyapunov stationarity of the squeezed target, any angle") {
    for (double theta : {0.0, 0.9, 2.4}) {
      const double r = 1.1;
      const DriftDiffusion dd = squeezing_dd(r, theta);
      const RealMatrix sigma = tmsv_covariance(r, theta).cov;
      const RealMatrix resid =
          dd.drift * sigma + sigma * dd.drift.transpose() + dd.diffusion;
      CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("covariance evolution") {
  SUBCASE("zero generator keeps the state") {
    DriftDiffusion dd{RealMatrix::Zero(4, 4), RealMatrix::Zero(4, 4)};
    const auto traj = evolve_covariance(dd, tmsv_covariance(0.7), 0.01, 1.0, 10);
    CHECK((traj.back().second.cov - tmsv_cov_raw(0.7)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("single-mode loss relaxes a thermal state at rate gamma") {
    const double gamma = 1.0, nbar = 1.5;
    std::vector<OperatorMatrix> jumps{
        OperatorMatrix({6}, Matrix(std::sqrt(gamma) * annihilation(6)))};
    const DriftDiffusion dd = drift_diffusion(jumps_to_quadrature(jumps, {6}));
    const RealMatrix thermal = (nbar + 0.5) * RealMatrix::Identity(2, 2);
    const auto traj =
        evolve_covariance(dd, GaussianState(RealVector::Zero(2), thermal), 0.001, 2.0, 100);
    for (const auto& [t, st] : traj) {
      const RealMatrix expected =
          RealMatrix::Identity(2, 2) * (0.5 + nbar * std::exp(-gamma * t));
      CHECK((st.cov - expected).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("vacuum is cooled into the squeezed target") {
    const double r = 1.0;
    const double big_gamma = effective_rate(bath_from_squeezing(r, 0.0), 1.0);
    const auto traj = evolve_covariance(squeezing_dd(r, 0.0), GaussianState::vacuum(2),
                                        0.002 / big_gamma, 12.0 / big_gamma, 50);
    const GaussianState target = tmsv_covariance(r);
    double best = 0.0;
    bool crossed = false;
    for (const auto& [t, st] : traj) {
      const double f = gaussian_fidelity(st, target);
      CHECK(f >= best - 1e-12);  // monotone approach for this generator
      best = std::max(best, f);
      if (f >= 0.98) crossed = true;
    }
    CHECK(crossed);
  }
}

TEST_CASE("gaussian fidelity") {
  SUBCASE("identical pure states") {
    CHECK(gaussian_fidelity(tmsv_covariance(0.9), tmsv_covariance(0.9)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("vacuum against the squeezed target") {
    const double r = 1.0;
    const double f = gaussian_fidelity(GaussianState::vacuum(2), tmsv_covariance(r));
    CHECK(f == doctest::Approx(1.0 / (std::cosh(r) * std::cosh(r))).epsilon(1e-12));
    CHECK(f == doctest::Approx(0.4200).epsilon(1e-3));
  }
  SUBCASE("symmetry") {
    const GaussianState a = tmsv_covariance(0.4), b = tmsv_covariance(1.3);
    CHECK(gaussian_fidelity(a, b) == doctest::Approx(gaussian_fidelity(b, a)).epsilon(1e-12));
  }
  SUBCASE("purity precondition") {
    const RealMatrix thermal = 1.7 * RealMatrix::Identity(4, 4);
    const GaussianState mixed(RealVector::Zero(4), thermal);
    CHECK_THROWS_AS(gaussian_fidelity(mixed, mixed), std::invalid_argument);
    CHECK_NOTHROW(gaussian_fidelity(mixed, tmsv_covariance(0.3)));
  }
  SUBCASE("zero-mean precondition") {
    RealVector shifted = RealVector::Zero(4);
    shifted(0) = 0.5;
    const GaussianState displaced(shifted, RealMatrix::Identity(4, 4) / 2.0);
    CHECK_THROWS_AS(gaussian_fidelity(displaced, tmsv_covariance(0.3)), std::invalid_argument);
  }
}

TEST_CASE("Fock-space squeezed vacuum is the common null state of the jump operators") {
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  for (double theta : {0.0, 1.3}) {
    for (double r : {0.5, 1.0}) {
      const Index d = 30;
      const Subsystems osc{SubsystemSpec::oscillator(d), SubsystemSpec::oscillator(d)};
      const auto jumps = jump_ops_2q(bath_from_squeezing(r, theta), osc, c);
      const Vector psi = fock_tmsv(r, theta, d);
      CHECK((jumps[0].mat * psi).norm() < 1e-12);
      CHECK((jumps[1].mat * psi).norm() < 1e-12);
    }
  }
}

TEST_CASE("moments extracted from the Fock representation match the covariance form") {
  for (double theta : {0.0, 0.7}) {
    const double r = 1.0;
    const Index d = 30;
    const Vector psi = fock_tmsv(r, theta, d);
    const Matrix rho = psi * psi.adjoint();
    const QuadratureMoments g = gaussian_moments_from_fock(rho, {d, d});
    CHECK(g.means.cwiseAbs().maxCoeff() < 1e-10);
    CHECK((g.cov - tmsv_covariance(r, theta).cov).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("small Fock-space run tracks the covariance flow") {
  const double r = 0.4, gamma = 1.0;
  const Index d = 14;
  const BathState bath = bath_from_squeezing(r, 0.0);
  const CouplingSpec c = CouplingSpec::from_rates({gamma, gamma}, 0.01);
  const Subsystems osc{SubsystemSpec::oscillator(d), SubsystemSpec::oscillator(d)};
  const auto jumps = jump_ops_2q(bath, osc, c);
  const OperatorMatrix h({d, d}, Matrix::Zero(d * d, d * d));

  const DriftDiffusion dd = drift_diffusion(jumps_to_quadrature(jumps, {d, d}));
  const auto gauss = evolve_covariance(dd, GaussianState::vacuum(2), 0.004, 2.0, 100);

  Matrix rho0 = Matrix::Zero(d * d, d * d);
  rho0(0, 0) = 1.0;
  std::vector<std::pair<double, QuadratureMoments>> fock;
  evolve_generator(h, jumps, rho0, 0.004, 2.0, 100, [&](double t, const Matrix& rho) {
    fock.emplace_back(t, gaussian_moments_from_fock(rho, {d, d}));
  });

  REQUIRE(fock.size() == gauss.size());
  double worst = 0.0;
  for (size_t i = 0; i < fock.size(); ++i)
    worst = std::max(worst, (fock[i].second.cov - gauss[i].second.cov).cwiseAbs().maxCoeff());
  CHECK(worst < 1e-5);
}

}  // TEST_SUITE

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qme/liouvillian.hpp"
#include "test_helpers.hpp"

using namespace qme;
using test::max_abs;

namespace {

const Subsystems kTwoQubits{SubsystemSpec::qubit(), SubsystemSpec::qubit()};

BathState random_mixed_bath(test::Rng& rng, int n) {
  return BathState::from_density(DensityMatrix(Dims(n, 2), rng.random_density(Index(1) << n)));
}

}  // namespace

TEST_SUITE("liouvillian") {

TEST_CASE("jump operators for a ground-state bath: independent loss") {
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 2.0}, 0.01);
  const auto jumps = jump_ops_2q(BathState::ground(2), kTwoQubits, c);
  REQUIRE(jumps.size() == 4);
  const Dims dims{2, 2};
  CHECK(max_abs(jumps[0].mat - embed(sigma_minus(), 0, dims)) < 1e-14);
  CHECK(max_abs(jumps[1].mat - std::sqrt(2.0) * embed(sigma_minus(), 1, dims)) < 1e-14);
  CHECK(max_abs(jumps[2].mat) == 0.0);
  CHECK(max_abs(jumps[3].mat) == 0.0);
}

TEST_CASE("gg/ee baths leave the exchange channels empty") {
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  const auto jumps = jump_ops_2q(bath_from_squeezing(0.8, 0.3), kTwoQubits, c);
  CHECK(max_abs(jumps[2].mat) == 0.0);
  CHECK(max_abs(jumps[3].mat) == 0.0);
}

TEST_CASE("Bell-phase bath jump operators") {
  const double phi = 0.9, gamma = 1.0;
  const CouplingSpec c = CouplingSpec::from_rates({gamma, gamma}, 0.01);
  const auto jumps = jump_ops_2q(BathState::bell_phi(phi), kTwoQubits, c);
  const Dims dims{2, 2};
  const Matrix s1 = embed(sigma_minus(), 0, dims), s2 = embed(sigma_minus(), 1, dims);
  const double pref = std::sqrt(gamma / 2.0);
  const Complex ph = std::exp(kImag * phi);
  CHECK(max_abs(jumps[0].mat - pref * (ph * s1 + s2.adjoint())) < 1e-14);
  CHECK(max_abs(jumps[1].mat - pref * (s1.adjoint() + ph * s2)) < 1e-14);
}

TEST_CASE("mixed baths are rejected by the pure-bath form") {
  test::Rng rng(31);
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  CHECK_THROWS_AS(jump_ops_2q(random_mixed_bath(rng, 2), kTwoQubits, c), std::invalid_argument);
}

TEST_CASE("diagonal builder basics") {
  const Dims dims{2};
  SUBCASE("amplitude damping action") {
    const double gamma = 0.7;
    const OperatorMatrix l(dims, Matrix(std::sqrt(gamma) * sigma_minus()));
    const Liouvillian liouv =
        build_liouvillian_diagonal(OperatorMatrix(dims, Matrix::Zero(2, 2)), {l});
    Matrix excited = Matrix::Zero(2, 2);
    excited(0, 0) = 1.0;
    const Matrix rhs = unvec(liouv.superop * vec(excited));
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = -gamma;
    expected(1, 1) = gamma;
    CHECK(max_abs(rhs - expected) < 1e-14);
  }
  SUBCASE("zero inputs give the zero superoperator") {
    const Liouvillian liouv =
        build_liouvillian_diagonal(OperatorMatrix(dims, Matrix::Zero(2, 2)), {});
    CHECK(max_abs(liouv.superop) == 0.0);
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(build_liouvillian_diagonal(OperatorMatrix(dims, Matrix::Zero(2, 2)),
                                               {OperatorMatrix({2, 2}, Matrix::Zero(4, 4))}),
                    std::invalid_argument);
  }
}

TEST_CASE("the antisymmetric Bell state is dark under the symmetric Bell bath") {
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  const GeneratorSpec gen = make_generator_diagonal(BathState::bell_phi(0.0), kTwoQubits, c);
  const Liouvillian liouv = build_liouvillian(gen);
  const Vector v = vec(Matrix(bell_phi_minus() * bell_phi_minus().adjoint()));
  CHECK((liouv.superop * v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("diagonal and nondiagonal forms agree for pure baths") {
  test::Rng rng(32);
  const CouplingSpec c = CouplingSpec::from_rates({0.9, 1.7}, 0.01);
  for (int t = 0; t < 25; ++t) {
    const BathState bath = BathState::from_pure(rng.random_ket(4));
    const Liouvillian diag = build_liouvillian(make_generator_diagonal(bath, kTwoQubits, c));
    const Liouvillian nond = build_liouvillian(make_generator_nondiagonal(bath, kTwoQubits, c));
    CHECK(max_abs(diag.superop - nond.superop) < 1e-12);
  }
}

TEST_CASE("GHZ bath equals its diagonal mixture") {
  const int n = 3;
  const CouplingSpec c = CouplingSpec::from_rates(std::vector<double>(n, 1.0), 0.01);
  const Subsystems subs(n, SubsystemSpec::qubit());
  const BathState ghz = BathState::ghz(n);
  Matrix mixture = Matrix::Zero(8, 8);
  mixture(0, 0) = 0.5;
  mixture(7, 7) = 0.5;
  const BathState diag_bath = BathState::from_density(DensityMatrix(Dims(n, 2), mixture));
  const Liouvillian a = build_liouvillian_nondiagonal(coefficients_nq(ghz, c), subs);
  const Liouvillian b = build_liouvillian_nondiagonal(coefficients_nq(diag_bath, c), subs);
  CHECK(max_abs(a.superop - b.superop) < 1e-14);
}

TEST_CASE("product bath reproduces the three-term product structure") {
  // Independent single-subsystem terms plus a classically correlated
  // two-commutator driving term, with unit-amplitude commutator operators.
  test::Rng rng(33);
  const Complex a1 = 0.8, b1 = 0.6 * std::polar(1.0, 0.3);
  const Complex a2 = 0.6, b2 = 0.8 * std::polar(1.0, -0.5);
  const BathState bath = BathState::product({{a1, b1}, {a2, b2}});
  const double g1 = 0.7, g2 = 1.3, idt = 0.01;
  const CouplingSpec c = CouplingSpec::from_rates({g1, g2}, idt);
  const Liouvillian liouv =
      build_liouvillian_nondiagonal(coefficients_2q(bath, c), kTwoQubits);

  const Matrix sm = sigma_minus();
  const Matrix hbar1 = a1 * std::conj(b1) * sm + std::conj(a1 * std::conj(b1)) * sm.adjoint();
  const Matrix hbar2 = a2 * std::conj(b2) * sm + std::conj(a2 * std::conj(b2)) * sm.adjoint();
  auto dissip = [&](const Matrix& l, const Matrix& rho) {
    return Matrix(l * rho * l.adjoint() - 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l));
  };

  for (int t = 0; t < 5; ++t) {
    const Matrix r1 = rng.random_density(2), r2 = rng.random_density(2);
    const Matrix joint = kron(r1, r2);
    const Matrix lhs = unvec(liouv.superop * vec(joint));

    const Matrix h1 = c.lambdas[0] * hbar1, h2 = c.lambdas[1] * hbar2;
    Matrix rhs = kron(Matrix(-kImag * (h1 * r1 - r1 * h1)), r2) +
                 kron(r1, Matrix(-kImag * (h2 * r2 - r2 * h2)));
    rhs += g1 * (std::norm(a1) * kron(dissip(sm, r1), r2) +
                 std::norm(b1) * kron(dissip(sm.adjoint(), r1), r2));
    rhs += g2 * (std::norm(a2) * kron(r1, dissip(sm, r2)) +
                 std::norm(b2) * kron(r1, dissip(sm.adjoint(), r2)));
    rhs -= std::sqrt(g1 * g2) *
           kron(Matrix(hbar1 * r1 - r1 * hbar1), Matrix(hbar2 * r2 - r2 * hbar2));
    CHECK(max_abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("trace preservation and Hermiticity preservation") {
  test::Rng rng(34);
  const CouplingSpec c = CouplingSpec::from_rates({1.2, 0.4}, 0.01);
  const BathState bath = random_mixed_bath(rng, 2);
  const Liouvillian liouv = build_liouvillian_nondiagonal(coefficients_2q(bath, c), kTwoQubits);

  Vector tr_row = Vector::Zero(16);
  for (Index i = 0; i < 4; ++i) tr_row(i * 4 + i) = 1.0;
  CHECK((tr_row.adjoint() * liouv.superop).cwiseAbs().maxCoeff() < 1e-12);

  for (int t = 0; t < 10; ++t) {
    const Matrix x = rng.random_matrix(4);
    const Matrix lx = unvec(liouv.superop * vec(x));
    const Matrix lxd = unvec(liouv.superop * vec(Matrix(x.adjoint())));
    CHECK(max_abs(Matrix(lx.adjoint() - lxd)) < 1e-12);
  }
}

TEST_CASE("generator spectra stay in the closed left half-plane") {
  test::Rng rng(35);
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  std::vector<BathState> baths{BathState::ground(2), BathState::bell_phi(0.0),
                               BathState::near_bell_phi(M_PI, 1e-2), random_mixed_bath(rng, 2)};
  for (const auto& bath : baths) {
    const Liouvillian liouv = build_liouvillian_nondiagonal(coefficients_2q(bath, c), kTwoQubits);
    Eigen::ComplexEigenSolver<Matrix> es(liouv.superop, false);
    CHECK(es.eigenvalues().real().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Kossakowski matrix is PSD across random baths") {
  test::Rng rng(36);
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  double worst = 1.0;
  for (int t = 0; t < 1000; ++t) {
    const BathState bath =
        (t % 2 == 0) ? BathState::from_pure(rng.random_ket(4)) : random_mixed_bath(rng, 2);
    const Matrix k = kossakowski_matrix(coefficients_2q(bath, c));
    CHECK(max_abs(Matrix(k - k.adjoint())) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k, Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  CHECK(worst > -1e-10);
}

TEST_CASE("dissipator diagonalization") {
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  SUBCASE("thermal-like diagonal bath gives local channels") {
    Matrix mix = Matrix::Zero(4, 4);
    mix.diagonal() << 0.1, 0.2, 0.3, 0.4;
    const BathState bath = BathState::from_density(DensityMatrix({2, 2}, mix));
    const auto jumps = diagonalize_dissipator(coefficients_2q(bath, c), kTwoQubits);
    // every operator must be proportional to a single c_l or c_l^dag
    for (const auto& j : jumps) {
      int support = 0;
      const Dims dims{2, 2};
      for (const Matrix& basis :
           {embed(sigma_minus(), 0, dims), embed(sigma_plus(), 0, dims),
            embed(sigma_minus(), 1, dims), embed(sigma_plus(), 1, dims)}) {
        const Complex overlap = (basis.adjoint() * j.mat).trace();
        if (std::abs(overlap) > 1e-12) ++support;
      }
      CHECK(support == 1);
    }
  }
  SUBCASE("Bell bath yields two channels reproducing the generator") {
    const BathState bath = BathState::bell_phi(0.0);
    const CoefficientSet k = coefficients_2q(bath, c);
    const auto jumps = diagonalize_dissipator(k, kTwoQubits);
    CHECK(jumps.size() == 2);
    const Liouvillian rebuilt =
        build_liouvillian_diagonal(effective_hamiltonian(k, kTwoQubits), jumps);
    const Liouvillian direct = build_liouvillian_nondiagonal(k, kTwoQubits);
    CHECK(max_abs(rebuilt.superop - direct.superop) < 1e-10);
  }
  SUBCASE("round trip over random mixed baths") {
    test::Rng rng(37);
    for (int t = 0; t < 20; ++t) {
      const BathState bath = random_mixed_bath(rng, 2);
      const CoefficientSet k = coefficients_2q(bath, c);
      const auto jumps = diagonalize_dissipator(k, kTwoQubits);
      const Liouvillian rebuilt =
          build_liouvillian_diagonal(effective_hamiltonian(k, kTwoQubits), jumps);
      const Liouvillian direct = build_liouvillian_nondiagonal(k, kTwoQubits);
      CHECK(max_abs(rebuilt.superop - direct.superop) < 1e-10);
    }
  }
  SUBCASE("channel count stays within twice the subsystem count") {
    test::Rng rng(38);
    const int n = 3;
    const CouplingSpec c3 = CouplingSpec::from_rates(std::vector<double>(n, 1.0), 0.01);
    const Subsystems subs(n, SubsystemSpec::qubit());
    const BathState bath =
        BathState::from_density(DensityMatrix(Dims(n, 2), rng.random_density(8)));
    const auto jumps = diagonalize_dissipator(coefficients_nq(bath, c3), subs);
    CHECK(jumps.size() <= static_cast<size_t>(2 * n));
    CHECK(jumps.size() <= static_cast<size_t>(2 * n * (n - 1)));
  }
  SUBCASE("an indefinite coefficient matrix is rejected") {
    CoefficientSet bad;
    bad.n = 2;
    bad.gamma_down = RealVector::Zero(2);
    bad.gamma_up = RealVector::Zero(2);
    bad.gamma_dd = Matrix::Zero(2, 2);
    bad.gamma_du = Matrix::Zero(2, 2);
    bad.h_coeff = Vector::Zero(2);
    bad.gamma_dd(0, 1) = 0.5;  // cross term with no local rates
    CHECK_THROWS_AS(diagonalize_dissipator(bad, kTwoQubits), PhysicsError);
  }
}

TEST_CASE("antidiagonal insensitivity at the generator level") {
  test::Rng rng(39);
  for (int n : {3, 4}) {
    const CouplingSpec c = CouplingSpec::from_rates(std::vector<double>(n, 1.0), 0.01);
    const Subsystems subs(n, SubsystemSpec::qubit());
    const Index dim = Index(1) << n;
    RealVector diag(dim);
    for (Index i = 0; i < dim; ++i) diag(i) = 0.1 + rng.uniform();
    diag /= diag.sum();
    Matrix base = Matrix::Zero(dim, dim);
    base.diagonal() = diag.cast<Complex>();
    Matrix x = base;
    for (Index i = 0; i < dim / 2; ++i) {
      const Index j = dim - 1 - i;
      const Complex z =
          0.7 * std::sqrt(diag(i) * diag(j)) * std::exp(kImag * (2.0 * M_PI * rng.uniform()));
      x(i, j) = z;
      x(j, i) = std::conj(z);
    }
    const Liouvillian a = build_liouvillian_nondiagonal(
        coefficients_nq(BathState::from_density(DensityMatrix(Dims(n, 2), base)), c), subs);
    const Liouvillian b = build_liouvillian_nondiagonal(
        coefficients_nq(BathState::from_density(DensityMatrix(Dims(n, 2), x)), c), subs);
    CHECK(max_abs(a.superop - b.superop) < 1e-12);
  }
}

TEST_CASE("oscillator subsystems") {
  const SubsystemSpec osc = SubsystemSpec::oscillator(5);
  CHECK(osc.lowering()(3, 4) == Complex(2.0));
  CHECK_THROWS_AS(SubsystemSpec::oscillator(1), std::invalid_argument);

  // squeezing bath on two small cavities: jump operators mix a_1 with a_2^dag
  const CouplingSpec c = CouplingSpec::from_rates({1.0, 1.0}, 0.01);
  const Subsystems two_osc{SubsystemSpec::oscillator(4), SubsystemSpec::oscillator(4)};
  const BathState bath = bath_from_squeezing(0.6, 0.0);
  const auto jumps = jump_ops_2q(bath, two_osc, c);
  const Dims dims{4, 4};
  const Matrix expected = std::sqrt(bath.entry(3, 3).real()) * embed(annihilation(4), 0, dims) +
                          std::sqrt(bath.entry(0, 0).real()) * embed(annihilation(4), 1, dims).adjoint();
  CHECK(max_abs(jumps[0].mat - expected) < 1e-14);
}

}  // TEST_SUITE

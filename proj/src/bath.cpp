// Copyright 2026 The qme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qme/bath.hpp"

#include <cmath>

namespace qme {

namespace {

int qubit_count_of(Index side) {
  int n = 0;
  Index s = side;
  while (s > 1) {
    if (s % 2 != 0) throw std::invalid_argument("BathState: dimension is not a power of two");
    s /= 2;
    ++n;
  }
  if (n < 1) throw std::invalid_argument("BathState: need at least one qubit");
  return n;
}

Dims qubit_dims(int n) { return Dims(static_cast<size_t>(n), 2); }

// Bit of subsystem l (0-based, leftmost first) in flat basis index x.
// Bit value 0 = |e>, 1 = |g>.
inline Index bit_of(Index x, int l, int n) { return (x >> (n - 1 - l)) & 1; }
inline Index with_bit(Index x, int l, int n, Index b) {
  const Index mask = Index(1) << (n - 1 - l);
  return b ? (x | mask) : (x & ~mask);
}

}  // namespace

CouplingSpec::CouplingSpec(std::vector<double> lambdas_in, double dt_in,
                           std::vector<double> detunings_in)
    : lambdas(std::move(lambdas_in)), dt(dt_in), detunings(std::move(detunings_in)) {
  if (lambdas.empty()) throw std::invalid_argument("CouplingSpec: no subsystems");
  if (!(dt > 0.0)) throw std::invalid_argument("CouplingSpec: dt must be positive");
  for (double l : lambdas)
    if (l < 0.0) throw std::invalid_argument("CouplingSpec: negative coupling strength");
  if (detunings.empty()) detunings.assign(lambdas.size(), 0.0);
  if (detunings.size() != lambdas.size())
    throw std::invalid_argument("CouplingSpec: detuning count mismatch");
  for (double d : detunings)
    if (d != 0.0)
      throw std::invalid_argument("CouplingSpec: only resonant interactions are supported (detuning must be 0)");
}

CouplingSpec CouplingSpec::from_rates(const std::vector<double>& gammas, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("CouplingSpec::from_rates: dt must be positive");
  std::vector<double> lambdas(gammas.size());
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i] < 0.0) throw std::invalid_argument("CouplingSpec::from_rates: negative rate");
    lambdas[i] = std::sqrt(gammas[i] / dt);
  }
  return CouplingSpec(std::move(lambdas), dt);
}

bool CouplingSpec::weak_coupling() const {
  for (double l : lambdas)
    if (l * dt > 0.1) return false;
  return true;
}

BathState BathState::from_pure(const Vector& coeffs) {
  const int n = qubit_count_of(coeffs.size());
  const double norm2 = coeffs.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw std::invalid_argument("BathState::from_pure: coefficients not normalized");
  Matrix rho = coeffs * coeffs.adjoint();
  BathState b{n, DensityMatrix(qubit_dims(n), std::move(rho)), coeffs};
  return b;
}

BathState BathState::from_density(DensityMatrix rho) {
  for (Index d : rho.dims())
    if (d != 2) throw std::invalid_argument("BathState: all environment factors must be qubits");
  const int n = static_cast<int>(rho.dims().size());
  return BathState{n, std::move(rho), std::nullopt};
}

BathState BathState::ground(int n) {
  Vector v = Vector::Zero(Index(1) << n);
  v((Index(1) << n) - 1) = 1.0;  // |gg...g>
  return from_pure(v);
}

BathState BathState::bell_phi(double phase) {
  Vector v = Vector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = std::exp(kImag * phase) / std::sqrt(2.0);
  return from_pure(v);
}

BathState BathState::bell_psi(double phase) {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = std::exp(kImag * phase) / std::sqrt(2.0);
  return from_pure(v);
}

BathState BathState::near_bell_phi(double phase, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("near_bell_phi: epsilon must be >= 0");
  Vector v = Vector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0 + epsilon);
  v(3) = std::exp(kImag * phase) * std::sqrt(1.0 + epsilon) / std::sqrt(2.0 + epsilon);
  return from_pure(v);
}

BathState BathState::near_bell_psi(double phase, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("near_bell_psi: epsilon must be >= 0");
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0 + epsilon);
  v(2) = std::exp(kImag * phase) * std::sqrt(1.0 + epsilon) / std::sqrt(2.0 + epsilon);
  return from_pure(v);
}

BathState BathState::ghz(int n) {
  if (n < 2) throw std::invalid_argument("ghz: need n >= 2");
  Vector v = Vector::Zero(Index(1) << n);
  v(0) = 1.0 / std::sqrt(2.0);
  v((Index(1) << n) - 1) = 1.0 / std::sqrt(2.0);
  return from_pure(v);
}

BathState BathState::w_state(int n) {
  if (n < 2) throw std::invalid_argument("w_state: need n >= 2");
  Vector v = Vector::Zero(Index(1) << n);
  const Index all_g = (Index(1) << n) - 1;
  for (int l = 0; l < n; ++l) {
    // single excitation on qubit l
    v(with_bit(all_g, l, n, 0)) = 1.0 / std::sqrt(static_cast<double>(n));
  }
  return from_pure(v);
}

BathState BathState::product(const std::vector<std::pair<Complex, Complex>>& alpha_beta) {
  if (alpha_beta.empty()) throw std::invalid_argument("product bath: no qubits");
  Vector v = Vector::Ones(1);
  for (const auto& [alpha, beta] : alpha_beta) {
    Vector q(2);
    q(0) = beta;   // |e>
    q(1) = alpha;  // |g>
    if (std::abs(q.squaredNorm() - 1.0) > 1e-10)
      throw std::invalid_argument("product bath: |alpha|^2 + |beta|^2 must be 1");
    v = kron_vec(v, q);
  }
  return from_pure(v);
}

BathState BathState::gg_ee_superposition(Complex b_gg, Complex b_ee) {
  Vector v = Vector::Zero(4);
  v(0) = b_ee;
  v(3) = b_gg;
  return from_pure(v);
}

CoefficientSet coefficients_2q(const BathState& bath, const CouplingSpec& c) {
  if (bath.n != 2) throw std::invalid_argument("coefficients_2q: bath must have exactly two qubits");
  if (c.size() != 2) throw std::invalid_argument("coefficients_2q: coupling spec must have two entries");
  const double g1 = c.gamma(0), g2 = c.gamma(1);
  auto b = [&](Index i, Index j) { return bath.entry(i, j); };

  CoefficientSet out;
  out.n = 2;
  out.gamma_down = RealVector(2);
  out.gamma_up = RealVector(2);
  out.gamma_dd = Matrix::Zero(2, 2);
  out.gamma_du = Matrix::Zero(2, 2);
  out.h_coeff = Vector(2);

  // basis indices: |ee>=0, |eg>=1, |ge>=2, |gg>=3
  out.gamma_down(0) = g1 * (b(3, 3) + b(2, 2)).real();
  out.gamma_up(0) = g1 * (b(0, 0) + b(1, 1)).real();
  out.gamma_down(1) = g2 * (b(3, 3) + b(1, 1)).real();
  out.gamma_up(1) = g2 * (b(0, 0) + b(2, 2)).real();
  out.gamma_dd(0, 1) = std::sqrt(g1 * g2) * b(3, 0);  // <gg|rho|ee>
  out.gamma_du(0, 1) = std::sqrt(g1 * g2) * b(2, 1);  // <ge|rho|eg>
  out.h_coeff(0) = c.lambdas[0] * (b(3, 1) + b(2, 0));
  out.h_coeff(1) = c.lambdas[1] * (b(1, 0) + b(3, 2));
  return out;
}

CoefficientSet coefficients_nq(const BathState& bath, const CouplingSpec& c) {
  const int n = bath.n;
  if (n < 2) throw std::invalid_argument("coefficients_nq: need n >= 2");
  if (c.size() != n) throw std::invalid_argument("coefficients_nq: coupling spec size mismatch");
  const Index dim = Index(1) << n;

  CoefficientSet out;
  out.n = n;
  out.gamma_down = RealVector::Zero(n);
  out.gamma_up = RealVector::Zero(n);
  out.gamma_dd = Matrix::Zero(n, n);
  out.gamma_du = Matrix::Zero(n, n);
  out.h_coeff = Vector::Zero(n);

  for (int l = 0; l < n; ++l) {
    Complex pop_g = 0.0, pop_e = 0.0, coh = 0.0;
    for (Index x = 0; x < dim; ++x) {
      if (bit_of(x, l, n) == 1)
        pop_g += bath.entry(x, x);
      else
        pop_e += bath.entry(x, x);
      // <g_l| rho |e_l>, diagonal in all other factors
      if (bit_of(x, l, n) == 1) coh += bath.entry(x, with_bit(x, l, n, 0));
    }
    out.gamma_down(l) = c.gamma(l) * pop_g.real();
    out.gamma_up(l) = c.gamma(l) * pop_e.real();
    out.h_coeff(l) = c.lambdas[l] * coh;
  }

  for (int l = 0; l < n; ++l) {
    for (int m = l + 1; m < n; ++m) {
      Complex dd = 0.0, du = 0.0;
      const double w = std::sqrt(c.gamma(l) * c.gamma(m));
      for (Index x = 0; x < dim; ++x) {
        if (bit_of(x, l, n) != 1 || bit_of(x, m, n) != 1) continue;
        // bra has (g_l, g_m); trace over the remaining factors
        const Index ee = with_bit(with_bit(x, l, n, 0), m, n, 0);
        const Index eg = with_bit(with_bit(x, l, n, 0), m, n, 1);
        dd += bath.entry(x, ee);                      // <g_l g_m| rho |e_l e_m>
        du += bath.entry(with_bit(x, m, n, 0), eg);   // <g_l e_m| rho |e_l g_m>
      }
      out.gamma_dd(l, m) = w * dd;
      out.gamma_du(l, m) = w * du;
    }
  }
  return out;
}

BathState bath_from_squeezing(double r, double theta) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("bath_from_squeezing: r must be finite and >= 0");
  const double norm = std::sqrt(std::cosh(2.0 * r));
  const Complex b_gg = std::cosh(r) / norm;
  const Complex b_ee = std::exp(kImag * theta) * std::sinh(r) / norm;
  return BathState::gg_ee_superposition(b_gg, b_ee);
}

namespace {

void require_gg_ee_support(const BathState& bath, const char* what) {
  if (bath.n != 2) throw std::invalid_argument(std::string(what) + ": bath must be two-qubit");
  double outside = 0.0;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if ((i == 1 || i == 2 || j == 1 || j == 2)) outside += std::abs(bath.entry(i, j));
  if (outside > 1e-12)
    throw std::invalid_argument(std::string(what) + ": bath has support outside span{|gg>,|ee>}");
}

}  // namespace

double effective_rate(const BathState& bath, double gamma) {
  require_gg_ee_support(bath, "effective_rate");
  return gamma * (bath.entry(3, 3).real() - bath.entry(0, 0).real());
}

double squeezing_from_bath(const BathState& bath) {
  require_gg_ee_support(bath, "squeezing_from_bath");
  const double pgg = bath.entry(3, 3).real();
  const double pee = bath.entry(0, 0).real();
  if (pgg <= pee)
    throw std::invalid_argument("squeezing_from_bath: requires |b_gg| > |b_ee| (contracting regime)");
  return std::acosh(std::sqrt(pgg / (pgg - pee)));
}

}  // namespace qme

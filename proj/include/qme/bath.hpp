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

#pragma once

#include <optional>
#include <utility>

#include "qme/core.hpp"

namespace qme {

// Coupling strengths lambda_l and the interaction interval dt of the
// repeated-interaction stream.  Rates are gamma_l = |lambda_l|^2 * dt.
// Only resonant interactions are supported; nonzero detunings are rejected.
struct CouplingSpec {
  std::vector<double> lambdas;
  double dt = 0.0;
  std::vector<double> detunings;  // must all be zero

  CouplingSpec(std::vector<double> lambdas_in, double dt_in,
               std::vector<double> detunings_in = {});
  static CouplingSpec from_rates(const std::vector<double>& gammas, double dt);

  int size() const { return static_cast<int>(lambdas.size()); }
  double gamma(int l) const { return lambdas[l] * lambdas[l] * dt; }
  // False when some lambda_l * dt exceeds 0.1 and the second-order expansion
  // behind the master equation becomes questionable.
  bool weak_coupling() const;
};

// State of the n-qubit environment injected at every interaction interval.
// Coefficients are always read from the density matrix; pure_coeffs is kept
// as a cross-check when the bath was constructed from a ket.
struct BathState {
  int n = 0;
  DensityMatrix rho_e;
  std::optional<Vector> pure_coeffs;

  static BathState from_pure(const Vector& coeffs);
  static BathState from_density(DensityMatrix rho);

  // Named preparations.
  static BathState ground(int n);
  static BathState bell_phi(double phase);                 // (|ee> + e^{i phi}|gg>)/sqrt2
  static BathState bell_psi(double phase);                 // (|eg> + e^{i phi}|ge>)/sqrt2
  static BathState near_bell_phi(double phase, double epsilon);
  static BathState near_bell_psi(double phase, double epsilon);
  static BathState ghz(int n);
  static BathState w_state(int n);
  // Each qubit in alpha|g> + beta|e>.
  static BathState product(const std::vector<std::pair<Complex, Complex>>& alpha_beta);
  // Two-qubit bath restricted to span{|gg>,|ee>}.
  static BathState gg_ee_superposition(Complex b_gg, Complex b_ee);

  // Entry <jk...|rho_e|j'k'...> by bitstrings (bit 0 = e, 1 = g per factor).
  Complex entry(Index bra, Index ket) const { return rho_e.mat()(bra, ket); }
};

// Master-equation coefficients extracted from a bath state: local loss and
// gain rates, pairwise two-excitation amplitudes, and the coherent driving
// amplitude h_coeff[l] multiplying c_l in the effective Hamiltonian.
struct CoefficientSet {
  int n = 0;
  RealVector gamma_down;  // n
  RealVector gamma_up;    // n
  Matrix gamma_dd;        // n x n, entries for l < m
  Matrix gamma_du;        // n x n, entries for l < m
  Vector h_coeff;         // n
};

// Two-qubit extraction, valid for pure and mixed baths.
CoefficientSet coefficients_2q(const BathState& bath, const CouplingSpec& c);
// General n-qubit extraction (n >= 2); coincides with coefficients_2q at n=2.
CoefficientSet coefficients_nq(const BathState& bath, const CouplingSpec& c);

// Pure two-qubit bath in span{|gg>,|ee>} whose master equation cools two
// cavities toward a two-mode squeezed vacuum with amplitude r and angle
// theta = arg(b_ee) - arg(b_gg).
BathState bath_from_squeezing(double r, double theta);

// Effective cooling rate gamma * (|b_gg|^2 - |b_ee|^2) of such a bath.
// Throws if the bath has support outside span{|gg>,|ee>} beyond 1e-12.
double effective_rate(const BathState& bath, double gamma);

// Inverse of bath_from_squeezing: squeezing amplitude from |b_gg|, |b_ee|.
double squeezing_from_bath(const BathState& bath);

}  // namespace qme

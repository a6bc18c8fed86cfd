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

#include "qme/core.hpp"

namespace qme {

// Quadrature ordering is (q_1..q_N, p_1..p_N) with hbar = 1 and vacuum
// covariance I/2; q = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2).

RealMatrix symplectic_form(int n_modes);

// Gaussian state of N modes: means and symmetrized covariance matrix.
// Construction checks symmetry (1e-12) and the uncertainty relation
// (Sigma + i Omega / 2 PSD within -1e-9).
struct GaussianState {
  RealVector means;
  RealMatrix cov;

  GaussianState(RealVector means_in, RealMatrix cov_in);
  static GaussianState vacuum(int n_modes);
  int modes() const { return static_cast<int>(means.size()) / 2; }
};

// Jump operators linear in the quadratures, row m giving
// L_m = sum_l C(m, 2l) q_l + C(m, N + l) p_l ... (C is M x 2N, complex).
struct LinearJumpSet {
  Matrix c;
  int modes() const { return static_cast<int>(c.cols()) / 2; }
};

// Drift A and diffusion B of the first/second-moment equations of motion
// x_dot = A x, Sigma_dot = A Sigma + Sigma A^T + B.
struct DriftDiffusion {
  RealMatrix drift;
  RealMatrix diffusion;
};

// Extract quadrature coefficients from Fock-space jump operators on modes of
// the given local dimensions.  Throws std::invalid_argument when an operator
// is not (numerically) a linear combination of mode quadratures.
LinearJumpSet jumps_to_quadrature(const std::vector<OperatorMatrix>& jump_ops,
                                  const Dims& mode_dims);

// A = Omega (G + Im[C^H C]),  B = Omega Re[C^H C] Omega^T.  With this
// convention single-mode loss sqrt(gamma) a gives the contracting drift
// A = -(gamma/2) I.
DriftDiffusion drift_diffusion(const LinearJumpSet& jumps, const RealMatrix* g_quadratic = nullptr);

// Covariance of the two-mode squeezed vacuum with amplitude r and angle
// theta (zero means).
GaussianState tmsv_covariance(double r, double theta = 0.0);

// Fixed-step RK4 on the moment equations; records every `stride`-th step.
// The uncertainty relation is revalidated at each recorded step.
std::vector<std::pair<double, GaussianState>> evolve_covariance(const DriftDiffusion& dd,
                                                                const GaussianState& s0, double dt,
                                                                double t_end, int stride = 1);

// Uhlmann-Jozsa fidelity via [det(Sigma_a + Sigma_b)]^{-1/2}.  Requires zero
// means and at least one pure state (all symplectic eigenvalues 1/2 within
// 1e-6); throws std::invalid_argument otherwise.
double gaussian_fidelity(const GaussianState& a, const GaussianState& b);

// Positive symplectic spectrum of a covariance matrix (1/2's for pure states).
RealVector symplectic_eigenvalues(const RealMatrix& cov);

// Fock-space two-mode squeezed vacuum, truncated at local dimension d and
// renormalized: coefficients (-e^{i theta} tanh r)^n / cosh r on |n, n>.
Vector fock_tmsv(double r, double theta, Index d);

// Raw first and second quadrature moments of a Fock-space state.  Not a
// GaussianState: truncation perturbs the canonical commutators at the top
// level, so the ideal-uncertainty invariant may miss by the truncation error.
struct QuadratureMoments {
  RealVector means;
  RealMatrix cov;
};
QuadratureMoments gaussian_moments_from_fock(const Matrix& rho, const Dims& mode_dims);

}  // namespace qme

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

#include <functional>
#include <map>

#include "qme/liouvillian.hpp"

namespace qme {

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::map<std::string, std::vector<double>> observables;
  // Worst-case invariant metrics over the recorded raw integrator output
  // (before the stored states are symmetrized).
  double max_trace_drift = 0.0;
  double max_hermiticity_dev = 0.0;
  double min_eigenvalue = 1.0;
};

struct SteadyStateResult {
  int dimension = 0;                        // stationary subspace dimension
  std::vector<OperatorMatrix> basis;        // right null vectors of the generator
  std::optional<DensityMatrix> selected;    // state reached from rho0 (or the unique one)
  bool unique = false;
};

// Fixed-step RK4 integration of vec(rho_dot) = superop vec(rho), recording
// every `stride`-th step (plus the initial and final states).  Recorded
// states are revalidated; trace drift beyond 1e-6 aborts with PhysicsError.
Trajectory evolve_me(const Liouvillian& liouv, const DensityMatrix& rho0, double dt, double t_end,
                     int stride = 1);

// Same integrator in matrix form, for state spaces too large to vectorize.
// Jump operators are applied as sparse products; `sample` is called at every
// recorded step with the raw state.
void evolve_generator(const OperatorMatrix& h_eff, const std::vector<OperatorMatrix>& jump_ops,
                      const Matrix& rho0, double dt, double t_end, int stride,
                      const std::function<void(double, const Matrix&)>& sample);

// Stationary subspace of the generator from its eigenvalue-0 eigenspace.
// Eigenvalues with |lambda| and |Re lambda| below 1e-9 * spectral radius are
// treated as zero.  With rho0 given and a degenerate subspace, the selected
// state is the spectral projection of rho0 onto the stationary subspace.
SteadyStateResult steady_states(const Liouvillian& liouv,
                                const std::optional<DensityMatrix>& rho0 = std::nullopt);

// Closed-form steady state of the two-atom master equation for a bath
// stream in (|ee> + e^{i phi}|gg>)/sqrt2 with phi in {0, pi}, as a linear
// map of the initial state.  Coherence inputs enter through their real part
// so the map preserves Hermiticity.
DensityMatrix bell_steady_state_map(const DensityMatrix& rho0, double phi);

// One repeated-interaction step: couple a fresh bath copy for an interval
// c.dt under the exact interaction unitary, then trace the bath out.
// Subsystem kinds are inferred from rho.dims() (dim 2 -> qubit).
DensityMatrix collision_step(const DensityMatrix& rho, const BathState& bath,
                             const CouplingSpec& c);

Trajectory collision_trajectory(const DensityMatrix& rho0, const BathState& bath,
                                const CouplingSpec& c, int steps, int stride = 1);

struct ConvergenceResult {
  std::vector<double> dts;
  std::vector<double> errors;   // max trace distance up to t_fix, per dt
  double fitted_order = 0.0;    // least-squares slope on log-log axes
  bool monotone = false;
};

// Collision-vs-master-equation convergence study at fixed gamma: for each
// interval in dt_list, lambda = sqrt(gamma/dt) and the two trajectories are
// compared on the collision time grid up to t_fix.
ConvergenceResult convergence_order(const DensityMatrix& rho0, const BathState& bath,
                                    double gamma, double t_fix,
                                    const std::vector<double>& dt_list);

double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace qme

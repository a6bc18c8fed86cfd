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

#include "qme/dynamics.hpp"

#include <cmath>
#include <future>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace qme {

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

int steps_for(double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integration: dt must be positive");
  if (t_end < 0.0) throw std::invalid_argument("integration: t_end must be >= 0");
  return static_cast<int>(std::llround(t_end / dt));
}

void check_trace_drift(const Matrix& rho, const char* what) {
  const double drift = std::abs(rho.trace() - Complex(1.0));
  if (drift > 1e-6)
    throw PhysicsError(std::string(what) + ": trace drift " + std::to_string(drift) +
                       " exceeds 1e-6 (step too large)");
}

// Record worst-case invariant deviations of a raw integrator state.
void record_invariants(const Matrix& raw, Trajectory& traj) {
  traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(raw.trace() - Complex(1.0)));
  traj.max_hermiticity_dev =
      std::max(traj.max_hermiticity_dev, (raw - raw.adjoint()).cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((raw + raw.adjoint()) / 2.0),
                                           Eigen::EigenvaluesOnly);
  traj.min_eigenvalue = std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
}

}  // namespace

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((a - b + (a - b).adjoint()) / 2.0),
                                           Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Trajectory evolve_me(const Liouvillian& liouv, const DensityMatrix& rho0, double dt, double t_end,
                     int stride) {
  if (rho0.side() != liouv.state_side() || rho0.dims() != liouv.dims)
    throw std::invalid_argument("evolve_me: state dimensions do not match the Liouvillian");
  if (stride < 1) throw std::invalid_argument("evolve_me: stride must be >= 1");
  const int steps = steps_for(t_end, dt);
  const Matrix& sup = liouv.superop;

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  Vector v = vec(rho0.mat());
  Vector k1(v.size()), k2(v.size()), k3(v.size()), k4(v.size());
  for (int s = 1; s <= steps; ++s) {
    k1.noalias() = sup * v;
    k2.noalias() = sup * (v + (dt / 2.0) * k1);
    k3.noalias() = sup * (v + (dt / 2.0) * k2);
    k4.noalias() = sup * (v + dt * k3);
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % stride == 0 || s == steps) {
      Matrix rho = unvec(v);
      check_trace_drift(rho, "evolve_me");
      record_invariants(rho, traj);
      rho = (rho + rho.adjoint().eval()) / 2.0;
      traj.times.push_back(s * dt);
      traj.states.emplace_back(rho0.dims(), std::move(rho));
    }
  }
  return traj;
}

void evolve_generator(const OperatorMatrix& h_eff, const std::vector<OperatorMatrix>& jump_ops,
                      const Matrix& rho0, double dt, double t_end, int stride,
                      const std::function<void(double, const Matrix&)>& sample) {
  const Index d = h_eff.side();
  if (rho0.rows() != d || rho0.cols() != d)
    throw std::invalid_argument("evolve_generator: state dimension mismatch");
  if (stride < 1) throw std::invalid_argument("evolve_generator: stride must be >= 1");
  const int steps = steps_for(t_end, dt);

  const bool has_h = h_eff.mat.cwiseAbs().maxCoeff() > 0.0;
  SparseMatrix h = h_eff.mat.sparseView();
  std::vector<SparseMatrix> ls, ls_dag;
  SparseMatrix kay(d, d);  // sum_m L_m^dag L_m
  for (const auto& l : jump_ops) {
    if (l.side() != d) throw std::invalid_argument("evolve_generator: jump operator dimension mismatch");
    SparseMatrix sl = l.mat.sparseView();
    ls.push_back(sl);
    ls_dag.push_back(SparseMatrix(sl.adjoint()));
    kay = kay + SparseMatrix(SparseMatrix(sl.adjoint()) * sl);
  }

  // The integrator keeps rho Hermitian, so the right-multiplied halves of the
  // commutator and anticommutator are adjoints of products already formed.
  // For large spaces the per-channel sandwich products run on worker threads
  // while the anticommutator product proceeds on the caller's thread.
  const bool parallel = d >= 256 && ls.size() >= 2;
  Matrix prod(d, d), sandwich(d, d);
  std::vector<Matrix> sandwiches;
  if (parallel) sandwiches.assign(ls.size(), Matrix(d, d));
  auto rhs = [&](const Matrix& rho, Matrix& out) {
    std::vector<std::future<void>> workers;
    if (parallel) {
      for (size_t m = 0; m < ls.size(); ++m)
        workers.push_back(std::async(std::launch::async, [&, m] {
          const Matrix t = ls[m] * rho;
          sandwiches[m].noalias() = t * ls_dag[m];
        }));
    }
    out.setZero();
    if (has_h) {
      prod.noalias() = h * rho;
      out -= kImag * prod;
      out += kImag * prod.adjoint();
    }
    prod.noalias() = kay * rho;
    out -= 0.5 * prod;
    out -= 0.5 * prod.adjoint();
    if (parallel) {
      for (auto& w : workers) w.get();
      for (const auto& s : sandwiches) out += s;
    } else {
      for (size_t m = 0; m < ls.size(); ++m) {
        prod.noalias() = ls[m] * rho;
        sandwich.noalias() = prod * ls_dag[m];
        out += sandwich;
      }
    }
  };

  Matrix rho = rho0;
  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  sample(0.0, rho);
  for (int s = 1; s <= steps; ++s) {
    rhs(rho, k1);
    tmp = rho + (dt / 2.0) * k1;
    rhs(tmp, k2);
    tmp = rho + (dt / 2.0) * k2;
    rhs(tmp, k3);
    tmp = rho + dt * k3;
    rhs(tmp, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % stride == 0 || s == steps) {
      check_trace_drift(rho, "evolve_generator");
      sample(s * dt, rho);
    }
  }
}

SteadyStateResult steady_states(const Liouvillian& liouv,
                                const std::optional<DensityMatrix>& rho0) {
  const Index d = liouv.state_side();
  Eigen::ComplexEigenSolver<Matrix> right(liouv.superop, true);
  if (right.info() != Eigen::Success) throw std::runtime_error("steady_states: eigensolver failed");
  Eigen::ComplexEigenSolver<Matrix> left(liouv.superop.adjoint(), true);
  if (left.info() != Eigen::Success) throw std::runtime_error("steady_states: eigensolver failed");

  const double radius = right.eigenvalues().cwiseAbs().maxCoeff();
  const double tol = 1e-9 * std::max(radius, 1e-300);

  auto kernel_cols = [&](const Eigen::ComplexEigenSolver<Matrix>& es) {
    std::vector<Index> cols;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      const Complex ev = es.eigenvalues()(i);
      if (std::abs(ev) < tol && std::abs(ev.real()) < tol) cols.push_back(i);
    }
    return cols;
  };
  const auto rk = kernel_cols(right);
  const auto lk = kernel_cols(left);
  if (rk.empty() || rk.size() != lk.size())
    throw std::runtime_error("steady_states: inconsistent stationary subspace detection");

  const Index k = static_cast<Index>(rk.size());
  Matrix r_basis(d * d, k), l_basis(d * d, k);
  for (Index i = 0; i < k; ++i) {
    r_basis.col(i) = right.eigenvectors().col(rk[i]);
    l_basis.col(i) = left.eigenvectors().col(lk[i]);
  }

  SteadyStateResult res;
  res.dimension = static_cast<int>(k);
  res.unique = (k == 1);
  for (Index i = 0; i < k; ++i) res.basis.emplace_back(liouv.dims, unvec(r_basis.col(i)));

  auto normalize_state = [&](Matrix m) {
    const Complex tr = m.trace();
    if (std::abs(tr) < 1e-12)
      throw PhysicsError("steady_states: selected stationary operator is traceless");
    m /= tr;
    m = (m + m.adjoint().eval()) / 2.0;
    return DensityMatrix(liouv.dims, std::move(m));
  };

  if (res.unique) {
    res.selected = normalize_state(unvec(r_basis.col(0)));
  } else if (rho0) {
    // Spectral projection P = R (L^H R)^{-1} L^H applied to rho0.
    Matrix gram = l_basis.adjoint() * r_basis;
    Vector coords = gram.partialPivLu().solve(l_basis.adjoint() * vec(rho0->mat()));
    res.selected = normalize_state(unvec(r_basis * coords));
  }
  return res;
}

DensityMatrix bell_steady_state_map(const DensityMatrix& rho0, double phi) {
  if (rho0.dims() != Dims{2, 2})
    throw std::invalid_argument("bell_steady_state_map: needs a two-qubit state");
  double sign;
  if (std::abs(phi) < 1e-12)
    sign = -1.0;
  else if (std::abs(phi - M_PI) < 1e-12 || std::abs(phi + M_PI) < 1e-12)
    sign = 1.0;
  else
    throw std::invalid_argument("bell_steady_state_map: phi must be 0 or pi");

  const Matrix& r = rho0.mat();
  const double p_ee = r(0, 0).real();
  const double p_eg = r(1, 1).real();
  const double p_ge = r(2, 2).real();
  const double p_gg = r(3, 3).real();
  const double u = r(0, 3).real();  // Re <ee|rho|gg>

  Matrix out = Matrix::Zero(4, 4);
  out(0, 0) = out(3, 3) = (2.0 * (p_ee + p_gg) + p_eg + p_ge + 2.0 * sign * u) / 6.0;
  out(1, 1) = out(2, 2) = ((p_ee + p_gg) + 2.0 * (p_eg + p_ge) - 2.0 * sign * u) / 6.0;
  out(0, 3) = out(3, 0) = (sign * (p_ee + p_gg - p_eg - p_ge) + 4.0 * u) / 6.0;
  return DensityMatrix({2, 2}, std::move(out));
}

namespace {

// Interaction unitary for one collision interval on system (x) bath space.
Matrix collision_unitary(const Dims& sys_dims, const BathState& bath, const CouplingSpec& c) {
  const int ns = static_cast<int>(sys_dims.size());
  if (bath.n != ns)
    throw std::invalid_argument("collision: bath qubit count must match subsystem count");
  if (c.size() != ns) throw std::invalid_argument("collision: coupling spec size mismatch");
  Dims joint = sys_dims;
  for (int i = 0; i < bath.n; ++i) joint.push_back(2);
  const Subsystems subs = subsystems_from_dims(sys_dims);
  const Index dj = product_dim(joint);
  Matrix h = Matrix::Zero(dj, dj);
  for (int l = 0; l < ns; ++l) {
    const Matrix cl = embed(subs[l].lowering(), l, joint);
    const Matrix sl = embed(sigma_minus(), ns + l, joint);
    h += c.lambdas[l] * (cl.adjoint() * sl + cl * sl.adjoint());
  }
  return expm_hermitian(h, c.dt);
}

Matrix apply_collision(const Matrix& u, const Matrix& rho, const Matrix& rho_e,
                       const Dims& sys_dims, int n_bath) {
  Dims joint = sys_dims;
  for (int i = 0; i < n_bath; ++i) joint.push_back(2);
  const Matrix evolved = u * kron(rho, rho_e) * u.adjoint();
  std::vector<int> keep(sys_dims.size());
  for (size_t i = 0; i < sys_dims.size(); ++i) keep[i] = static_cast<int>(i);
  return partial_trace(evolved, joint, keep);
}

}  // namespace

DensityMatrix collision_step(const DensityMatrix& rho, const BathState& bath,
                             const CouplingSpec& c) {
  const Matrix u = collision_unitary(rho.dims(), bath, c);
  Matrix out = apply_collision(u, rho.mat(), bath.rho_e.mat(), rho.dims(), bath.n);
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityMatrix(rho.dims(), std::move(out));
}

Trajectory collision_trajectory(const DensityMatrix& rho0, const BathState& bath,
                                const CouplingSpec& c, int steps, int stride) {
  if (steps < 0) throw std::invalid_argument("collision_trajectory: steps must be >= 0");
  if (stride < 1) throw std::invalid_argument("collision_trajectory: stride must be >= 1");
  const Matrix u = collision_unitary(rho0.dims(), bath, c);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  Matrix rho = rho0.mat();
  for (int s = 1; s <= steps; ++s) {
    rho = apply_collision(u, rho, bath.rho_e.mat(), rho0.dims(), bath.n);
    if (s % stride == 0 || s == steps) {
      record_invariants(rho, traj);
      traj.times.push_back(s * c.dt);
      traj.states.emplace_back(rho0.dims(), Matrix((rho + rho.adjoint().eval()) / 2.0));
    }
    rho = (rho + rho.adjoint().eval()) / 2.0;
  }
  return traj;
}

ConvergenceResult convergence_order(const DensityMatrix& rho0, const BathState& bath,
                                    double gamma, double t_fix,
                                    const std::vector<double>& dt_list) {
  if (dt_list.size() < 2) throw std::invalid_argument("convergence_order: need at least two dt values");
  const int n = bath.n;
  ConvergenceResult res;
  res.dts = dt_list;

  for (double dtc : dt_list) {
    const CouplingSpec c = CouplingSpec::from_rates(std::vector<double>(n, gamma), dtc);
    CoefficientSet coeffs = n == 2 ? coefficients_2q(bath, c) : coefficients_nq(bath, c);
    const Subsystems subs = subsystems_from_dims(rho0.dims());
    const Liouvillian liouv = build_liouvillian_nondiagonal(coeffs, subs);

    // RK4 substeps fine enough that integrator error is negligible against
    // the collision-vs-generator difference being measured.
    const double norm_est = liouv.superop.cwiseAbs().rowwise().sum().maxCoeff();
    const int sub = std::max(4, static_cast<int>(std::ceil(dtc * norm_est / 0.02)));
    const double dt_me = dtc / sub;

    const Matrix u = collision_unitary(rho0.dims(), bath, c);
    const int steps = static_cast<int>(std::llround(t_fix / dtc));

    Matrix rho_coll = rho0.mat();
    Vector v = vec(rho0.mat());
    const Matrix& sup = liouv.superop;
    double max_err = 0.0;
    for (int s = 1; s <= steps; ++s) {
      rho_coll = apply_collision(u, rho_coll, bath.rho_e.mat(), rho0.dims(), bath.n);
      for (int q = 0; q < sub; ++q) {
        Vector k1 = sup * v;
        Vector k2 = sup * (v + (dt_me / 2.0) * k1);
        Vector k3 = sup * (v + (dt_me / 2.0) * k2);
        Vector k4 = sup * (v + dt_me * k3);
        v += (dt_me / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      max_err = std::max(max_err, trace_distance(rho_coll, unvec(v)));
    }
    res.errors.push_back(max_err);
  }

  res.monotone = true;
  for (size_t i = 0; i + 1 < res.errors.size(); ++i)
    if (!(res.errors[i + 1] < res.errors[i])) res.monotone = false;

  // Least-squares slope of log(error) against log(dt).
  const size_t m = dt_list.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    const double x = std::log(dt_list[i]);
    const double y = std::log(std::max(res.errors[i], 1e-300));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  res.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return res;
}

}  // namespace qme

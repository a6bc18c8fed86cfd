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

#include "qme/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

namespace qme {

RealMatrix symplectic_form(int n_modes) {
  RealMatrix omega = RealMatrix::Zero(2 * n_modes, 2 * n_modes);
  omega.topRightCorner(n_modes, n_modes) = RealMatrix::Identity(n_modes, n_modes);
  omega.bottomLeftCorner(n_modes, n_modes) = -RealMatrix::Identity(n_modes, n_modes);
  return omega;
}

namespace {

void check_uncertainty(const RealMatrix& cov, const char* what) {
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw PhysicsError(std::string(what) + ": covariance not symmetric");
  const int n = static_cast<int>(cov.rows()) / 2;
  Matrix test = cov.cast<Complex>() + kImag * symplectic_form(n).cast<Complex>() / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(test, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw PhysicsError(std::string(what) + ": uncertainty relation violated, min eig " +
                       std::to_string(es.eigenvalues().minCoeff()));
}

}  // namespace

GaussianState::GaussianState(RealVector means_in, RealMatrix cov_in)
    : means(std::move(means_in)), cov(std::move(cov_in)) {
  if (cov.rows() != cov.cols() || cov.rows() != means.size() || cov.rows() % 2 != 0)
    throw std::invalid_argument("GaussianState: inconsistent dimensions");
  check_uncertainty(cov, "GaussianState");
}

GaussianState GaussianState::vacuum(int n_modes) {
  return GaussianState(RealVector::Zero(2 * n_modes),
                       RealMatrix::Identity(2 * n_modes, 2 * n_modes) / 2.0);
}

LinearJumpSet jumps_to_quadrature(const std::vector<OperatorMatrix>& jump_ops,
                                  const Dims& mode_dims) {
  const int n = static_cast<int>(mode_dims.size());
  const Index d = product_dim(mode_dims);

  // Embedded annihilation operators; pairwise HS-orthogonal, and orthogonal
  // to their adjoints, so coefficients project out independently.
  std::vector<Matrix> as, ads;
  for (int l = 0; l < n; ++l) {
    Matrix a = embed(annihilation(mode_dims[l]), l, mode_dims);
    as.push_back(a);
    ads.push_back(a.adjoint());
  }

  LinearJumpSet out;
  out.c = Matrix::Zero(static_cast<Index>(jump_ops.size()), 2 * n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t m = 0; m < jump_ops.size(); ++m) {
    const Matrix& l_op = jump_ops[m].mat;
    if (l_op.rows() != d) throw std::invalid_argument("jumps_to_quadrature: dimension mismatch");
    Matrix recon = Matrix::Zero(d, d);
    for (int l = 0; l < n; ++l) {
      const double na = as[l].squaredNorm();
      const Complex u = (as[l].adjoint() * l_op).trace() / na;
      const Complex v = (ads[l].adjoint() * l_op).trace() / na;
      // L = sum_l u a_l + v a_l^dag  ->  Q = (u+v)/sqrt2, P = i(u-v)/sqrt2
      out.c(static_cast<Index>(m), l) = (u + v) * inv_sqrt2;
      out.c(static_cast<Index>(m), n + l) = kImag * (u - v) * inv_sqrt2;
      recon += u * as[l] + v * ads[l];
    }
    const double resid = (l_op - recon).norm();
    if (resid > 1e-10 * std::max(1.0, l_op.norm()))
      throw std::invalid_argument("jumps_to_quadrature: jump operator is not linear in the mode operators");
  }
  return out;
}

DriftDiffusion drift_diffusion(const LinearJumpSet& jumps, const RealMatrix* g_quadratic) {
  const int n = jumps.modes();
  const RealMatrix omega = symplectic_form(n);
  const Matrix chc = jumps.c.adjoint() * jumps.c;
  RealMatrix g = g_quadratic ? *g_quadratic : RealMatrix::Zero(2 * n, 2 * n);
  if (g.rows() != 2 * n || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("drift_diffusion: quadratic Hamiltonian matrix must be symmetric 2N x 2N");
  DriftDiffusion dd;
  dd.drift = omega * (g + chc.imag());
  dd.diffusion = omega * chc.real() * omega.transpose();
  dd.diffusion = ((dd.diffusion + dd.diffusion.transpose()) / 2.0).eval();
  return dd;
}

GaussianState tmsv_covariance(double r, double theta) {
  if (r < 0.0) throw std::invalid_argument("tmsv_covariance: r must be >= 0");
  const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
  const double cs = std::cos(theta), sn = std::sin(theta);
  RealMatrix cov = RealMatrix::Zero(4, 4);
  // qq block
  cov(0, 0) = cov(1, 1) = ch / 2.0;
  cov(0, 1) = cov(1, 0) = -cs * sh / 2.0;
  // pp block
  cov(2, 2) = cov(3, 3) = ch / 2.0;
  cov(2, 3) = cov(3, 2) = cs * sh / 2.0;
  // qp cross entries q1p2 and q2p1
  cov(0, 3) = cov(3, 0) = -sn * sh / 2.0;
  cov(1, 2) = cov(2, 1) = -sn * sh / 2.0;
  return GaussianState(RealVector::Zero(4), std::move(cov));
}

std::vector<std::pair<double, GaussianState>> evolve_covariance(const DriftDiffusion& dd,
                                                                const GaussianState& s0, double dt,
                                                                double t_end, int stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_covariance: dt must be positive");
  if (stride < 1) throw std::invalid_argument("evolve_covariance: stride must be >= 1");
  const RealMatrix& a = dd.drift;
  const RealMatrix& b = dd.diffusion;
  if (a.rows() != s0.cov.rows()) throw std::invalid_argument("evolve_covariance: dimension mismatch");
  const int steps = static_cast<int>(std::llround(t_end / dt));

  std::vector<std::pair<double, GaussianState>> traj;
  traj.emplace_back(0.0, s0);

  RealVector x = s0.means;
  RealMatrix sig = s0.cov;
  auto rhs_cov = [&](const RealMatrix& s) { return RealMatrix(a * s + s * a.transpose() + b); };
  for (int s = 1; s <= steps; ++s) {
    const RealMatrix k1 = rhs_cov(sig);
    const RealMatrix k2 = rhs_cov(sig + (dt / 2.0) * k1);
    const RealMatrix k3 = rhs_cov(sig + (dt / 2.0) * k2);
    const RealMatrix k4 = rhs_cov(sig + dt * k3);
    sig += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    sig = ((sig + sig.transpose()) / 2.0).eval();

    const RealVector m1 = a * x;
    const RealVector m2 = a * (x + (dt / 2.0) * m1);
    const RealVector m3 = a * (x + (dt / 2.0) * m2);
    const RealVector m4 = a * (x + dt * m3);
    x += (dt / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    if (s % stride == 0 || s == steps) traj.emplace_back(s * dt, GaussianState(x, sig));
  }
  return traj;
}

RealVector symplectic_eigenvalues(const RealMatrix& cov) {
  const int n = static_cast<int>(cov.rows()) / 2;
  const Matrix m = kImag * symplectic_form(n).cast<Complex>() * cov.cast<Complex>();
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  std::vector<double> pos;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i).real();
    if (v > 0.0) pos.push_back(v);
  }
  std::sort(pos.begin(), pos.end());
  RealVector out(static_cast<Index>(pos.size()));
  for (size_t i = 0; i < pos.size(); ++i) out(static_cast<Index>(i)) = pos[i];
  return out;
}

namespace {

bool is_pure(const GaussianState& s) {
  const RealVector nu = symplectic_eigenvalues(s.cov);
  return nu.size() == s.modes() && (nu.array() - 0.5).abs().maxCoeff() < 1e-6;
}

}  // namespace

double gaussian_fidelity(const GaussianState& a, const GaussianState& b) {
  if (a.cov.rows() != b.cov.rows()) throw std::invalid_argument("gaussian_fidelity: dimension mismatch");
  if (a.means.cwiseAbs().maxCoeff() > 1e-12 || b.means.cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("gaussian_fidelity: supported for zero-mean states only");
  if (!is_pure(a) && !is_pure(b))
    throw std::invalid_argument("gaussian_fidelity: at least one state must be pure");
  const double det = (a.cov + b.cov).determinant();
  const double f = 1.0 / std::sqrt(det);
  return std::min(1.0, std::max(0.0, f));
}

Vector fock_tmsv(double r, double theta, Index d) {
  if (d < 2) throw std::invalid_argument("fock_tmsv: dimension must be >= 2");
  Vector v = Vector::Zero(d * d);
  const Complex ratio = -std::exp(kImag * theta) * std::tanh(r);
  Complex coeff = 1.0;
  for (Index n = 0; n < d; ++n) {
    v(n * d + n) = coeff;
    coeff *= ratio;
  }
  v /= v.norm();
  return v;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

Complex sparse_trace_with(const SparseMatrix& op, const Matrix& rho) {
  // Tr(op * rho) accumulated over the nonzeros of op.
  Complex sum = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op, k); it; ++it) sum += it.value() * rho(it.col(), it.row());
  return sum;
}

}  // namespace

QuadratureMoments gaussian_moments_from_fock(const Matrix& rho, const Dims& mode_dims) {
  const int n = static_cast<int>(mode_dims.size());
  const Index d = product_dim(mode_dims);
  if (rho.rows() != d) throw std::invalid_argument("gaussian_moments_from_fock: dimension mismatch");

  std::vector<SparseMatrix> x_ops(2 * n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int l = 0; l < n; ++l) {
    const Matrix a = embed(annihilation(mode_dims[l]), l, mode_dims);
    x_ops[l] = Matrix((a + a.adjoint()) * inv_sqrt2).sparseView();
    x_ops[n + l] = Matrix((a - a.adjoint()) * (-kImag) * inv_sqrt2).sparseView();
  }

  RealVector means(2 * n);
  for (int i = 0; i < 2 * n; ++i) means(i) = sparse_trace_with(x_ops[i], rho).real();

  RealMatrix cov(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = i; j < 2 * n; ++j) {
      const SparseMatrix pij = x_ops[i] * x_ops[j];
      const SparseMatrix pji = x_ops[j] * x_ops[i];
      const Complex sym = 0.5 * (sparse_trace_with(pij, rho) + sparse_trace_with(pji, rho));
      cov(i, j) = cov(j, i) = sym.real() - means(i) * means(j);
    }
  }
  return QuadratureMoments{std::move(means), std::move(cov)};
}

}  // namespace qme

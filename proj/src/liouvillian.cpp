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

#include "qme/liouvillian.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qme {

SubsystemSpec SubsystemSpec::oscillator(Index d) {
  if (d < 2) throw std::invalid_argument("SubsystemSpec::oscillator: dimension must be >= 2");
  return {Kind::Oscillator, d};
}

Matrix SubsystemSpec::lowering() const {
  return kind == Kind::Qubit ? sigma_minus() : annihilation(dim);
}

Dims dims_of(const Subsystems& subsystems) {
  Dims d;
  d.reserve(subsystems.size());
  for (const auto& s : subsystems) d.push_back(s.dim);
  return d;
}

Subsystems subsystems_from_dims(const Dims& dims) {
  Subsystems out;
  out.reserve(dims.size());
  for (Index d : dims)
    out.push_back(d == 2 ? SubsystemSpec::qubit() : SubsystemSpec::oscillator(d));
  return out;
}

namespace {

std::vector<Matrix> lowering_ops(const Subsystems& subsystems) {
  const Dims dims = dims_of(subsystems);
  std::vector<Matrix> cs;
  cs.reserve(subsystems.size());
  for (int l = 0; l < static_cast<int>(subsystems.size()); ++l)
    cs.push_back(embed(subsystems[l].lowering(), l, dims));
  return cs;
}

Vector pure_bath_coefficients(const BathState& bath) {
  if (bath.pure_coeffs) return *bath.pure_coeffs;
  // Accept a rank-one density matrix without stored coefficients.
  Eigen::SelfAdjointEigenSolver<Matrix> es(bath.rho_e.mat());
  const auto& ev = es.eigenvalues();
  if (ev(ev.size() - 1) < 1.0 - 1e-12)
    throw std::invalid_argument("pure bath required: state is mixed (use the nondiagonal form)");
  return es.eigenvectors().col(ev.size() - 1);
}

void check_trace_preserving(const Liouvillian& liouv) {
  const Index d = liouv.state_side();
  Vector tr_row = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) tr_row(i * d + i) = 1.0;
  const double resid = (tr_row.adjoint() * liouv.superop).cwiseAbs().maxCoeff();
  if (resid > 1e-10)
    throw PhysicsError("Liouvillian is not trace preserving, residual " + std::to_string(resid));
}

}  // namespace

OperatorMatrix effective_hamiltonian(const CoefficientSet& coeffs, const Subsystems& subsystems) {
  if (coeffs.n != static_cast<int>(subsystems.size()))
    throw std::invalid_argument("effective_hamiltonian: subsystem count mismatch");
  const Dims dims = dims_of(subsystems);
  const Index d = product_dim(dims);
  Matrix h = Matrix::Zero(d, d);
  const auto cs = lowering_ops(subsystems);
  for (int l = 0; l < coeffs.n; ++l)
    h += coeffs.h_coeff(l) * cs[l] + std::conj(coeffs.h_coeff(l)) * cs[l].adjoint();
  return OperatorMatrix(dims, std::move(h));
}

std::vector<OperatorMatrix> jump_ops_2q(const BathState& bath, const Subsystems& subsystems,
                                        const CouplingSpec& c) {
  if (bath.n != 2 || subsystems.size() != 2 || c.size() != 2)
    throw std::invalid_argument("jump_ops_2q: needs two subsystems and a two-qubit bath");
  const Vector b = pure_bath_coefficients(bath);
  const Complex b_ee = b(0), b_eg = b(1), b_ge = b(2), b_gg = b(3);
  const double s1 = std::sqrt(c.gamma(0)), s2 = std::sqrt(c.gamma(1));
  const Dims dims = dims_of(subsystems);
  const auto cs = lowering_ops(subsystems);
  const Matrix c1 = cs[0], c2 = cs[1];

  std::vector<OperatorMatrix> out;
  out.emplace_back(dims, Matrix(s1 * b_gg * c1 + s2 * b_ee * c2.adjoint()));
  out.emplace_back(dims, Matrix(s1 * b_ee * c1.adjoint() + s2 * b_gg * c2));
  out.emplace_back(dims, Matrix(s1 * b_ge * c1 + s2 * b_eg * c2));
  out.emplace_back(dims, Matrix(s1 * b_eg * c1.adjoint() + s2 * b_ge * c2.adjoint()));
  return out;
}

Matrix left_mult(const Matrix& a) { return kron(identity(a.rows()), a); }

Matrix right_mult(const Matrix& b) { return kron(b.transpose(), identity(b.rows())); }

Matrix commutator_superop(const Matrix& h) {
  return -kImag * (left_mult(h) - right_mult(h));
}

Matrix dissipator_superop(const Matrix& l) {
  const Matrix ldl = l.adjoint() * l;
  return kron(l.conjugate(), l) - 0.5 * (left_mult(ldl) + right_mult(ldl));
}

Matrix cross_superop(const Matrix& o1, const Matrix& o2) {
  const Matrix anti = o1 * o2 + o2 * o1;
  return kron(o2.transpose(), o1) + kron(o1.transpose(), o2) -
         0.5 * (left_mult(anti) + right_mult(anti));
}

Liouvillian build_liouvillian_diagonal(const OperatorMatrix& h_eff,
                                       const std::vector<OperatorMatrix>& jump_ops) {
  const Index d = h_eff.side();
  for (const auto& l : jump_ops)
    if (l.side() != d || l.dims != h_eff.dims)
      throw std::invalid_argument("build_liouvillian_diagonal: operator dimension mismatch");
  Matrix super = commutator_superop(h_eff.mat);
  for (const auto& l : jump_ops) super += dissipator_superop(l.mat);
  Liouvillian liouv{h_eff.dims, std::move(super)};
  check_trace_preserving(liouv);
  return liouv;
}

Liouvillian build_liouvillian_nondiagonal(const CoefficientSet& coeffs,
                                          const Subsystems& subsystems) {
  const int n = coeffs.n;
  if (n != static_cast<int>(subsystems.size()))
    throw std::invalid_argument("build_liouvillian_nondiagonal: subsystem count mismatch");
  const Dims dims = dims_of(subsystems);
  const auto cs = lowering_ops(subsystems);

  Matrix super = commutator_superop(effective_hamiltonian(coeffs, subsystems).mat);
  for (int l = 0; l < n; ++l) {
    super += coeffs.gamma_down(l) * dissipator_superop(cs[l]);
    super += coeffs.gamma_up(l) * dissipator_superop(cs[l].adjoint());
  }
  for (int l = 0; l < n; ++l) {
    for (int m = l + 1; m < n; ++m) {
      const Complex dd = coeffs.gamma_dd(l, m);
      const Complex du = coeffs.gamma_du(l, m);
      if (dd != Complex(0.0)) {
        super += dd * cross_superop(cs[l], cs[m]);
        super += std::conj(dd) * cross_superop(cs[l].adjoint(), cs[m].adjoint());
      }
      if (du != Complex(0.0)) {
        super += du * cross_superop(cs[l], cs[m].adjoint());
        super += std::conj(du) * cross_superop(cs[l].adjoint(), cs[m]);
      }
    }
  }
  Liouvillian liouv{dims, std::move(super)};
  check_trace_preserving(liouv);
  return liouv;
}

GeneratorSpec make_generator_diagonal(const BathState& bath, const Subsystems& subsystems,
                                      const CouplingSpec& c) {
  CoefficientSet coeffs = bath.n == 2 ? coefficients_2q(bath, c) : coefficients_nq(bath, c);
  GeneratorSpec gen;
  gen.subsystems = subsystems;
  gen.coeffs = coeffs;
  gen.h_eff = effective_hamiltonian(coeffs, subsystems);
  gen.jump_ops = jump_ops_2q(bath, subsystems, c);
  gen.form = GeneratorForm::Diagonal;
  return gen;
}

GeneratorSpec make_generator_nondiagonal(const BathState& bath, const Subsystems& subsystems,
                                         const CouplingSpec& c) {
  GeneratorSpec gen;
  gen.subsystems = subsystems;
  gen.coeffs = bath.n == 2 ? coefficients_2q(bath, c) : coefficients_nq(bath, c);
  gen.h_eff = effective_hamiltonian(gen.coeffs, subsystems);
  gen.form = GeneratorForm::Nondiagonal;
  return gen;
}

Liouvillian build_liouvillian(const GeneratorSpec& gen) {
  if (gen.form == GeneratorForm::Diagonal)
    return build_liouvillian_diagonal(gen.h_eff, gen.jump_ops);
  return build_liouvillian_nondiagonal(gen.coeffs, gen.subsystems);
}

Matrix kossakowski_matrix(const CoefficientSet& coeffs) {
  const int n = coeffs.n;
  // basis index 2l = c_l, 2l+1 = c_l^dag
  Matrix k = Matrix::Zero(2 * n, 2 * n);
  for (int l = 0; l < n; ++l) {
    k(2 * l, 2 * l) = coeffs.gamma_down(l);
    k(2 * l + 1, 2 * l + 1) = coeffs.gamma_up(l);
  }
  for (int l = 0; l < n; ++l) {
    for (int m = l + 1; m < n; ++m) {
      const Complex dd = coeffs.gamma_dd(l, m);
      const Complex du = coeffs.gamma_du(l, m);
      // gamma_dd S[c_l, c_m]:  c_l rho c_m = o_{2l} rho o_{2m+1}^dag
      k(2 * l, 2 * m + 1) += dd;
      k(2 * m, 2 * l + 1) += dd;
      k(2 * l + 1, 2 * m) += std::conj(dd);
      k(2 * m + 1, 2 * l) += std::conj(dd);
      // gamma_du S[c_l, c_m^dag]
      k(2 * l, 2 * m) += du;
      k(2 * m + 1, 2 * l + 1) += du;
      k(2 * l + 1, 2 * m + 1) += std::conj(du);
      k(2 * m, 2 * l) += std::conj(du);
    }
  }
  return k;
}

std::vector<OperatorMatrix> diagonalize_dissipator(const CoefficientSet& coeffs,
                                                   const Subsystems& subsystems) {
  const Matrix k = kossakowski_matrix(coeffs);
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-10)
    throw PhysicsError("diagonalize_dissipator: coefficient matrix has eigenvalue " +
                       std::to_string(min_eig));

  const Dims dims = dims_of(subsystems);
  const auto cs = lowering_ops(subsystems);
  std::vector<Matrix> basis;
  for (const auto& c : cs) {
    basis.push_back(c);
    basis.push_back(c.adjoint());
  }

  std::vector<OperatorMatrix> jumps;
  const double drop = 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Index kk = 0; kk < es.eigenvalues().size(); ++kk) {
    const double mu = es.eigenvalues()(kk);
    if (mu <= drop) continue;
    Matrix op = Matrix::Zero(product_dim(dims), product_dim(dims));
    for (Index j = 0; j < static_cast<Index>(basis.size()); ++j)
      op += es.eigenvectors()(j, kk) * basis[j];
    jumps.emplace_back(dims, Matrix(std::sqrt(mu) * op));
  }
  return jumps;
}

}  // namespace qme

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

#include "qme/bath.hpp"
#include "qme/core.hpp"

namespace qme {

// A subsystem coupled to one bath qubit: either a two-level system or a
// Fock-truncated oscillator.  The coupling operator c_l is the lowering
// operator (sigma_minus, or the annihilation matrix).
struct SubsystemSpec {
  enum class Kind { Qubit, Oscillator };
  Kind kind = Kind::Qubit;
  Index dim = 2;

  static SubsystemSpec qubit() { return {Kind::Qubit, 2}; }
  static SubsystemSpec oscillator(Index d);
  Matrix lowering() const;
};

using Subsystems = std::vector<SubsystemSpec>;
Dims dims_of(const Subsystems& subsystems);
// All dims 2 -> qubits; larger dims -> truncated oscillators.
Subsystems subsystems_from_dims(const Dims& dims);

enum class GeneratorForm { Diagonal, Nondiagonal };

// Compiled generator data: total effective Hamiltonian, jump operators (in
// the diagonal form), and the coefficient set (in the nondiagonal form).
struct GeneratorSpec {
  Subsystems subsystems;
  OperatorMatrix h_eff;
  std::vector<OperatorMatrix> jump_ops;
  CoefficientSet coeffs;
  GeneratorForm form = GeneratorForm::Nondiagonal;

  Dims dims() const { return dims_of(subsystems); }
};

// Matrix representation of the generator acting on column-stacked density
// matrices: vec(rho_dot) = superop * vec(rho).
struct Liouvillian {
  Dims dims;
  Matrix superop;

  Index state_side() const { return product_dim(dims); }
};

// Total effective Hamiltonian sum_l h_coeff[l] c_l + h.c.
OperatorMatrix effective_hamiltonian(const CoefficientSet& coeffs, const Subsystems& subsystems);

// The four jump operators of the pure-bath two-subsystem master equation.
// Throws for mixed baths; those must use the nondiagonal form.
std::vector<OperatorMatrix> jump_ops_2q(const BathState& bath, const Subsystems& subsystems,
                                        const CouplingSpec& c);

// Lindblad-form superoperator from an explicit Hamiltonian and jump operators.
Liouvillian build_liouvillian_diagonal(const OperatorMatrix& h_eff,
                                       const std::vector<OperatorMatrix>& jump_ops);

// Superoperator from the coefficient set: local dissipators, two-excitation
// cross terms for every pair l < m, and the effective Hamiltonians.
Liouvillian build_liouvillian_nondiagonal(const CoefficientSet& coeffs, const Subsystems& subsystems);

// Convenience wrappers pairing a bath with subsystems.
GeneratorSpec make_generator_diagonal(const BathState& bath, const Subsystems& subsystems,
                                      const CouplingSpec& c);
GeneratorSpec make_generator_nondiagonal(const BathState& bath, const Subsystems& subsystems,
                                         const CouplingSpec& c);
Liouvillian build_liouvillian(const GeneratorSpec& gen);

// Dissipator coefficient matrix over the operator basis
// {c_0, c_0^dag, c_1, c_1^dag, ...}; Hermitian, PSD for any valid bath.
Matrix kossakowski_matrix(const CoefficientSet& coeffs);

// Eigendecomposition of the coefficient matrix into explicit jump operators
// sqrt(mu_k) * (eigenvector combination).  Throws PhysicsError if the matrix
// has an eigenvalue below -1e-10.  Zero-eigenvalue channels are dropped.
std::vector<OperatorMatrix> diagonalize_dissipator(const CoefficientSet& coeffs,
                                                   const Subsystems& subsystems);

// Superoperator building blocks (column-stacking convention).
Matrix left_mult(const Matrix& a);           // vec(a X)   = (I (x) a) vec X
Matrix right_mult(const Matrix& b);          // vec(X b)   = (b^T (x) I) vec X
Matrix commutator_superop(const Matrix& h);  // -i [h, .]
Matrix dissipator_superop(const Matrix& l);  // D[l]
// Symmetric two-operator dissipative term
// S[o1,o2] rho = o1 rho o2 + o2 rho o1 - 1/2 {o1 o2 + o2 o1, rho}.
Matrix cross_superop(const Matrix& o1, const Matrix& o2);

}  // namespace qme

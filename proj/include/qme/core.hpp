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

#include "qme/types.hpp"

namespace qme {

// Basis convention used across the library: for every two-level factor,
// index 0 = |e> and index 1 = |g>, so the lowering operator |g><e| has its
// single nonzero entry below the diagonal.  Subsystem 0 is the leftmost
// (slowest-varying) tensor factor: |jk> maps to index j*dim_k + k.

// Operator on a multipartite space: a complex square matrix tagged with the
// list of local dimensions whose product is the side length.
struct OperatorMatrix {
  Dims dims;
  Matrix mat;

  OperatorMatrix() = default;
  OperatorMatrix(Dims d, Matrix m);

  Index side() const { return mat.rows(); }
};

// Validated quantum state: Hermitian, unit-trace, positive semidefinite
// within the tolerances in types.hpp.  Immutable after construction.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, Matrix data);
  static DensityMatrix from_pure(Dims dims, const Vector& ket);

  const Dims& dims() const { return dims_; }
  const Matrix& mat() const { return mat_; }
  Index side() const { return mat_.rows(); }

 private:
  Dims dims_;
  Matrix mat_;
};

// Throws PhysicsError naming `context` unless `m` is Hermitian, unit-trace,
// and PSD within tolerance.
void check_state_invariants(const Matrix& m, const std::string& context);

// Kronecker (tensor) product; output dims are the concatenation.
Matrix kron(const Matrix& a, const Matrix& b);
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);
Vector kron_vec(const Vector& a, const Vector& b);

// Reduced operator on the subsystems listed in `keep` (0-based, any order
// given; applied in increasing order).  Trace is preserved.
Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transpose on one factor of a bipartite operator.  `subsystem` is 0 or 1.
Matrix partial_transpose(const Matrix& m, const Dims& dims, int subsystem);
OperatorMatrix partial_transpose(const DensityMatrix& rho, int subsystem);

// U = exp(-i h t) for Hermitian h, via eigendecomposition (exact, no series
// truncation).  Throws std::invalid_argument if h is not Hermitian to 1e-10.
Matrix expm_hermitian(const Matrix& h, double t);

// Orthonormal basis of the numerical null space of m: right singular vectors
// whose singular value falls below tol * (largest singular value).
std::vector<Vector> kernel_basis(const Matrix& m, double tol);

// Column-stacking vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v);

// --- elementary operators and kets ---

Matrix identity(Index n);
Matrix sigma_minus();              // |g><e|
Matrix sigma_plus();               // |e><g|
Matrix annihilation(Index d);      // <k-1|a|k> = sqrt(k)

// op acting on subsystem `pos` of a multipartite space, identity elsewhere.
Matrix embed(const Matrix& op, int pos, const Dims& dims);

// Basis ket |i0 i1 ...> with local indices per subsystem.
Vector basis_ket(const Dims& dims, const std::vector<Index>& indices);

// Two-qubit states in the {|ee>,|eg>,|ge>,|gg>} ordering.
Vector ket_ee();
Vector ket_eg();
Vector ket_ge();
Vector ket_gg();
Vector bell_phi_plus();            // (|ee> + |gg>)/sqrt2
Vector bell_phi_minus();           // (|ee> - |gg>)/sqrt2
Vector bell_psi_plus();            // (|eg> + |ge>)/sqrt2
Vector bell_psi_minus();           // (|eg> - |ge>)/sqrt2
// sin(theta)|Phi+> + cos(theta)|Phi->  and the |Psi+-> analogue.
Vector theta_state(double theta);
Vector psi_theta_state(double theta);

}  // namespace qme

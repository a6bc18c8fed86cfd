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

#include "qme/core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qme {

namespace {

void require_dims_match(const Dims& dims, Index side, const char* what) {
  if (product_dim(dims) != side) {
    throw std::invalid_argument(std::string(what) +
                                ": product of dims does not match matrix side");
  }
}

}  // namespace

OperatorMatrix::OperatorMatrix(Dims d, Matrix m) : dims(std::move(d)), mat(std::move(m)) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("OperatorMatrix: matrix not square");
  require_dims_match(dims, mat.rows(), "OperatorMatrix");
}

void check_state_invariants(const Matrix& m, const std::string& context) {
  if (m.rows() != m.cols()) throw PhysicsError(context + ": state matrix not square");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw PhysicsError(context + ": Hermiticity violated, max|rho-rho^dag| = " + std::to_string(herm));
  }
  const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    throw PhysicsError(context + ": trace deviates from 1 by " + std::to_string(tr_err));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigenvalueFloor) {
    throw PhysicsError(context + ": negative eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix::DensityMatrix(Dims dims, Matrix data) : dims_(std::move(dims)), mat_(std::move(data)) {
  require_dims_match(dims_, mat_.rows(), "DensityMatrix");
  check_state_invariants(mat_, "DensityMatrix");
}

DensityMatrix DensityMatrix::from_pure(Dims dims, const Vector& ket) {
  const double n = ket.norm();
  if (std::abs(n - 1.0) > 1e-10) throw std::invalid_argument("DensityMatrix::from_pure: ket not normalized");
  Matrix m = ket * ket.adjoint();
  return DensityMatrix(std::move(dims), std::move(m));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  Dims dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return OperatorMatrix(std::move(dims), kron(a.mat, b.mat));
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<int>& keep) {
  require_dims_match(dims, m.rows(), "partial_trace");
  const int n = static_cast<int>(dims.size());
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (keep_sorted.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  if (std::unique(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
    throw std::invalid_argument("partial_trace: duplicate subsystem index");
  if (keep_sorted.front() < 0 || keep_sorted.back() >= n)
    throw std::invalid_argument("partial_trace: subsystem index out of range");

  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i)) traced.push_back(i);

  Index dim_keep = 1;
  for (int i : keep_sorted) dim_keep *= dims[i];

  // Strides of each subsystem index in the flat row/column index.
  std::vector<Index> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  auto flat = [&](const std::vector<Index>& keep_idx, const std::vector<Index>& tr_idx) {
    Index f = 0;
    for (size_t k = 0; k < keep_sorted.size(); ++k) f += keep_idx[k] * stride[keep_sorted[k]];
    for (size_t k = 0; k < traced.size(); ++k) f += tr_idx[k] * stride[traced[k]];
    return f;
  };

  auto advance = [](std::vector<Index>& idx, const Dims& dims_list, const std::vector<int>& subs) {
    for (int k = static_cast<int>(subs.size()) - 1; k >= 0; --k) {
      if (++idx[k] < dims_list[subs[k]]) return true;
      idx[k] = 0;
    }
    return false;
  };

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  std::vector<Index> row_keep(keep_sorted.size(), 0);
  Index r = 0;
  do {
    std::vector<Index> col_keep(keep_sorted.size(), 0);
    Index c = 0;
    do {
      Complex sum = 0.0;
      std::vector<Index> tr_idx(traced.size(), 0);
      do {
        sum += m(flat(row_keep, tr_idx), flat(col_keep, tr_idx));
      } while (!traced.empty() && advance(tr_idx, dims, traced));
      out(r, c) = sum;
      ++c;
    } while (advance(col_keep, dims, keep_sorted));
    ++r;
  } while (advance(row_keep, dims, keep_sorted));
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Matrix reduced = partial_trace(rho.mat(), rho.dims(), keep);
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  Dims out_dims;
  for (int i : keep_sorted) out_dims.push_back(rho.dims()[i]);
  return DensityMatrix(std::move(out_dims), std::move(reduced));
}

Matrix partial_transpose(const Matrix& m, const Dims& dims, int subsystem) {
  if (dims.size() != 2) throw std::invalid_argument("partial_transpose: state must be bipartite");
  if (subsystem != 0 && subsystem != 1) throw std::invalid_argument("partial_transpose: subsystem must be 0 or 1");
  require_dims_match(dims, m.rows(), "partial_transpose");
  const Index da = dims[0], db = dims[1];
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index k = 0; k < db; ++k)
        for (Index l = 0; l < db; ++l) {
          // (|i><j| ox |k><l|) -> transpose the chosen factor
          if (subsystem == 0)
            out(j * db + k, i * db + l) = m(i * db + k, j * db + l);
          else
            out(i * db + l, j * db + k) = m(i * db + k, j * db + l);
        }
  return out;
}

OperatorMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  return OperatorMatrix(rho.dims(), partial_transpose(rho.mat(), rho.dims(), subsystem));
}

Matrix expm_hermitian(const Matrix& h, double t) {
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw std::invalid_argument("expm_hermitian: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  Vector phases(es.eigenvalues().size());
  for (Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Vector> kernel_basis(const Matrix& m, double tol) {
  if (tol <= 0) throw std::invalid_argument("kernel_basis: tol must be positive");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  std::vector<Vector> basis;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) < cutoff || sv(0) == 0.0) basis.push_back(svd.matrixV().col(i));
  return basis;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v) {
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("unvec: length is not a perfect square");
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix sigma_minus() {
  Matrix s = Matrix::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

Matrix sigma_plus() { return sigma_minus().adjoint(); }

Matrix annihilation(Index d) {
  Matrix a = Matrix::Zero(d, d);
  for (Index k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Matrix embed(const Matrix& op, int pos, const Dims& dims) {
  if (pos < 0 || pos >= static_cast<int>(dims.size())) throw std::invalid_argument("embed: position out of range");
  if (op.rows() != dims[pos]) throw std::invalid_argument("embed: operator does not match local dimension");
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    out = kron(out, i == pos ? op : identity(dims[i]));
  return out;
}

Vector basis_ket(const Dims& dims, const std::vector<Index>& indices) {
  if (indices.size() != dims.size()) throw std::invalid_argument("basis_ket: index count mismatch");
  Index flat = 0;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= dims[i]) throw std::invalid_argument("basis_ket: index out of range");
    flat = flat * dims[i] + indices[i];
  }
  Vector v = Vector::Zero(product_dim(dims));
  v(flat) = 1.0;
  return v;
}

Vector ket_ee() { return basis_ket({2, 2}, {0, 0}); }
Vector ket_eg() { return basis_ket({2, 2}, {0, 1}); }
Vector ket_ge() { return basis_ket({2, 2}, {1, 0}); }
Vector ket_gg() { return basis_ket({2, 2}, {1, 1}); }

Vector bell_phi_plus() { return (ket_ee() + ket_gg()) / std::sqrt(2.0); }
Vector bell_phi_minus() { return (ket_ee() - ket_gg()) / std::sqrt(2.0); }
Vector bell_psi_plus() { return (ket_eg() + ket_ge()) / std::sqrt(2.0); }
Vector bell_psi_minus() { return (ket_eg() - ket_ge()) / std::sqrt(2.0); }

Vector theta_state(double theta) {
  return std::sin(theta) * bell_phi_plus() + std::cos(theta) * bell_phi_minus();
}

Vector psi_theta_state(double theta) {
  return std::sin(theta) * bell_psi_plus() + std::cos(theta) * bell_psi_minus();
}

}  // namespace qme

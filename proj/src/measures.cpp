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

#include "qme/measures.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qme {

namespace {

void require_two_qubit(const DensityMatrix& rho, const char* what) {
  if (rho.dims() != Dims{2, 2})
    throw std::invalid_argument(std::string(what) + ": requires a two-qubit state");
}

}  // namespace

RealVector pt_spectrum(const DensityMatrix& rho) {
  require_two_qubit(rho, "pt_spectrum");
  const Matrix pt = partial_transpose(rho.mat(), rho.dims(), 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((pt + pt.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double log_negativity(const DensityMatrix& rho) {
  require_two_qubit(rho, "log_negativity");
  const RealVector spec = pt_spectrum(rho);
  const double trace_norm = spec.cwiseAbs().sum();
  const double ln = std::log2(trace_norm);
  if (ln < -1e-9) throw PhysicsError("log_negativity: trace norm below 1 beyond tolerance");
  return std::max(0.0, ln);
}

double purity(const DensityMatrix& rho) {
  const double p = (rho.mat() * rho.mat()).trace().real();
  return std::min(1.0, p);
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("state_fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat());
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  const Matrix sqrt_rho =
      es.eigenvectors() * ev.cwiseSqrt().asDiagonal().toDenseMatrix().cast<Complex>() *
      es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> inner(Matrix(sqrt_rho * sigma.mat() * sqrt_rho),
                                              Eigen::EigenvaluesOnly);
  const double sum = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, sum * sum);
}

EntanglementReport make_report(const DensityMatrix& rho,
                               const std::optional<DensityMatrix>& target) {
  EntanglementReport rep;
  rep.pt_spectrum = pt_spectrum(rho);
  rep.log_negativity = log_negativity(rho);
  rep.purity = purity(rho);
  if (target) rep.fidelity = state_fidelity(rho, *target);
  return rep;
}

}  // namespace qme

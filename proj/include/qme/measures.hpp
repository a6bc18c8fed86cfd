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

// Ascending eigenvalues of the partial transpose of a two-qubit state.
RealVector pt_spectrum(const DensityMatrix& rho);

// log2 of the trace norm of the partial transpose, clamped to 0 from tiny
// negative rounding.  Two-qubit states only.
double log_negativity(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

// Uhlmann-Jozsa fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct EntanglementReport {
  RealVector pt_spectrum;
  double log_negativity = 0.0;
  double purity = 0.0;
  std::optional<double> fidelity;  // to a named target, when given
};

EntanglementReport make_report(const DensityMatrix& rho,
                               const std::optional<DensityMatrix>& target = std::nullopt);

}  // namespace qme

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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qme {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Per-subsystem local dimensions, leftmost factor first (slowest-varying index).
using Dims = std::vector<Index>;

inline constexpr Complex kImag{0.0, 1.0};

// State-validity tolerances used everywhere a density matrix is checked.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
// Fixed-step integration leaves eigenvalue noise at this scale.
inline constexpr double kEigenvalueFloor = -1e-9;

// Raised when a computed state or generator violates a physical constraint
// (non-unit trace, negativity beyond tolerance, trace drift, ...).  Input
// validation failures use std::invalid_argument instead.
class PhysicsError : public std::runtime_error {
 public:
  explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

inline Index product_dim(const Dims& dims) {
  Index d = 1;
  for (Index x : dims) d *= x;
  return d;
}

}  // namespace qme

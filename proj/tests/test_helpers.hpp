#pragma once

#include <random>

#include "qme/core.hpp"

namespace qme::test {

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform() { return dist_(gen_); }
  double normal() { return norm_(gen_); }
  Complex cnormal() { return {norm_(gen_), norm_(gen_)}; }

  Vector random_ket(Index dim) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = cnormal();
    v /= v.norm();
    return v;
  }

  Matrix random_matrix(Index dim) {
    Matrix m(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) m(i, j) = cnormal();
    return m;
  }

  Matrix random_hermitian(Index dim) {
    Matrix m = random_matrix(dim);
    return (m + m.adjoint()) / 2.0;
  }

  // Ginibre-induced full-rank random state.
  Matrix random_density(Index dim) {
    Matrix g = random_matrix(dim);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
  }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace qme::test

// Copyright 2026 The EnQSP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENQSP_TESTS_TEST_UTIL_H_
#define ENQSP_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "enqsp/numerics.h"

namespace enqsp::testing {

// Test-side randomness is deliberately independent of the library generator.
inline ComplexMatrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(n(rng), n(rng));
  }
  return m;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(rng, dim, dim));
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

// Hermitian with eigenvalues uniform in [-radius, radius].
inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  ComplexMatrix v = random_unitary(rng, dim);
  ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) d(i, i) = u(rng);
  ComplexMatrix h = v * d * v.adjoint();
  return 0.5 * (h + h.adjoint());
}

inline StateVector random_state(std::mt19937_64& rng, Eigen::Index dim) {
  return StateVector::normalized(gaussian_matrix(rng, dim, 1).col(0));
}

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> phi(d);
  for (double& p : phi) p = u(rng);
  return phi;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Largest singular value by power iteration on M^dagger M.
inline double power_norm(const ComplexMatrix& m, int iterations = 2000) {
  ComplexMatrix g = m.adjoint() * m;
  ComplexVector v = ComplexVector::Ones(g.cols());
  v.normalize();
  double lambda = 0.0;
  for (int i = 0; i < iterations; ++i) {
    ComplexVector w = g * v;
    double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

// Diag of distinct-by-construction reals as a complex matrix.
inline ComplexMatrix diag(std::initializer_list<double> values) {
  auto n = static_cast<Eigen::Index>(values.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

}  // namespace enqsp::testing

#endif  // ENQSP_TESTS_TEST_UTIL_H_

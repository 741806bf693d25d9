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

#include "enqsp/numerics.h"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace enqsp {

StateVector StateVector::normalized(ComplexVector amplitudes) {
  const auto n = static_cast<std::size_t>(amplitudes.size());
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("state dimension must be a positive power of two, got " +
                                std::to_string(n));
  }
  if (!amplitudes.allFinite()) throw std::invalid_argument("state has non-finite amplitudes");
  double norm = amplitudes.norm();
  if (norm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return StateVector(amplitudes / norm);
}

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
  std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::plus(std::size_t num_qubits) {
  std::size_t dim = std::size_t{1} << num_qubits;
  auto n = static_cast<Eigen::Index>(dim);
  return StateVector(ComplexVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(dim))));
}

std::size_t StateVector::num_qubits() const { return log2_exact(dimension()); }

Complex StateVector::inner(const StateVector& other) const {
  if (other.dimension() != dimension()) throw std::invalid_argument("state dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

double StateVector::fidelity(const StateVector& other) const { return std::norm(inner(other)); }

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("Hermiticity requires a square matrix");
  return spectral_norm(a - a.adjoint());
}

void require_hermitian(const ComplexMatrix& a, const std::string& what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(what + " must be a non-empty square matrix");
  }
  double defect = hermiticity_defect(a);
  if (!(defect <= kHermitianTolerance)) {
    std::ostringstream msg;
    msg << what << " is not Hermitian: Hermiticity defect ||A - A^dagger|| = " << defect << " exceeds "
        << kHermitianTolerance;
    throw std::invalid_argument(msg.str());
  }
}

HermitianEigen eigh(const ComplexMatrix& a) {
  require_hermitian(a, "matrix");
  ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matfunc_hermitian(const ComplexMatrix& a, const std::function<Complex(double)>& f) {
  HermitianEigen e = eigh(a);
  ComplexVector fl(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fl(i) = f(e.values(i));
  return e.vectors * fl.asDiagonal() * e.vectors.adjoint();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) throw std::invalid_argument("spectral norm of an empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("spectral norm of a non-finite matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double check_unitary(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("unitarity check requires a square matrix");
  return spectral_norm(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

std::size_t log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument(std::to_string(n) + " is not a power of two");
  }
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

namespace gates {

ComplexMatrix identity(std::size_t dim) {
  auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix::Identity(n, n);
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

ComplexMatrix hadamard_power(std::size_t k) {
  ComplexMatrix out = identity(1);
  for (std::size_t i = 0; i < k; ++i) out = kron(out, hadamard());
  return out;
}

ComplexMatrix z_rotation(double theta) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, theta);
  m(1, 1) = std::polar(1.0, -theta);
  return m;
}

}  // namespace gates

}  // namespace enqsp

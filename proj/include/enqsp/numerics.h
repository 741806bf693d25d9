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

#ifndef ENQSP_NUMERICS_H_
#define ENQSP_NUMERICS_H_

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace enqsp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Absolute tolerance on the spectral norm of A - A^dagger.
inline constexpr double kHermitianTolerance = 1e-10;

// Raised when an iterative routine exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Raised when the signal surviving the noise is too small to rescale.
class IllPosedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Normalized state on a power-of-two dimensional register. Basis index
// ordering is big-endian: the first qubit is the most significant bit.
class StateVector {
 public:
  // The single-amplitude state on zero qubits.
  StateVector() : amplitudes_(ComplexVector::Ones(1)) {}
  // Normalizes `amplitudes`. Rejects zero vectors and non power-of-two sizes.
  static StateVector normalized(ComplexVector amplitudes);
  static StateVector basis(std::size_t num_qubits, std::size_t index);
  // |+>^{num_qubits}.
  static StateVector plus(std::size_t num_qubits);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  std::size_t num_qubits() const;

  // <this|other>.
  Complex inner(const StateVector& other) const;
  // |<this|other>|^2.
  double fidelity(const StateVector& other) const;

 private:
  explicit StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  ComplexVector amplitudes_;
};

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

// Spectral norm of A - A^dagger.
double hermiticity_defect(const ComplexMatrix& a);

// Throws std::invalid_argument naming `what` if `a` is not Hermitian within
// kHermitianTolerance.
void require_hermitian(const ComplexMatrix& a, const std::string& what);

HermitianEigen eigh(const ComplexMatrix& a);

// V f(Lambda) V^dagger.
ComplexMatrix matfunc_hermitian(const ComplexMatrix& a, const std::function<Complex(double)>& f);

// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

// ||M^dagger M - I||.
double check_unitary(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Returns k with 2^k == n, or throws.
std::size_t log2_exact(std::size_t n);

// Smallest k with 2^k >= n.
std::size_t ceil_log2(std::size_t n);

namespace gates {
ComplexMatrix identity(std::size_t dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();
// H^{tensor k}.
ComplexMatrix hadamard_power(std::size_t k);
// exp(i theta Z).
ComplexMatrix z_rotation(double theta);
}  // namespace gates

}  // namespace enqsp

#endif  // ENQSP_NUMERICS_H_

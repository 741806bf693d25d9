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

#ifndef ENQSP_QSP_H_
#define ENQSP_QSP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "enqsp/block_encoding.h"
#include "enqsp/numerics.h"

namespace enqsp {

enum class Parity { kEven = 0, kOdd = 1 };

inline Parity parity_of(std::size_t degree) { return degree % 2 ? Parity::kOdd : Parity::kEven; }

// Phases of e^{i phi_d Z} R(x) ... e^{i phi_1 Z} R(x).
struct PhaseFactorSequence {
  std::vector<double> phases;

  std::size_t degree() const { return phases.size(); }
  Parity parity() const { return parity_of(phases.size()); }
};

// Number of points of the [-1, 1] Chebyshev grid used for sup-norm checks.
inline constexpr std::size_t kSupGridPoints = 2001;
// Targets handed to the phase solver keep sup |p| <= 1 - kSolverMargin (up to kSupSlack).
inline constexpr double kSolverMargin = 1e-6;
inline constexpr double kSupSlack = 1e-12;

// Points cos(k pi / (n - 1)), k = 0..n-1, mapped onto [lo, hi].
std::vector<double> chebyshev_grid(std::size_t n, double lo = -1.0, double hi = 1.0);

// Real polynomial sum_k c_k T_k(x) of definite parity with |p| <= 1 on the
// sup grid. The degree is coefficients.size() - 1 and must match the parity.
class TargetPolynomial {
 public:
  // The zero polynomial of degree 0.
  TargetPolynomial() : coefficients_{0.0}, parity_(Parity::kEven) {}
  TargetPolynomial(std::vector<double> coefficients, Parity parity);

  double operator()(double x) const;
  std::size_t degree() const { return coefficients_.size() - 1; }
  Parity parity() const { return parity_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  // max |p| over the sup grid.
  double sup_norm() const { return sup_norm_; }

 private:
  std::vector<double> coefficients_;
  Parity parity_;
  double sup_norm_ = 0.0;
};

// Clenshaw evaluation of sum_k c_k T_k(x).
double chebyshev_eval(std::span<const double> coefficients, double x);

// [[x, sqrt(1-x^2)], [sqrt(1-x^2), -x]].
ComplexMatrix signal_operator(double x);

ComplexMatrix qsp_unitary_scalar(const PhaseFactorSequence& phi, double x);

// Entry [0, 0] of qsp_unitary_scalar.
Complex qsp_polynomial(std::span<const double> phases, double x);

// Qubitized circuit on m + 1 ancillas encoding P(A). Odd steps apply U_A,
// even steps U_A^dagger, each followed by e^{i phi_j (2 Pi - I)} with Pi the
// projector onto |0^{m+1}>. The extra ancilla is the most significant qubit.
BlockEncoding qubitize(const BlockEncoding& u_a, const PhaseFactorSequence& phi);

// Encodes (P(A) + P(A)^dagger) / 2.
BlockEncoding real_part_encoding(const PhaseFactorSequence& phi, const BlockEncoding& u_a);

// Evaluates the top-left block of qubitize(u_a, phi) for many phase
// sequences without building the full circuit unitary: only the 2^n columns
// that start in the ancilla-zero subspace are propagated.
class QspCircuit {
 public:
  explicit QspCircuit(const BlockEncoding& u_a);

  struct Evaluation {
    ComplexMatrix block;
    std::size_t queries = 0;  // applications of U_A or U_A^dagger
  };
  Evaluation evaluate(std::span<const double> phases) const;

  // Encoded matrix A.
  const ComplexMatrix& signal_matrix() const { return a_; }
  std::size_t system_qubits() const { return system_qubits_; }

 private:
  ComplexMatrix u_;
  ComplexMatrix u_dag_;
  ComplexMatrix a_;
  std::size_t system_qubits_;
};

struct PhaseSolverOptions {
  double tolerance = 1e-11;
  std::size_t max_iterations = 500;
  std::size_t max_restarts = 32;
  std::uint64_t seed = 0x51A4F0u;
};

// Levenberg-Marquardt fit of Re P_Phi to p at the 4d nodes
// cos((2k-1) pi / (8d)). Starts from the sequence with Re P = 0, then
// restarts from random phases. Throws ConvergenceError with the best residual.
PhaseFactorSequence solve_phase_factors(const TargetPolynomial& p,
                                        const PhaseSolverOptions& options = {});

// max_k |Re P_Phi(x_k) - p(x_k)| over the solver nodes.
double phase_residual(const PhaseFactorSequence& phi, const TargetPolynomial& p);

}  // namespace enqsp

#endif  // ENQSP_QSP_H_

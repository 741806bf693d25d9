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

#ifndef ENQSP_BLOCK_ENCODING_H_
#define ENQSP_BLOCK_ENCODING_H_

#include <cstddef>
#include <span>

#include "enqsp/numerics.h"

namespace enqsp {

// A unitary on ancilla_qubits + system_qubits whose top-left system-sized
// block, times `scale`, is the encoded matrix. Ancillas are the most
// significant qubits: basis index = ancilla * 2^n + system.
struct BlockEncoding {
  ComplexMatrix unitary;
  std::size_t ancilla_qubits = 0;
  std::size_t system_qubits = 0;
  double scale = 1.0;
  double precision = 0.0;

  std::size_t system_dim() const { return std::size_t{1} << system_qubits; }
  std::size_t dim() const { return std::size_t{1} << (system_qubits + ancilla_qubits); }
};

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kBlockNormSlack = 1e-9;

// Checks dimensions, unitarity and the block norm bound. Throws
// std::invalid_argument on violation.
void validate(const BlockEncoding& be);

// Validating constructor.
BlockEncoding make_block_encoding(ComplexMatrix unitary, std::size_t ancilla_qubits,
                                  std::size_t system_qubits, double scale = 1.0,
                                  double precision = 0.0);

// Unscaled top-left block.
ComplexMatrix top_left_block(const BlockEncoding& be);

// scale * top-left block.
ComplexMatrix encoded_block(const BlockEncoding& be);

// One-ancilla encoding [[A, S], [S, -A]] with S = sqrt(I - A^2).
BlockEncoding dilate_hermitian(const ComplexMatrix& a);

// Encodes the adjoint of the encoded matrix.
BlockEncoding adjoint(const BlockEncoding& be);

// Pads `be` with extra ancillas above the existing ones (I tensor U).
BlockEncoding extend_ancillas(const BlockEncoding& be, std::size_t ancilla_qubits);

// Unitary whose first column is `amplitudes` (unit norm). A uniform real
// positive vector of power-of-two length yields exactly H^{tensor k}.
ComplexMatrix prepare_unitary(const ComplexVector& amplitudes);

// Encodes (1/beta) sum_j w_j block_j with beta = sum_j |w_j|. The select
// register is the most significant register; the list is padded with zero
// weight identity terms to a power-of-two length.
BlockEncoding lcu_combine(std::span<const BlockEncoding> encodings,
                          std::span<const Complex> weights);

// Encodes block(a) * block(b). Ancilla order is [b, a, system].
BlockEncoding product_encode(const BlockEncoding& a, const BlockEncoding& b);

}  // namespace enqsp

#endif  // ENQSP_BLOCK_ENCODING_H_

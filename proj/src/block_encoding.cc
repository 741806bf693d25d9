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

#include "enqsp/block_encoding.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace enqsp {

void validate(const BlockEncoding& be) {
  auto expected = static_cast<Eigen::Index>(be.dim());
  if (be.unitary.rows() != expected || be.unitary.cols() != expected) {
    std::ostringstream msg;
    msg << "block-encoding unitary is " << be.unitary.rows() << "x" << be.unitary.cols()
        << ", expected " << expected << "x" << expected;
    throw std::invalid_argument(msg.str());
  }
  if (!(be.scale > 0.0) || !std::isfinite(be.scale)) {
    throw std::invalid_argument("block-encoding scale must be positive and finite");
  }
  if (!(be.precision >= 0.0)) throw std::invalid_argument("block-encoding precision must be >= 0");
  double defect = check_unitary(be.unitary);
  if (!(defect <= kUnitaryTolerance)) {
    std::ostringstream msg;
    msg << "block-encoding matrix is not unitary: defect " << defect;
    throw std::invalid_argument(msg.str());
  }
}

BlockEncoding make_block_encoding(ComplexMatrix unitary, std::size_t ancilla_qubits,
                                  std::size_t system_qubits, double scale, double precision) {
  BlockEncoding be{std::move(unitary), ancilla_qubits, system_qubits, scale, precision};
  validate(be);
  return be;
}

ComplexMatrix top_left_block(const BlockEncoding& be) {
  auto n = static_cast<Eigen::Index>(be.system_dim());
  return be.unitary.topLeftCorner(n, n);
}

ComplexMatrix encoded_block(const BlockEncoding& be) { return be.scale * top_left_block(be); }

BlockEncoding dilate_hermitian(const ComplexMatrix& a) {
  require_hermitian(a, "dilation input");
  std::size_t n = log2_exact(static_cast<std::size_t>(a.rows()));
  HermitianEigen e = eigh(a);
  double norm = e.values.cwiseAbs().maxCoeff();
  if (norm > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "dilation input has norm " << norm << " > 1";
    throw std::invalid_argument(msg.str());
  }
  ComplexMatrix sym = 0.5 * (a + a.adjoint());
  RealVector s(e.values.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    double v = 1.0 - e.values(i) * e.values(i);
    s(i) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  ComplexMatrix root = e.vectors * s.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  auto dim = a.rows();
  ComplexMatrix u(2 * dim, 2 * dim);
  u.topLeftCorner(dim, dim) = sym;
  u.topRightCorner(dim, dim) = root;
  u.bottomLeftCorner(dim, dim) = root;
  u.bottomRightCorner(dim, dim) = -sym;
  return make_block_encoding(std::move(u), 1, n);
}

BlockEncoding adjoint(const BlockEncoding& be) {
  BlockEncoding out = be;
  out.unitary = be.unitary.adjoint();
  return out;
}

BlockEncoding extend_ancillas(const BlockEncoding& be, std::size_t ancilla_qubits) {
  if (ancilla_qubits < be.ancilla_qubits) {
    throw std::invalid_argument("cannot shrink the ancilla register");
  }
  if (ancilla_qubits == be.ancilla_qubits) return be;
  BlockEncoding out = be;
  out.ancilla_qubits = ancilla_qubits;
  out.unitary = kron(gates::identity(std::size_t{1} << (ancilla_qubits - be.ancilla_qubits)),
                     be.unitary);
  return out;
}

ComplexMatrix prepare_unitary(const ComplexVector& amplitudes) {
  auto k = amplitudes.size();
  if (k == 0) throw std::invalid_argument("empty prepare vector");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("prepare vector must have unit norm");
  }
  std::size_t uk = static_cast<std::size_t>(k);
  if ((uk & (uk - 1)) == 0) {
    double target = 1.0 / std::sqrt(static_cast<double>(k));
    bool uniform = true;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (std::abs(amplitudes(i) - target) > 1e-15) uniform = false;
    }
    if (uniform) return gates::hadamard_power(log2_exact(uk));
  }
  ComplexMatrix column = amplitudes;
  Eigen::HouseholderQR<ComplexMatrix> qr(column);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(k, k);
  // q.col(0) * r00 == amplitudes with |r00| == 1.
  Complex r00 = qr.matrixQR()(0, 0);
  q.col(0) *= r00 / std::abs(r00);
  return q;
}

BlockEncoding lcu_combine(std::span<const BlockEncoding> encodings,
                          std::span<const Complex> weights) {
  if (encodings.empty()) throw std::invalid_argument("lcu_combine needs at least one encoding");
  if (encodings.size() != weights.size()) {
    throw std::invalid_argument("lcu_combine needs one weight per encoding");
  }
  std::size_t n = encodings[0].system_qubits;
  std::size_t m = 0;
  for (const auto& be : encodings) {
    if (be.system_qubits != n) throw std::invalid_argument("lcu_combine system size mismatch");
    m = std::max(m, be.ancilla_qubits);
  }
  double beta = 0.0;       // sum |w_j|
  double beta_eff = 0.0;   // sum |w_j| alpha_j
  double precision = 0.0;  // sum |w_j| alpha_j eps_j, before normalization
  for (std::size_t j = 0; j < weights.size(); ++j) {
    double w = std::abs(weights[j]);
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("lcu weights must be nonzero");
    beta += w;
    beta_eff += w * encodings[j].scale;
    precision += w * encodings[j].precision;
  }
  std::size_t k = encodings.size();
  std::size_t b = ceil_log2(k);
  std::size_t padded = std::size_t{1} << b;
  ComplexVector right = ComplexVector::Zero(static_cast<Eigen::Index>(padded));
  ComplexVector left = ComplexVector::Zero(static_cast<Eigen::Index>(padded));
  for (std::size_t j = 0; j < k; ++j) {
    double mag = std::sqrt(std::abs(weights[j]) * encodings[j].scale / beta_eff);
    double theta = std::arg(weights[j]);
    right(static_cast<Eigen::Index>(j)) = std::polar(mag, 0.5 * theta);
    left(static_cast<Eigen::Index>(j)) = std::polar(mag, -0.5 * theta);
  }
  // Terms equal in weight and phase share one prepare, which is then H^{tensor b}.
  bool all_real = true;
  for (std::size_t j = 0; j < k; ++j) {
    if (std::arg(weights[j]) != 0.0) all_real = false;
  }
  ComplexMatrix prep_right = prepare_unitary(right);
  ComplexMatrix prep_left = all_real ? prep_right : prepare_unitary(left);

  std::size_t inner = std::size_t{1} << (m + n);
  auto id = static_cast<Eigen::Index>(inner);
  auto total = static_cast<Eigen::Index>(padded * inner);
  ComplexMatrix select = ComplexMatrix::Zero(total, total);
  for (std::size_t j = 0; j < padded; ++j) {
    auto off = static_cast<Eigen::Index>(j) * id;
    if (j < k) {
      select.block(off, off, id, id) = extend_ancillas(encodings[j], m).unitary;
    } else {
      select.block(off, off, id, id).setIdentity();
    }
  }
  ComplexMatrix eye = gates::identity(inner);
  ComplexMatrix u = kron(prep_left.adjoint(), eye) * select * kron(prep_right, eye);
  return make_block_encoding(std::move(u), m + b, n, beta_eff / beta, precision / beta);
}

BlockEncoding product_encode(const BlockEncoding& a, const BlockEncoding& b) {
  if (a.system_qubits != b.system_qubits) {
    throw std::invalid_argument("product_encode system size mismatch");
  }
  std::size_t n = a.system_qubits;
  auto sys = static_cast<Eigen::Index>(std::size_t{1} << n);
  auto da = static_cast<Eigen::Index>(std::size_t{1} << a.ancilla_qubits);
  auto db = static_cast<Eigen::Index>(std::size_t{1} << b.ancilla_qubits);
  auto total = da * db * sys;
  // U_b acting on [anc_b, sys], identity on anc_a.
  ComplexMatrix ub = ComplexMatrix::Zero(total, total);
  for (Eigen::Index rb = 0; rb < db; ++rb) {
    for (Eigen::Index cb = 0; cb < db; ++cb) {
      auto tile = b.unitary.block(rb * sys, cb * sys, sys, sys);
      for (Eigen::Index ia = 0; ia < da; ++ia) {
        ub.block((rb * da + ia) * sys, (cb * da + ia) * sys, sys, sys) = tile;
      }
    }
  }
  ComplexMatrix ua = kron(gates::identity(static_cast<std::size_t>(db)), a.unitary);
  double scale = a.scale * b.scale;
  double precision = a.scale * b.precision + b.scale * a.precision;
  return make_block_encoding(ua * ub, a.ancilla_qubits + b.ancilla_qubits, n, scale, precision);
}

}  // namespace enqsp

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

#include "enqsp/ensemble.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace enqsp {

ComplexMatrix sample_noisy_block(const BlockEncoding& u_a, const PhaseFactorSequence& phi,
                                 const NoiseModel& model, const StreamKey& key) {
  return encoded_block(qubitize(u_a, perturb_phases(phi, model, key)));
}

QspCircuit::Evaluation sample_noisy_block(const QspCircuit& circuit,
                                          const PhaseFactorSequence& phi,
                                          const NoiseModel& model, const StreamKey& key) {
  return circuit.evaluate(perturb_phases(phi, model, key).phases);
}

void require_signal_to_noise(double c, std::size_t d, double power) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("attenuation factor must lie in (0, 1]");
  double signal = std::pow(c, power * static_cast<double>(d));
  if (signal < kMinSignal) {
    std::ostringstream msg;
    msg << "ill-posed: surviving signal c^" << (power == 1.0 ? "" : "(" + std::to_string(power) + ")")
        << "d = " << signal << " < " << kMinSignal << " (c = " << c << ", d = " << d << ")";
    throw IllPosedError(msg.str());
  }
}

EnsembleResult ensemble_average_block(const BlockEncoding& u_a, const PhaseFactorSequence& phi,
                                      const NoiseModel& model, std::size_t m,
                                      const StreamKey& master, const Execution& exec) {
  if (m == 0) throw std::invalid_argument("ensemble size must be at least 1");
  double c = attenuation_factor(model);
  std::size_t d = phi.degree();
  require_signal_to_noise(c, d);
  QspCircuit circuit(u_a);
  auto n = circuit.signal_matrix().rows();
  std::vector<std::size_t> queries(2 * m, 0);
  ComplexMatrix zero = ComplexMatrix::Zero(n, n);
  EnsembleResult out;
  out.averaged_block = chunked_mean(2 * m, exec, zero, [&](std::size_t i) {
    QspCircuit::Evaluation e = sample_noisy_block(circuit, phi, model, sample_key(master, i));
    queries[i] = e.queries;
    return i % 2 == 0 ? ComplexMatrix(e.block) : ComplexMatrix(e.block.adjoint());
  });
  for (std::size_t q : queries) {
    if (q != d) throw std::logic_error("query count differs from the polynomial degree");
  }
  out.sample_count = m;
  out.rescale = std::pow(c, static_cast<double>(d));
  out.degree = d;
  out.queries_per_sample = d;
  out.reference = matfunc_hermitian(circuit.signal_matrix(), [&](double x) -> Complex {
    return qsp_polynomial(phi.phases, std::clamp(x, -1.0, 1.0)).real();
  });
  out.error = spectral_norm(out.averaged_block / out.rescale - out.reference);
  return out;
}

std::vector<BlockEncoding> noisy_sample_encodings(const BlockEncoding& u_a,
                                                  const PhaseFactorSequence& phi,
                                                  const NoiseModel& model, std::size_t m,
                                                  const StreamKey& master) {
  std::vector<BlockEncoding> out;
  out.reserve(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i) {
    BlockEncoding q = qubitize(u_a, perturb_phases(phi, model, sample_key(master, i)));
    out.push_back(i % 2 == 0 ? std::move(q) : adjoint(q));
  }
  return out;
}

BlockEncoding explicit_lcu_average(std::span<const BlockEncoding> samples) {
  std::size_t count = samples.size();
  if (count < 2 || count % 2 != 0) throw std::invalid_argument("need 2M samples");
  std::size_t m = count / 2;
  if (m > 8) throw std::invalid_argument("explicit LCU witness is limited to M <= 8");
  std::size_t k = log2_exact(count);
  std::size_t n = samples[0].system_qubits;
  std::size_t anc = samples[0].ancilla_qubits;
  for (const auto& s : samples) {
    if (s.system_qubits != n || s.ancilla_qubits != anc || s.scale != 1.0) {
      throw std::invalid_argument("samples must share shape and have scale 1");
    }
  }
  auto inner = static_cast<Eigen::Index>(samples[0].dim());
  auto total = static_cast<Eigen::Index>(count) * inner;
  ComplexMatrix select = ComplexMatrix::Zero(total, total);
  for (std::size_t j = 0; j < count; ++j) {
    auto off = static_cast<Eigen::Index>(j) * inner;
    select.block(off, off, inner, inner) = samples[j].unitary;
  }
  ComplexMatrix h = kron(gates::hadamard_power(k), gates::identity(static_cast<std::size_t>(inner)));
  return make_block_encoding(h * select * h, anc + k, n);
}

std::size_t ensemble_size_for(double eps_imp, double delta, double c, std::size_t d) {
  if (!(eps_imp > 0.0 && eps_imp < 1.0)) throw std::invalid_argument("eps_imp must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  require_signal_to_noise(c, d);
  double eps = eps_imp * std::pow(c, static_cast<double>(d));
  double m = std::ceil(std::log(2.0 / delta) / (eps * eps));
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

}  // namespace enqsp

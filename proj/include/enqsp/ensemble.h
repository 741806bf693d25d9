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

#ifndef ENQSP_ENSEMBLE_H_
#define ENQSP_ENSEMBLE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "enqsp/block_encoding.h"
#include "enqsp/noise.h"
#include "enqsp/parallel.h"
#include "enqsp/philox.h"
#include "enqsp/qsp.h"

namespace enqsp {

struct EnsembleResult {
  ComplexMatrix averaged_block;  // (1/2M) sum (P_{2m-1} + P_{2m}^dagger)
  std::size_t sample_count = 0;  // M
  double rescale = 1.0;          // c^d
  ComplexMatrix reference;       // p(A)
  double error = 0.0;            // ||averaged_block / rescale - reference||
  std::size_t degree = 0;
  std::size_t queries_per_sample = 0;
};

// Stream used for noisy sample `index` (0-based) under `master`. Positions
// are slots [0, d).
inline StreamKey sample_key(const StreamKey& master, std::uint64_t index) {
  return master.with_sample(master.sample + index).with_slot(0);
}

// One realization of P~(A): the block of qubitize(U_A, perturbed phases).
ComplexMatrix sample_noisy_block(const BlockEncoding& u_a, const PhaseFactorSequence& phi,
                                 const NoiseModel& model, const StreamKey& key);

// Same draw, reusing a prepared circuit.
QspCircuit::Evaluation sample_noisy_block(const QspCircuit& circuit,
                                          const PhaseFactorSequence& phi,
                                          const NoiseModel& model, const StreamKey& key);

// Arithmetic average over 2M noisy samples; sample 2m-2 enters as is and
// sample 2m-1 as its adjoint (0-based). The reference is Re P_Phi(A).
EnsembleResult ensemble_average_block(const BlockEncoding& u_a, const PhaseFactorSequence& phi,
                                      const NoiseModel& model, std::size_t m,
                                      const StreamKey& master, const Execution& exec = {});

// Block-encodings U~_m (odd samples) and V~_m (adjoints of even samples) as
// full qubitized circuits, ordered U~_1, V~_1, U~_2, ...
std::vector<BlockEncoding> noisy_sample_encodings(const BlockEncoding& u_a,
                                                  const PhaseFactorSequence& phi,
                                                  const NoiseModel& model, std::size_t m,
                                                  const StreamKey& master);

// H^{tensor k} select H^{tensor k} over 2M = 2^k sample encodings.
// Limited to M <= 8.
BlockEncoding explicit_lcu_average(std::span<const BlockEncoding> samples);

// ceil(ln(2/delta) / (eps_imp c^d)^2).
std::size_t ensemble_size_for(double eps_imp, double delta, double c, std::size_t d);

// Throws IllPosedError if c^d is below the usable signal floor.
void require_signal_to_noise(double c, std::size_t d, double power = 1.0);

inline constexpr double kMinSignal = 1e-6;

}  // namespace enqsp

#endif  // ENQSP_ENSEMBLE_H_

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

#ifndef ENQSP_ESTIMATION_H_
#define ENQSP_ESTIMATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>

#include "enqsp/block_encoding.h"
#include "enqsp/noise.h"
#include "enqsp/numerics.h"
#include "enqsp/parallel.h"
#include "enqsp/philox.h"
#include "enqsp/qsp.h"

namespace enqsp {

// Outcome probabilities of the generalized Hadamard test: +1 when both the
// test qubit and the block ancillas read 0, -1 when only the ancillas read 0,
// and 0 otherwise.
struct OutcomeDistribution {
  double plus = 0.0;
  double minus = 0.0;
  double zero = 0.0;

  double mean() const { return plus - minus; }
};

// Closed form from the block O~: p_+ = |(I + O~) psi|^2 / 4,
// p_- = |(I - O~) psi|^2 / 4.
OutcomeDistribution hadamard_distribution(const ComplexMatrix& o_tilde, const StateVector& psi);

// Statevector simulation of the full circuit (test qubit, controlled U_O,
// measurement of test qubit and ancillas).
OutcomeDistribution hadamard_distribution(const BlockEncoding& u_o, const StateVector& psi);

// Maps u in [0, 1) to an outcome in {+1, -1, 0}.
int draw_outcome(const OutcomeDistribution& dist, double u);

struct ObservableEstimate {
  double value = 0.0;           // raw mean times rescale
  double raw_value = 0.0;       // mean outcome, in [-1, 1]
  std::size_t shots = 0;
  double rescale = 1.0;
  double reference = 0.0;       // oracle value when known, else NaN
  double standard_error = 0.0;  // of `value`
};

// Random non-unitary matrix source: returns O~ for a given shot. Must be a
// pure function of the shot index.
using RandomMatrixSource = std::function<ComplexMatrix(std::uint64_t shot)>;

// Outcome stream for shot `s`.
inline StreamKey outcome_key(const StreamKey& master, std::uint64_t s) {
  return master.with_sample(master.sample + s).with_slot(kOutcomeSlot);
}

// Draws O~ = sampler(s) and one outcome per shot; the estimate is the mean
// outcome. `reference` is left as NaN.
ObservableEstimate run_hadamard_test(const RandomMatrixSource& sampler, const StateVector& psi,
                                     std::size_t shots, const StreamKey& master,
                                     const Execution& exec = {});

// Per shot O~ = (P1 + P2^dagger) O (P3 + P4^dagger) / 4 from four fresh noisy
// samples, estimate divided by c^{2d}. Reference is <psi|p(A) O p(A)|psi>.
ObservableEstimate estimate_qsp_observable(const BlockEncoding& u_a,
                                           const PhaseFactorSequence& phi,
                                           const BlockEncoding& u_o, const StateVector& psi,
                                           const NoiseModel& model, std::size_t shots,
                                           const StreamKey& master, const Execution& exec = {});

// ceil(2 ln(2/delta) / (eps c^{d power / 2})^2), power in {0, 2, 4}.
std::size_t shots_for(double eps, double delta, double c, std::size_t d, int power);

// Hermitian O with ||O|| <= 1 taken from a block-encoding.
ComplexMatrix observable_matrix(const BlockEncoding& u_o);

}  // namespace enqsp

#endif  // ENQSP_ESTIMATION_H_

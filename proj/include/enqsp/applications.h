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

#ifndef ENQSP_APPLICATIONS_H_
#define ENQSP_APPLICATIONS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "enqsp/block_encoding.h"
#include "enqsp/ensemble.h"
#include "enqsp/estimation.h"
#include "enqsp/noise.h"
#include "enqsp/numerics.h"
#include "enqsp/parallel.h"
#include "enqsp/philox.h"
#include "enqsp/polyapprox.h"
#include "enqsp/qsp.h"

namespace enqsp {

// Sample-index offsets separating the independent random draws of one run.
inline constexpr std::uint64_t kSecondComponentOffset = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kPostSelectOffset = std::uint64_t{1} << 41;

struct PostSelectStats {
  std::size_t attempts = 0;
  std::size_t successes = 0;
  double empirical_rate = 0.0;
  double predicted_bound = 0.0;
  double success_probability = 0.0;  // exact, from the simulated state
  std::size_t budget = 0;            // K
  std::size_t first_success = 0;     // 1-based attempt index, 0 if none
  // Attempts needed with amplitude amplification, ceil(sqrt(K)).
  std::size_t amplified_budget = 0;
};

class PostSelectionFailure : public std::runtime_error {
 public:
  PostSelectionFailure(const std::string& what, PostSelectStats stats)
      : std::runtime_error(what), stats_(stats) {}
  const PostSelectStats& stats() const { return stats_; }

 private:
  PostSelectStats stats_;
};

// Draws `budget` Bernoulli(probability) attempts from keyed streams and
// fills the statistics. Throws PostSelectionFailure if none succeeds.
PostSelectStats post_select(double probability, double predicted_bound, std::size_t budget,
                            const StreamKey& key);

struct PreparedState {
  StateVector state;
  PostSelectStats stats;
  EnsembleResult ensemble;
};

// ---------------------------------------------------------------------------
// Hamiltonian simulation.

struct HamSimProblem {
  ComplexMatrix hamiltonian;
  double time = 0.0;
  StateVector psi0;
  double eps = 0.0;
  double delta = 0.0;
  NoiseModel noise;
  double hamiltonian_norm = 0.0;

  static HamSimProblem make(ComplexMatrix hamiltonian, double time, StateVector psi0, double eps,
                            double delta, NoiseModel noise);
};

// One polynomial component of an application block.
struct Component {
  TargetPolynomial polynomial;
  PhaseFactorSequence phases;  // empty for degree 0 or the zero polynomial
  bool is_zero = false;

  // Query depth; zero for constants and the zero polynomial.
  std::size_t degree() const { return is_zero ? 0 : polynomial.degree(); }
};

struct HamSimPlan {
  HamSimProblem problem;
  double beta = 0.0;  // ||H|| T
  double eps_alg = 0.0;
  double eps_imp = 0.0;
  double attenuation = 1.0;
  BlockEncoding signal;  // dilation of H / ||H||
  Component cos_part;
  Component sin_part;
  std::optional<TrigApproximation> approximation;
  // LCU weights c^{-d_cos} and -i c^{-d_sin}.
  Complex cos_weight = 1.0;
  Complex sin_weight = Complex(0, -1);

  std::size_t degree() const { return std::max(cos_part.degree(), sin_part.degree()); }
  // beta_w = |w_cos| + |w_sin|; the block approximates exp(-iHT) / (2 beta_w).
  double block_factor() const;
  ComplexMatrix exact_evolution() const;
  // ensemble_size_for(eps_imp, delta, c, d).
  std::size_t default_ensemble_size() const;
  // Shots putting the raw estimate within eps_imp / (2 beta_w)^2.
  std::size_t default_shots() const;
};

HamSimPlan plan_hsim(const HamSimProblem& problem);

// Rescaled block approximates exp(-iHT); `rescale` holds the block factor.
EnsembleResult hsim_encode(const HamSimPlan& plan, std::size_t m, const StreamKey& key,
                           const Execution& exec = {});
PreparedState hsim_prepare_state(const HamSimPlan& plan, std::size_t m, const StreamKey& key,
                                 const Execution& exec = {});
// Two-sided estimator with per-shot O~ = E1^dagger O E2.
ObservableEstimate hsim_observable(const HamSimPlan& plan, const BlockEncoding& u_o,
                                   std::size_t shots, const StreamKey& key,
                                   const Execution& exec = {});
// 4 (<p_cos O p_cos> + <p_sin O p_sin>), exact only when [H, O] = 0.
ObservableEstimate hsim_observable_split(const HamSimPlan& plan, const BlockEncoding& u_o,
                                         std::size_t shots, const StreamKey& key,
                                         const Execution& exec = {});

// ---------------------------------------------------------------------------
// Quantum linear systems.

struct QLSPProblem {
  ComplexMatrix a;  // normalized to ||A|| = 1
  StateVector b;
  double kappa = 1.0;
  double eps = 0.0;
  double delta = 0.0;
  NoiseModel noise;
  double input_norm = 1.0;  // ||A|| before normalization

  // kappa <= 0 selects the exact condition number.
  static QLSPProblem make(ComplexMatrix a, StateVector b, double kappa, double eps, double delta,
                          NoiseModel noise);
  // A^{-1} b for the normalized A.
  ComplexVector solution() const;
};

struct QLSPPlan {
  QLSPProblem problem;
  double eps_poly = 0.0;  // 3 eps / (8 kappa)
  double eps_imp = 0.0;
  double attenuation = 1.0;
  BlockEncoding signal;
  CertifiedApproximant approximation;
  PhaseFactorSequence phases;

  std::size_t degree() const { return phases.degree(); }
  // c^{2d} (3 / (8 kappa))^2.
  double success_bound() const;
  // ensemble_size_for(eps_imp, delta, c, d).
  std::size_t default_ensemble_size() const;
  // ensemble_size_for(eps_poly, delta, c, d).
  std::size_t theorem_ensemble_size() const;
  // shots_for(eps (3 / (4 kappa))^2, delta, c, d, 4).
  std::size_t default_shots() const;
};

QLSPPlan plan_qlsp(const QLSPProblem& problem);
PreparedState qlsp_prepare_state(const QLSPPlan& plan, std::size_t m, const StreamKey& key,
                                 const Execution& exec = {});
// Estimates x^dagger O x with x = A^{-1} b.
ObservableEstimate qlsp_observable(const QLSPPlan& plan, const BlockEncoding& u_o,
                                   std::size_t shots, const StreamKey& key,
                                   const Execution& exec = {});

// ---------------------------------------------------------------------------
// Ground-state preparation.

// Block-encodes cos(H) on one ancilla using e^{+iH} and e^{-iH}.
BlockEncoding qetu_cosine_encoding(const ComplexMatrix& h);

struct GSPProblem {
  ComplexMatrix h;  // after the affine map, spectrum inside (eta, 1 - eta)
  StateVector phi0;
  double mu = 0.0;
  double gap = 0.0;  // Delta
  double eta = 0.0;
  double gamma = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  NoiseModel noise;
  // h = scale * h_input + shift * I.
  double scale = 1.0;
  double shift = 0.0;
  double ground_energy = 0.0;
  StateVector ground_state;

  // Maps the spectrum to [2 eta, 1 - 2 eta] unless it already lies in
  // (eta, 1 - eta). Band centre and width come from the two lowest levels.
  static GSPProblem make(ComplexMatrix h_input, StateVector phi0, double eta, double eps,
                         double delta, NoiseModel noise);
};

struct GSPPlan {
  GSPProblem problem;
  double eps_alg = 0.0;
  double eps_imp = 0.0;
  double attenuation = 1.0;
  BlockEncoding signal;  // QETU cosine encoding
  CertifiedApproximant approximation;
  PhaseFactorSequence phases;

  std::size_t degree() const { return phases.degree(); }
  // c^{2d} gamma^2 / 2.
  double success_bound() const;
  std::size_t default_ensemble_size() const;
  // shots_for(eps_imp gamma^2, delta, c, d, 4).
  std::size_t default_shots() const;
};

GSPPlan plan_gsp(const GSPProblem& problem);
PreparedState gsp_prepare_state(const GSPPlan& plan, std::size_t m, const StreamKey& key,
                                const Execution& exec = {});
// Estimates <psi0|O|psi0> for the ground state psi0.
ObservableEstimate gsp_observable(const GSPPlan& plan, const BlockEncoding& u_o, std::size_t shots,
                                  const StreamKey& key, const Execution& exec = {});

}  // namespace enqsp

#endif  // ENQSP_APPLICATIONS_H_

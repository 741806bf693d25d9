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

#ifndef ENQSP_NOISE_H_
#define ENQSP_NOISE_H_

#include <string>
#include <string_view>

#include "enqsp/philox.h"
#include "enqsp/qsp.h"

namespace enqsp {

enum class NoiseKind { kNone, kGaussian, kUniform, kTwoPoint };

// Even, zero-mean additive phase error applied i.i.d. to every QSP phase.
// `parameter` is the variance for gaussian, the half-width for uniform and
// the magnitude for two_point; it is ignored for none.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double parameter = 0.0;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double variance) { return checked(NoiseKind::kGaussian, variance); }
  static NoiseModel uniform(double half_width) { return checked(NoiseKind::kUniform, half_width); }
  static NoiseModel two_point(double magnitude) { return checked(NoiseKind::kTwoPoint, magnitude); }
  static NoiseModel checked(NoiseKind kind, double parameter);

  // Per-position variance nu.
  double variance() const;
};

std::string_view noise_kind_name(NoiseKind kind);
// Accepts "none", "gaussian", "uniform", "two_point".
NoiseKind parse_noise_kind(std::string_view name);

double sample_error(const NoiseModel& model, CounterStream& rng);

// c = E[cos e].
double attenuation_factor(const NoiseModel& model);

// phi_j + e_j, with e_j drawn from the stream key.with_slot(key.slot + j).
PhaseFactorSequence perturb_phases(const PhaseFactorSequence& phi, const NoiseModel& model,
                                   const StreamKey& key);

}  // namespace enqsp

#endif  // ENQSP_NOISE_H_

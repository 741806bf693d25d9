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

#include "enqsp/noise.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace enqsp {

NoiseModel NoiseModel::checked(NoiseKind kind, double parameter) {
  if (!std::isfinite(parameter) || parameter < 0.0) {
    throw std::invalid_argument("noise parameter must be finite and non-negative");
  }
  // Keep c = E[cos e] strictly positive.
  if (kind == NoiseKind::kUniform && parameter >= std::numbers::pi) {
    throw std::invalid_argument("uniform half-width must be below pi");
  }
  if (kind == NoiseKind::kTwoPoint && parameter >= std::numbers::pi / 2) {
    throw std::invalid_argument("two_point magnitude must be below pi/2");
  }
  return {kind, kind == NoiseKind::kNone ? 0.0 : parameter};
}

double NoiseModel::variance() const {
  switch (kind) {
    case NoiseKind::kNone:
      return 0.0;
    case NoiseKind::kGaussian:
      return parameter;
    case NoiseKind::kUniform:
      return parameter * parameter / 3.0;
    case NoiseKind::kTwoPoint:
      return parameter * parameter;
  }
  return 0.0;
}

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone:
      return "none";
    case NoiseKind::kGaussian:
      return "gaussian";
    case NoiseKind::kUniform:
      return "uniform";
    case NoiseKind::kTwoPoint:
      return "two_point";
  }
  return "none";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "none") return NoiseKind::kNone;
  if (name == "gaussian") return NoiseKind::kGaussian;
  if (name == "uniform") return NoiseKind::kUniform;
  if (name == "two_point") return NoiseKind::kTwoPoint;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) +
                              "' (expected none, gaussian, uniform or two_point)");
}

double sample_error(const NoiseModel& model, CounterStream& rng) {
  switch (model.kind) {
    case NoiseKind::kNone:
      return 0.0;
    case NoiseKind::kGaussian:
      return std::sqrt(model.parameter) * rng.normal();
    case NoiseKind::kUniform:
      return model.parameter * (2.0 * rng.uniform() - 1.0);
    case NoiseKind::kTwoPoint:
      return (rng.next_u32() & 1u) ? model.parameter : -model.parameter;
  }
  return 0.0;
}

double attenuation_factor(const NoiseModel& model) {
  double a = model.parameter;
  switch (model.kind) {
    case NoiseKind::kNone:
      return 1.0;
    case NoiseKind::kGaussian:
      return std::exp(-0.5 * a);
    case NoiseKind::kUniform:
      // Series near zero avoids 0/0.
      if (a < 1e-4) return 1.0 - a * a / 6.0;
      return std::sin(a) / a;
    case NoiseKind::kTwoPoint:
      return std::cos(a);
  }
  return 1.0;
}

PhaseFactorSequence perturb_phases(const PhaseFactorSequence& phi, const NoiseModel& model,
                                   const StreamKey& key) {
  PhaseFactorSequence out = phi;
  if (model.kind == NoiseKind::kNone) return out;
  for (std::size_t j = 0; j < out.phases.size(); ++j) {
    CounterStream rng(key.with_slot(key.slot + static_cast<std::uint32_t>(j)));
    out.phases[j] += sample_error(model, rng);
  }
  return out;
}

}  // namespace enqsp

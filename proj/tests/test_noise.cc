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

#include <gtest/gtest.h>

#include <cmath>

#include "enqsp/noise.h"

namespace enqsp {
namespace {

constexpr int kDraws = 1000000;

double draw(const NoiseModel& m, std::uint64_t i) {
  CounterStream rng(StreamKey{2024, 7, i, 0});
  return sample_error(m, rng);
}

TEST(Attenuation, ClosedForms) {
  EXPECT_NEAR(attenuation_factor(NoiseModel::gaussian(0.1)), 0.951229424500714, 1e-12);
  EXPECT_DOUBLE_EQ(attenuation_factor(NoiseModel::two_point(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(attenuation_factor(NoiseModel::uniform(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(attenuation_factor(NoiseModel::none()), 1.0);
  EXPECT_NEAR(attenuation_factor(NoiseModel::uniform(0.5)), std::sin(0.5) / 0.5, 1e-15);
  EXPECT_NEAR(attenuation_factor(NoiseModel::two_point(0.3)), std::cos(0.3), 1e-15);
  EXPECT_NEAR(attenuation_factor(NoiseModel::uniform(1e-6)), 1.0 - 1e-12 / 6, 1e-16);
}

TEST(Attenuation, SecondOrderInVariance) {
  for (double nu : {0.0, 0.01, 0.05, 0.1, 0.2}) {
    for (NoiseModel m : {NoiseModel::gaussian(nu), NoiseModel::uniform(std::sqrt(3 * nu)),
                         NoiseModel::two_point(std::sqrt(nu))}) {
      EXPECT_NEAR(m.variance(), nu, 1e-15);
      EXPECT_LE(std::abs(attenuation_factor(m) - (1 - nu / 2)), nu * nu / 2 + 1e-15);
    }
  }
}

TEST(NoiseModel, RejectsOutOfRange) {
  EXPECT_THROW(NoiseModel::gaussian(-0.1), std::invalid_argument);
  EXPECT_THROW(NoiseModel::uniform(4.0), std::invalid_argument);
  EXPECT_THROW(NoiseModel::two_point(2.0), std::invalid_argument);
  EXPECT_THROW(NoiseModel::gaussian(std::nan("")), std::invalid_argument);
}

TEST(NoiseModel, KindNamesRoundTrip) {
  for (NoiseKind k : {NoiseKind::kNone, NoiseKind::kGaussian, NoiseKind::kUniform, NoiseKind::kTwoPoint}) {
    EXPECT_EQ(parse_noise_kind(noise_kind_name(k)), k);
  }
  EXPECT_THROW(parse_noise_kind("laplace"), std::invalid_argument);
}

TEST(SampleError, NoneIsZeroAndTwoPointIsSigned) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    EXPECT_EQ(draw(NoiseModel::none(), i), 0.0);
    double e = draw(NoiseModel::two_point(0.2), i);
    EXPECT_TRUE(e == 0.2 || e == -0.2);
  }
}

// Monte Carlo E[cos e] and E[sin e] over 1e6 draws for every kind.
TEST(SampleError, CosineMeanMatchesAttenuation) {
  for (NoiseModel m : {NoiseModel::gaussian(0.1), NoiseModel::uniform(0.5), NoiseModel::two_point(0.3)}) {
    double sc = 0, ss = 0, s1 = 0, s2 = 0;
    for (int i = 0; i < kDraws; ++i) {
      double e = draw(m, static_cast<std::uint64_t>(i));
      sc += std::cos(e);
      ss += std::sin(e);
      s1 += e;
      s2 += e * e;
    }
    double n = kDraws;
    EXPECT_NEAR(sc / n, attenuation_factor(m), 4 / std::sqrt(n)) << noise_kind_name(m.kind);
    EXPECT_NEAR(ss / n, 0.0, 4 / std::sqrt(n)) << noise_kind_name(m.kind);
    EXPECT_NEAR(s1 / n, 0.0, 4 * std::sqrt(m.variance() / n)) << noise_kind_name(m.kind);
    EXPECT_NEAR(s2 / n, m.variance(), 0.01 * m.variance()) << noise_kind_name(m.kind);
  }
}

TEST(PerturbPhases, NoneIsIdentityAndTwoPointShiftsExactly) {
  PhaseFactorSequence phi{{0.1, -0.7, 2.0}};
  StreamKey key{1, 2, 3, 0};
  EXPECT_EQ(perturb_phases(phi, NoiseModel::none(), key).phases, phi.phases);
  PhaseFactorSequence p = perturb_phases(phi, NoiseModel::two_point(0.25), key);
  ASSERT_EQ(p.degree(), 3u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(p.phases[j] - phi.phases[j]), 0.25, 1e-15);
}

TEST(PerturbPhases, PerPositionVariance) {
  const double nu = 0.04;
  const int n = 100000;
  PhaseFactorSequence phi{{0.0, 1.0, -1.0, 0.5}};
  std::vector<double> s2(4, 0.0);
  for (int i = 0; i < n; ++i) {
    PhaseFactorSequence p = perturb_phases(phi, NoiseModel::gaussian(nu), StreamKey{3, 0, static_cast<std::uint64_t>(i), 0});
    for (std::size_t j = 0; j < 4; ++j) s2[j] += std::pow(p.phases[j] - phi.phases[j], 2);
  }
  for (double v : s2) {
    EXPECT_GE(v / n, 0.95 * nu);
    EXPECT_LE(v / n, 1.05 * nu);
  }
}

}  // namespace
}  // namespace enqsp

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

#include <numbers>

#include "enqsp/block_encoding.h"
#include "enqsp/ensemble.h"
#include "enqsp/parallel.h"
#include "test_util.h"

namespace enqsp {
namespace {

using testing::max_abs_diff;

struct Fixture {
  ComplexMatrix a;
  BlockEncoding u;
  PhaseFactorSequence phi;
};

Fixture make_fixture(std::uint64_t seed, int dim, std::size_t d) {
  std::mt19937_64 rng(seed);
  Fixture f;
  f.a = testing::random_hermitian(rng, dim, 0.95);
  f.u = dilate_hermitian(f.a);
  f.phi = {testing::random_angles(rng, d)};
  return f;
}

ComplexMatrix exact_p(const Fixture& f) {
  return encoded_block(qubitize(f.u, f.phi));
}

TEST(NoisySample, NoiselessAndDegreeZero) {
  Fixture f = make_fixture(41, 2, 5);
  StreamKey key{1, 0, 0, 0};
  EXPECT_LT(max_abs_diff(sample_noisy_block(f.u, f.phi, NoiseModel::none(), key), exact_p(f)), 1e-12);
  ComplexMatrix id = sample_noisy_block(f.u, PhaseFactorSequence{}, NoiseModel::gaussian(0.3), key);
  EXPECT_LT(max_abs_diff(id, ComplexMatrix::Identity(2, 2)), 1e-12);
}

TEST(NoisySample, CircuitPathAgreesWithFullUnitary) {
  Fixture f = make_fixture(42, 2, 6);
  QspCircuit circuit(f.u);
  for (std::uint64_t i = 0; i < 5; ++i) {
    StreamKey key{3, 1, i, 0};
    ComplexMatrix full = sample_noisy_block(f.u, f.phi, NoiseModel::gaussian(0.1), key);
    QspCircuit::Evaluation fast = sample_noisy_block(circuit, f.phi, NoiseModel::gaussian(0.1), key);
    EXPECT_LT(max_abs_diff(full, fast.block), 1e-12);
    EXPECT_EQ(fast.queries, 6u);
  }
}

// Mean of noisy blocks converges to c^d P(A).
TEST(NoisySample, MeanIsAttenuatedPolynomial) {
  Fixture f = make_fixture(43, 2, 6);
  NoiseModel noise = NoiseModel::gaussian(0.1);
  QspCircuit circuit(f.u);
  const int n = 20000;
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  ComplexMatrix sum2 = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    ComplexMatrix b = sample_noisy_block(circuit, f.phi, noise, StreamKey{5, 0, static_cast<std::uint64_t>(i), 0}).block;
    sum += b;
    sum2 += b.cwiseAbs2().cast<Complex>();
  }
  ComplexMatrix mean = sum / n;
  ComplexMatrix expected = std::pow(attenuation_factor(noise), 6) * exact_p(f);
  EXPECT_LT(max_abs_diff(mean, expected), 0.02);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      double var = sum2(r, c).real() / n - std::norm(mean(r, c));
      EXPECT_LE(std::abs(mean(r, c) - expected(r, c)), 3 * std::sqrt(var / n) + 1e-12);
    }
  }
}

TEST(Ensemble, NoiselessErrorIsZero) {
  Fixture f = make_fixture(44, 2, 4);
  for (std::size_t m : {1u, 7u, 100u}) {
    EnsembleResult r = ensemble_average_block(f.u, f.phi, NoiseModel::none(), m, StreamKey{1, 0, 0, 0});
    EXPECT_LE(r.error, 1e-12);
    EXPECT_EQ(r.sample_count, m);
    EXPECT_DOUBLE_EQ(r.rescale, 1.0);
  }
}

TEST(Ensemble, SingleTermIsDefinition) {
  Fixture f = make_fixture(45, 2, 4);
  NoiseModel noise = NoiseModel::gaussian(0.2);
  StreamKey key{8, 2, 100, 0};
  EnsembleResult r = ensemble_average_block(f.u, f.phi, noise, 1, key);
  ComplexMatrix p1 = sample_noisy_block(f.u, f.phi, noise, sample_key(key, 0));
  ComplexMatrix p2 = sample_noisy_block(f.u, f.phi, noise, sample_key(key, 1));
  EXPECT_LT(max_abs_diff(r.averaged_block, 0.5 * (p1 + p2.adjoint())), 1e-12);
  EXPECT_LE(spectral_norm(r.averaged_block), 1 + 1e-9);
  EXPECT_LE(hermiticity_defect(0.5 * (p1 + p1.adjoint())), 1e-12);
}

TEST(Ensemble, ReferenceIsRealPart) {
  Fixture f = make_fixture(46, 4, 5);
  EnsembleResult r = ensemble_average_block(f.u, f.phi, NoiseModel::none(), 1, StreamKey{});
  ComplexMatrix p = exact_p(f);
  EXPECT_LT(max_abs_diff(r.reference, 0.5 * (p + p.adjoint())), 1e-12);
}

TEST(Ensemble, ErrorBoundAtLargeM) {
  Fixture f = make_fixture(47, 2, 4);
  NoiseModel noise = NoiseModel::gaussian(0.05);
  int ok = 0;
  for (std::uint32_t rep = 0; rep < 100; ++rep) {
    EnsembleResult r = ensemble_average_block(f.u, f.phi, noise, 6400, StreamKey{77, rep, 0, 0});
    ok += r.error <= 0.05;
  }
  EXPECT_GE(ok, 95);
}

TEST(Ensemble, ThreadCountDoesNotChangeBits) {
  Fixture f = make_fixture(48, 2, 5);
  NoiseModel noise = NoiseModel::gaussian(0.1);
  EnsembleResult a = ensemble_average_block(f.u, f.phi, noise, 1000, StreamKey{9, 9, 0, 0}, {1});
  EnsembleResult b = ensemble_average_block(f.u, f.phi, noise, 1000, StreamKey{9, 9, 0, 0}, {4});
  EXPECT_TRUE(a.averaged_block == b.averaged_block);
  EXPECT_EQ(a.error, b.error);
}

TEST(Witness, MatchesArithmeticAverage) {
  Fixture f = make_fixture(49, 2, 4);
  NoiseModel noise = NoiseModel::gaussian(0.1);
  for (std::size_t m : {1u, 2u, 4u, 8u}) {
    StreamKey key{4, 4, 0, 0};
    std::vector<BlockEncoding> samples = noisy_sample_encodings(f.u, f.phi, noise, m, key);
    BlockEncoding w = explicit_lcu_average(samples);
    EXPECT_LE(check_unitary(w.unitary), 1e-10);
    ComplexMatrix direct = ComplexMatrix::Zero(2, 2);
    for (const auto& s : samples) direct += encoded_block(s);
    direct /= static_cast<double>(2 * m);
    EXPECT_LT(spectral_norm(encoded_block(w) - direct), 1e-12) << m;
    EnsembleResult r = ensemble_average_block(f.u, f.phi, noise, m, key);
    EXPECT_LT(spectral_norm(encoded_block(w) - r.averaged_block), 1e-12) << m;
  }
}

TEST(Witness, NoiselessSinglePair) {
  Fixture f = make_fixture(50, 2, 3);
  BlockEncoding w = explicit_lcu_average(noisy_sample_encodings(f.u, f.phi, NoiseModel::none(), 1, StreamKey{}));
  ComplexMatrix p = exact_p(f);
  EXPECT_LT(max_abs_diff(encoded_block(w), 0.5 * (p + p.adjoint())), 1e-12);
}

TEST(Witness, RejectsLargeOrOddCounts) {
  Fixture f = make_fixture(51, 1, 1);
  std::vector<BlockEncoding> s = noisy_sample_encodings(f.u, f.phi, NoiseModel::none(), 16, StreamKey{});
  EXPECT_THROW(explicit_lcu_average(s), std::invalid_argument);
  s.resize(3);
  EXPECT_THROW(explicit_lcu_average(s), std::invalid_argument);
}

TEST(EnsembleSize, Examples) {
  EXPECT_EQ(ensemble_size_for(0.1, 0.05, 1.0, 0), 369u);
  EXPECT_EQ(ensemble_size_for(0.1, 0.05, 0.5, 1), 1476u);
  EXPECT_EQ(ensemble_size_for(0.1, 0.05, std::pow(0.5, 1.0 / 4), 4), 1476u);
  EXPECT_EQ(ensemble_size_for(0.5, 0.999, 1.0, 0), 3u);
  EXPECT_THROW(ensemble_size_for(0.1, 0.05, 0.5, 30), IllPosedError);
  EXPECT_THROW(ensemble_size_for(0.0, 0.05, 1.0, 1), std::invalid_argument);
}

TEST(ChunkedMean, ExactForIdenticalTermsAndOrderIndependent) {
  double m = chunked_mean(1000, {1}, 0.0, [](std::size_t) { return 0.1; });
  EXPECT_EQ(m, 0.1);
  auto term = [](std::size_t i) { return std::sin(static_cast<double>(i)); };
  double a = chunked_mean(1000, {1}, 0.0, term);
  double b = chunked_mean(1000, {3}, 0.0, term);
  EXPECT_EQ(a, b);
  double direct = 0;
  for (std::size_t i = 0; i < 1000; ++i) direct += term(i);
  EXPECT_NEAR(a, direct / 1000, 1e-15);
}

// Total error is bounded by implementation plus algorithmic parts.
TEST(ErrorBalance, TriangleSplit) {
  Fixture f = make_fixture(52, 2, 4);
  EnsembleResult r = ensemble_average_block(f.u, f.phi, NoiseModel::gaussian(0.05), 400, StreamKey{6, 0, 0, 0});
  ComplexMatrix target = matfunc_hermitian(f.a, [](double x) -> Complex { return 0.5 * std::cos(2 * x); });
  double total = spectral_norm(r.averaged_block / r.rescale - target);
  double algorithmic = spectral_norm(r.reference - target);
  EXPECT_LE(total, r.error + algorithmic + 1e-9);
}

}  // namespace
}  // namespace enqsp

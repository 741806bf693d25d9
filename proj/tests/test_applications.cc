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
#include <numbers>

#include "enqsp/applications.h"
#include "test_util.h"

namespace enqsp {
namespace {

using testing::diag;
using testing::max_abs_diff;

StreamKey key_for(std::uint32_t trial) { return StreamKey{2718, trial, 0, 0}; }

TEST(PostSelect, StatsAreConsistent) {
  PostSelectStats s = post_select(0.3, 0.1, 500, key_for(0));
  EXPECT_EQ(s.attempts, 500u);
  EXPECT_LE(s.successes, s.attempts);
  EXPECT_NEAR(s.empirical_rate, 0.3, 4 * std::sqrt(0.3 * 0.7 / 500));
  EXPECT_GE(s.first_success, 1u);
  EXPECT_EQ(s.amplified_budget, 23u);
  EXPECT_THROW(post_select(0.0, 0.1, 10, key_for(0)), PostSelectionFailure);
  EXPECT_THROW(post_select(1.5, 0.1, 10, key_for(0)), std::invalid_argument);
}

TEST(Hsim, ZeroHamiltonian) {
  StateVector psi = StateVector::plus(1);
  HamSimPlan plan = plan_hsim(HamSimProblem::make(ComplexMatrix::Zero(2, 2), 1.0, psi, 0.02, 0.05,
                                                  NoiseModel::gaussian(0.01)));
  EnsembleResult r = hsim_encode(plan, 10, key_for(0));
  EXPECT_LT(max_abs_diff(r.averaged_block, 0.25 * ComplexMatrix::Identity(2, 2)), 1e-15);
  EXPECT_LE(r.error, 1e-15);
  PreparedState out = hsim_prepare_state(plan, 10, key_for(0));
  EXPECT_NEAR(out.state.fidelity(psi), 1.0, 1e-15);
  EXPECT_NEAR(out.stats.success_probability, 1.0 / 16, 1e-15);
  EXPECT_NEAR(out.stats.empirical_rate, 1.0 / 16, 4 * std::sqrt(1.0 / 16 / out.stats.attempts));
}

TEST(Hsim, NoiselessMeetsAlgorithmicBudget) {
  std::mt19937_64 rng(71);
  ComplexMatrix h = testing::random_hermitian(rng, 2, 1.0);
  StateVector psi = testing::random_state(rng, 2);
  HamSimPlan plan = plan_hsim(HamSimProblem::make(h, 1.0, psi, 1e-3, 0.05, NoiseModel::none()));
  EnsembleResult r = hsim_encode(plan, 1, key_for(1));
  EXPECT_LE(r.error, 2e-3);
  EXPECT_EQ(r.queries_per_sample, plan.degree());
  PreparedState out = hsim_prepare_state(plan, 1, key_for(1));
  StateVector oracle = StateVector::normalized(plan.exact_evolution() * psi.amplitudes());
  EXPECT_GE(out.state.fidelity(oracle), 1 - 2 * plan.eps_alg);
  EXPECT_GE(out.stats.success_probability, out.stats.predicted_bound);
}

TEST(Hsim, NoisyRescaledErrorRate) {
  std::mt19937_64 rng(72);
  ComplexMatrix h = testing::random_hermitian(rng, 2, 1.0);
  HamSimPlan plan =
      plan_hsim(HamSimProblem::make(h, 1.0, testing::random_state(rng, 2), 0.02, 0.05, NoiseModel::gaussian(0.01)));
  std::size_t m = ensemble_size_for(0.05, 0.05, plan.attenuation, plan.degree());
  int ok = 0;
  for (std::uint32_t t = 0; t < 50; ++t) {
    EnsembleResult r = hsim_encode(plan, m, key_for(100 + t));
    ok += r.error <= 0.05 + plan.eps_alg;
  }
  EXPECT_GE(ok, 48);
}

TEST(Hsim, NoisyStatePreparation) {
  std::mt19937_64 rng(73);
  ComplexMatrix h = testing::random_hermitian(rng, 2, 1.0);
  StateVector psi = testing::random_state(rng, 2);
  HamSimPlan plan = plan_hsim(HamSimProblem::make(h, 1.0, psi, 0.02, 0.05, NoiseModel::gaussian(0.01)));
  StateVector oracle = StateVector::normalized(plan.exact_evolution() * psi.amplitudes());
  int ok = 0;
  for (std::uint32_t t = 0; t < 20; ++t) {
    PreparedState out = hsim_prepare_state(plan, plan.default_ensemble_size(), key_for(200 + t));
    ok += out.state.fidelity(oracle) >= 1 - 2 * plan.problem.eps;
    EXPECT_GE(out.stats.success_probability, out.stats.predicted_bound);
    EXPECT_GE(out.stats.empirical_rate, out.stats.predicted_bound);
  }
  EXPECT_GE(ok, 18);
}

TEST(Hsim, ObservableIdentityAndCommuting) {
  std::mt19937_64 rng(74);
  ComplexMatrix h = testing::random_hermitian(rng, 2, 1.0);
  StateVector psi = testing::random_state(rng, 2);
  HamSimPlan plan = plan_hsim(HamSimProblem::make(h, 1.0, psi, 0.02, 0.05, NoiseModel::none()));
  ObservableEstimate id = hsim_observable(plan, dilate_hermitian(ComplexMatrix::Identity(2, 2)), 20000, key_for(3));
  EXPECT_NEAR(id.value, 1.0, 3 * id.standard_error + plan.eps_alg);
  ComplexMatrix o = matfunc_hermitian(h, [](double x) -> Complex { return 0.5 * x; });
  ObservableEstimate two = hsim_observable(plan, dilate_hermitian(o), 20000, key_for(4));
  ObservableEstimate split = hsim_observable_split(plan, dilate_hermitian(o), 20000, key_for(5));
  double exact = psi.amplitudes().dot(o * psi.amplitudes()).real();
  EXPECT_NEAR(two.value, exact, 3 * two.standard_error + plan.eps_alg);
  EXPECT_NEAR(split.value, exact, 3 * split.standard_error + plan.eps_alg);
}

TEST(Hsim, ObservableNonCommuting) {
  std::mt19937_64 rng(75);
  ComplexMatrix h = testing::random_hermitian(rng, 2, 1.0);
  ComplexMatrix o = gates::pauli_x();
  StateVector psi = testing::random_state(rng, 2);
  HamSimPlan plan = plan_hsim(HamSimProblem::make(h, 1.0, psi, 0.02, 0.05, NoiseModel::none()));
  ComplexMatrix u = plan.exact_evolution();
  double exact = psi.amplitudes().dot(u.adjoint() * o * u * psi.amplitudes()).real();
  ObservableEstimate e = hsim_observable(plan, dilate_hermitian(o), 40000, key_for(6));
  EXPECT_NEAR(e.value, exact, 3 * e.standard_error + plan.eps_alg);
}

TEST(Qlsp, IdentitySystem) {
  StateVector b = StateVector::plus(1);
  QLSPPlan plan = plan_qlsp(QLSPProblem::make(ComplexMatrix::Identity(2, 2), b, 1.0, 0.1, 0.05, NoiseModel::none()));
  PreparedState out = qlsp_prepare_state(plan, 1, key_for(7));
  EXPECT_NEAR(out.state.fidelity(b), 1.0, 1e-12);
  ObservableEstimate e = qlsp_observable(plan, dilate_hermitian(ComplexMatrix::Identity(2, 2)), 20000, key_for(8));
  EXPECT_NEAR(e.value, 1.0, 3 * e.standard_error + 0.1);
}

TEST(Qlsp, DiagonalClosedForm) {
  QLSPPlan plan = plan_qlsp(QLSPProblem::make(diag({1.0, 0.125}), StateVector::plus(1), 8.0, 0.05, 0.05,
                                              NoiseModel::none()));
  EXPECT_LE(plan.approximation.max_error(), 3 * 0.05 / 64);
  PreparedState out = qlsp_prepare_state(plan, 1, key_for(9));
  ComplexVector x(2);
  x << 1.0, 8.0;
  EXPECT_GE(out.state.fidelity(StateVector::normalized(x)), 0.9);
  EXPECT_GE(out.stats.success_probability, plan.success_bound());
}

TEST(Qlsp, ObservableDiagonal) {
  QLSPPlan plan = plan_qlsp(QLSPProblem::make(diag({1.0, 0.5}), StateVector::plus(1), 2.0, 0.1, 0.05,
                                              NoiseModel::none()));
  ObservableEstimate e = qlsp_observable(plan, dilate_hermitian(gates::pauli_z()), 40000, key_for(10));
  // x = A^{-1} b = (1, 2)/sqrt(2): x^dagger Z x = (1 - 4)/2.
  EXPECT_NEAR(e.reference, -1.5, 1e-12);
  EXPECT_NEAR(e.value, -1.5, 3 * e.standard_error + 0.1);
}

TEST(Qlsp, RejectsForbiddenBandAndSingular) {
  StateVector b = StateVector::plus(1);
  EXPECT_THROW(QLSPProblem::make(diag({1.0, 0.05}), b, 8.0, 0.05, 0.05, NoiseModel::none()), std::invalid_argument);
  EXPECT_THROW(QLSPProblem::make(diag({1.0, 0.0}), b, 8.0, 0.05, 0.05, NoiseModel::none()), std::invalid_argument);
  QLSPProblem p = QLSPProblem::make(diag({2.0, -0.5}), b, 0.0, 0.05, 0.05, NoiseModel::none());
  EXPECT_NEAR(p.kappa, 4.0, 1e-12);
  EXPECT_NEAR(spectral_norm(p.a), 1.0, 1e-12);
}

TEST(Qetu, Examples) {
  using std::numbers::pi;
  ComplexMatrix half(1, 1);
  half << pi / 2;
  EXPECT_LT(spectral_norm(encoded_block(qetu_cosine_encoding(half))), 1e-15);
  ComplexMatrix d = diag({0.3, 2.1});
  EXPECT_LT(max_abs_diff(encoded_block(qetu_cosine_encoding(d)), diag({std::cos(0.3), std::cos(2.1)})), 1e-15);
  std::mt19937_64 rng(76);
  ComplexMatrix v = testing::random_unitary(rng, 4);
  ComplexMatrix h = v * diag({0.2 + 1e-3, 1.0, 2.0, 2.9 - 1e-3}) * v.adjoint();
  h = 0.5 * (h + h.adjoint());
  BlockEncoding q = qetu_cosine_encoding(h);
  EXPECT_LE(check_unitary(q.unitary), 1e-12);
  ComplexMatrix half_sum = 0.5 * (matfunc_hermitian(h, [](double x) { return std::polar(1.0, x); }) +
                                  matfunc_hermitian(h, [](double x) { return std::polar(1.0, -x); }));
  EXPECT_LT(spectral_norm(encoded_block(q) - matfunc_hermitian(h, [](double x) -> Complex { return std::cos(x); })), 1e-12);
  EXPECT_LT(spectral_norm(encoded_block(q) - half_sum), 1e-12);
  EXPECT_THROW(qetu_cosine_encoding(diag({-0.1, 1.0})), std::invalid_argument);
  EXPECT_THROW(qetu_cosine_encoding(diag({0.1, 3.2})), std::invalid_argument);
}

TEST(Gsp, DiagonalExactOverlap) {
  ComplexMatrix h = diag({0.2, 0.7});
  StateVector ground = StateVector::basis(1, 0);
  GSPPlan plan = plan_gsp(GSPProblem::make(h, ground, 0.05, 0.05, 0.05, NoiseModel::none()));
  EXPECT_NEAR(plan.problem.gamma, 1.0, 1e-15);
  PreparedState out = gsp_prepare_state(plan, 1, key_for(11));
  EXPECT_GE(out.state.fidelity(plan.problem.ground_state), 1 - 2 * plan.eps_alg);
  ObservableEstimate e = gsp_observable(plan, dilate_hermitian(ComplexMatrix(diag({1.0, 0.0}))), 20000, key_for(12));
  EXPECT_NEAR(e.value, 1.0, 3 * e.standard_error + 0.05);
}

GSPProblem two_qubit_problem(std::uint64_t seed, NoiseModel noise) {
  std::mt19937_64 rng(seed);
  ComplexMatrix v = testing::random_unitary(rng, 4);
  ComplexMatrix h = v * diag({0.15, 0.55, 0.7, 0.85}) * v.adjoint();
  h = 0.5 * (h + h.adjoint());
  ComplexVector rest = v.col(1) + v.col(2) - v.col(3);
  StateVector phi0 = StateVector::normalized(0.6 * v.col(0) + 0.8 * rest.normalized());
  return GSPProblem::make(h, phi0, 0.05, 0.05, 0.05, noise);
}

TEST(Gsp, TwoQubitNoiseless) {
  GSPPlan plan = plan_gsp(two_qubit_problem(77, NoiseModel::none()));
  EXPECT_NEAR(plan.problem.gamma, 0.6, 1e-12);
  EXPECT_NEAR(plan.problem.gap, 0.4, 1e-12);
  PreparedState out = gsp_prepare_state(plan, 1, key_for(13));
  EXPECT_GE(out.state.fidelity(plan.problem.ground_state), 0.9);
  EXPECT_GE(out.stats.success_probability, plan.success_bound());
  ObservableEstimate e = gsp_observable(plan, dilate_hermitian(ComplexMatrix::Identity(4, 4)), 20000, key_for(14));
  EXPECT_NEAR(e.value, 1.0, 3 * e.standard_error + 0.05);
}

TEST(Gsp, TwoQubitNoisy) {
  GSPPlan plan = plan_gsp(two_qubit_problem(78, NoiseModel::gaussian(0.005)));
  int fidelity_ok = 0;
  int rate_ok = 0;
  for (std::uint32_t t = 0; t < 20; ++t) {
    PreparedState out = gsp_prepare_state(plan, plan.default_ensemble_size(), key_for(300 + t));
    fidelity_ok += out.state.fidelity(plan.problem.ground_state) >= 0.9;
    rate_ok += out.stats.empirical_rate >= plan.success_bound();
    EXPECT_GE(out.stats.success_probability, plan.success_bound());
    EXPECT_EQ(out.ensemble.queries_per_sample, plan.degree());
  }
  EXPECT_GE(fidelity_ok, 18);
  EXPECT_GE(rate_ok, 19);
}

TEST(Gsp, AffineMapAndRejections) {
  GSPProblem p = GSPProblem::make(diag({-3.0, 5.0}), StateVector::plus(1), 0.05, 0.05, 0.05, NoiseModel::none());
  EXPECT_NEAR(p.ground_energy, 0.1, 1e-12);
  EXPECT_NEAR(p.ground_energy + p.gap, 0.9, 1e-12);
  EXPECT_THROW(GSPProblem::make(diag({0.3, 0.3}), StateVector::plus(1), 0.05, 0.05, 0.05, NoiseModel::none()),
               std::invalid_argument);
  EXPECT_THROW(GSPProblem::make(diag({0.2, 0.7}), StateVector::basis(1, 1), 0.05, 0.05, 0.05, NoiseModel::none()),
               std::invalid_argument);
}

TEST(Gsp, ObservableRefusesTinyOverlap) {
  ComplexVector v(2);
  v << 1e-4, 1.0;
  GSPPlan plan = plan_gsp(GSPProblem::make(diag({0.2, 0.7}), StateVector::normalized(v), 0.05, 0.05, 0.05,
                                           NoiseModel::none()));
  EXPECT_THROW(gsp_observable(plan, dilate_hermitian(ComplexMatrix::Identity(2, 2)), 10, key_for(15)),
               IllPosedError);
}

}  // namespace
}  // namespace enqsp

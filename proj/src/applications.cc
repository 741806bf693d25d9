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

#include "enqsp/applications.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace enqsp {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
  }
}

void require_state(const StateVector& psi, const ComplexMatrix& m, const char* name) {
  if (psi.dimension() != static_cast<std::size_t>(m.rows())) {
    throw std::invalid_argument(std::string(name) + " dimension does not match the matrix");
  }
}

std::size_t budget_for(double bound, double delta) {
  return static_cast<std::size_t>(std::ceil(std::log(1.0 / delta) / bound));
}

Component make_component(const TargetPolynomial& p) {
  Component c;
  c.polynomial = p;
  bool zero = std::all_of(p.coefficients().begin(), p.coefficients().end(),
                          [](double v) { return v == 0.0; });
  if (zero) {
    c.is_zero = true;
  } else if (p.degree() > 0) {
    c.phases = solve_phase_factors(p);
  }
  return c;
}

// Common QSP-driven state preparation: averaged block applied to `input`,
// then post-selection with the given lower bound.
PreparedState prepare_from_ensemble(EnsembleResult ens, const StateVector& input, double bound,
                                    double delta, const StreamKey& key) {
  ComplexVector v = ens.averaged_block * input.amplitudes();
  double p = v.squaredNorm();
  PostSelectStats stats = post_select(p, bound, budget_for(bound, delta), key);
  return PreparedState{StateVector::normalized(v), stats, std::move(ens)};
}

}  // namespace

PostSelectStats post_select(double probability, double predicted_bound, std::size_t budget,
                            const StreamKey& key) {
  if (!(probability >= 0.0 && probability <= 1.0 + 1e-9)) {
    throw std::invalid_argument("success probability outside [0, 1]");
  }
  PostSelectStats stats;
  stats.success_probability = probability;
  stats.predicted_bound = predicted_bound;
  stats.budget = std::max<std::size_t>(budget, 1);
  stats.amplified_budget =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(stats.budget))));
  for (std::size_t i = 0; i < stats.budget; ++i) {
    CounterStream rng(
        key.with_sample(key.sample + kPostSelectOffset + i).with_slot(kPostSelectSlot));
    if (rng.uniform() < probability) {
      ++stats.successes;
      if (stats.first_success == 0) stats.first_success = i + 1;
    }
  }
  stats.attempts = stats.budget;
  stats.empirical_rate = static_cast<double>(stats.successes) / static_cast<double>(stats.attempts);
  if (stats.successes == 0) {
    std::ostringstream msg;
    msg << "post-selection failed in all " << stats.attempts << " attempts (p = " << probability
        << ")";
    throw PostSelectionFailure(msg.str(), stats);
  }
  return stats;
}

// ---------------------------------------------------------------------------

HamSimProblem HamSimProblem::make(ComplexMatrix hamiltonian, double time, StateVector psi0,
                                  double eps, double delta, NoiseModel noise) {
  require_hermitian(hamiltonian, "Hamiltonian");
  require_state(psi0, hamiltonian, "initial state");
  if (!std::isfinite(time) || time < 0.0) throw std::invalid_argument("time must be >= 0");
  require_unit_interval(eps, "eps");
  require_unit_interval(delta, "delta");
  HamSimProblem p;
  p.hamiltonian = 0.5 * (hamiltonian + hamiltonian.adjoint());
  p.time = time;
  p.psi0 = std::move(psi0);
  p.eps = eps;
  p.delta = delta;
  p.noise = noise;
  p.hamiltonian_norm = spectral_norm(p.hamiltonian);
  if (!std::isfinite(p.hamiltonian_norm * time)) throw std::invalid_argument("||H|| T is not finite");
  return p;
}

double HamSimPlan::block_factor() const {
  return 1.0 / (2.0 * (std::abs(cos_weight) + std::abs(sin_weight)));
}

ComplexMatrix HamSimPlan::exact_evolution() const {
  double t = problem.time;
  return matfunc_hermitian(problem.hamiltonian, [t](double x) { return std::polar(1.0, -x * t); });
}

std::size_t HamSimPlan::default_ensemble_size() const {
  return ensemble_size_for(eps_imp, problem.delta, attenuation, degree());
}

std::size_t HamSimPlan::default_shots() const {
  double f = 2.0 * block_factor();
  return shots_for(eps_imp * f * f, problem.delta, 1.0, 0, 0);
}

HamSimPlan plan_hsim(const HamSimProblem& problem) {
  HamSimPlan plan;
  plan.problem = problem;
  plan.beta = problem.hamiltonian_norm * problem.time;
  plan.eps_alg = 0.5 * problem.eps;
  plan.eps_imp = 0.5 * problem.eps;
  plan.attenuation = attenuation_factor(problem.noise);
  auto dim = problem.hamiltonian.rows();
  if (plan.beta == 0.0) {
    plan.signal = dilate_hermitian(ComplexMatrix::Zero(dim, dim));
    plan.cos_part = make_component(TargetPolynomial({0.5}, Parity::kEven));
    plan.sin_part = make_component(TargetPolynomial({0.0, 0.0}, Parity::kOdd));
  } else {
    plan.signal = dilate_hermitian(problem.hamiltonian / problem.hamiltonian_norm);
    // Each half is certified to eps_alg / 4, so 2 (p_cos - i p_sin) is within eps_alg.
    plan.approximation = trig_approx(plan.beta, 0.5 * plan.eps_alg);
    plan.cos_part = make_component(plan.approximation->cos_part.polynomial);
    plan.sin_part = make_component(plan.approximation->sin_part.polynomial);
  }
  double c = plan.attenuation;
  require_signal_to_noise(c, plan.degree());
  plan.cos_weight = std::pow(c, -static_cast<double>(plan.cos_part.degree()));
  plan.sin_weight = Complex(0, -std::pow(c, -static_cast<double>(plan.sin_part.degree())));
  return plan;
}

namespace {

// Noisy realization of one component: c^d p(A) in expectation.
class ComponentSampler {
 public:
  ComponentSampler(const Component& component, const BlockEncoding& signal, const NoiseModel& noise)
      : component_(component), noise_(noise), signal_(signal) {
    auto n = static_cast<Eigen::Index>(signal.system_dim());
    if (component.is_zero) {
      constant_ = ComplexMatrix::Zero(n, n);
    } else if (component.degree() == 0) {
      constant_ = component.polynomial.coefficients()[0] * ComplexMatrix::Identity(n, n);
    } else {
      circuit_.emplace(signal);
    }
  }

  bool is_constant() const { return !circuit_.has_value(); }

  ComplexMatrix sample(const StreamKey& master, std::uint64_t index) const {
    if (is_constant()) return constant_;
    return sample_noisy_block(*circuit_, component_.phases, noise_, sample_key(master, index)).block;
  }

  // (sample_{a} + sample_{a+1}^dagger) / 2.
  ComplexMatrix pair(const StreamKey& master, std::uint64_t first) const {
    if (is_constant()) return constant_;
    return 0.5 * (sample(master, first) + sample(master, first + 1).adjoint());
  }

  ComplexMatrix average(std::size_t m, const StreamKey& master, const Execution& exec) const {
    if (is_constant()) return constant_;
    return ensemble_average_block(signal_, component_.phases, noise_, m, master, exec)
        .averaged_block;
  }

 private:
  const Component& component_;
  NoiseModel noise_;
  const BlockEncoding& signal_;
  ComplexMatrix constant_;
  std::optional<QspCircuit> circuit_;
};

}  // namespace

EnsembleResult hsim_encode(const HamSimPlan& plan, std::size_t m, const StreamKey& key,
                           const Execution& exec) {
  if (m == 0) throw std::invalid_argument("ensemble size must be at least 1");
  ComponentSampler cos_s(plan.cos_part, plan.signal, plan.problem.noise);
  ComponentSampler sin_s(plan.sin_part, plan.signal, plan.problem.noise);
  StreamKey sin_key = key.with_sample(key.sample + kSecondComponentOffset);
  double beta_w = std::abs(plan.cos_weight) + std::abs(plan.sin_weight);
  EnsembleResult out;
  out.averaged_block = (plan.cos_weight * cos_s.average(m, key, exec) +
                        plan.sin_weight * sin_s.average(m, sin_key, exec)) /
                       beta_w;
  out.sample_count = m;
  out.rescale = plan.block_factor();
  out.reference = plan.exact_evolution();
  out.error = spectral_norm(out.averaged_block / out.rescale - out.reference);
  out.degree = plan.degree();
  out.queries_per_sample = plan.degree();
  return out;
}

PreparedState hsim_prepare_state(const HamSimPlan& plan, std::size_t m, const StreamKey& key,
                                 const Execution& exec) {
  EnsembleResult ens = hsim_encode(plan, m, key, exec);
  double c2d = std::pow(plan.attenuation, 2.0 * static_cast<double>(plan.degree()));
  return prepare_from_ensemble(std::move(ens), plan.problem.psi0, c2d / 128.0, plan.problem.delta,
                               key);
}

ObservableEstimate hsim_observable(const HamSimPlan& plan, const BlockEncoding& u_o,
                                   std::size_t shots, const StreamKey& key,
                                   const Execution& exec) {
  ComplexMatrix o = observable_matrix(u_o);
  require_state(plan.problem.psi0, o, "initial state");
  ComponentSampler cos_s(plan.cos_part, plan.signal, plan.problem.noise);
  ComponentSampler sin_s(plan.sin_part, plan.signal, plan.problem.noise);
  StreamKey sin_key = key.with_sample(key.sample + kSecondComponentOffset);
  double beta_w = std::abs(plan.cos_weight) + std::abs(plan.sin_weight);
  auto evolution = [&](std::uint64_t first) -> ComplexMatrix {
    return (plan.cos_weight * cos_s.pair(key, first) + plan.sin_weight * sin_s.pair(sin_key, first)) /
           beta_w;
  };
  RandomMatrixSource sampler = [&](std::uint64_t s) -> ComplexMatrix {
    return evolution(4 * s).adjoint() * o * evolution(4 * s + 2);
  };
  ObservableEstimate out = run_hadamard_test(sampler, plan.problem.psi0, shots, key, exec);
  double f = 2.0 * beta_w;
  out.rescale = f * f;
  out.value = out.raw_value * out.rescale;
  out.standard_error *= out.rescale;
  ComplexMatrix u = plan.exact_evolution();
  const ComplexVector& v = plan.problem.psi0.amplitudes();
  out.reference = v.dot(u.adjoint() * o * u * v).real();
  return out;
}

ObservableEstimate hsim_observable_split(const HamSimPlan& plan, const BlockEncoding& u_o,
                                         std::size_t shots, const StreamKey& key,
                                         const Execution& exec) {
  ComplexMatrix o = observable_matrix(u_o);
  const StateVector& psi = plan.problem.psi0;
  require_state(psi, o, "initial state");
  const ComplexVector& v = psi.amplitudes();
  ObservableEstimate out;
  out.shots = shots;
  out.rescale = 4.0;
  double variance = 0.0;
  const Component* parts[] = {&plan.cos_part, &plan.sin_part};
  for (int i = 0; i < 2; ++i) {
    const Component& part = *parts[i];
    StreamKey k = key.with_sample(key.sample + static_cast<std::uint64_t>(i) * kSecondComponentOffset);
    if (part.is_zero) continue;
    if (part.degree() == 0) {
      double c0 = part.polynomial.coefficients()[0];
      out.value += c0 * c0 * v.dot(o * v).real();
      continue;
    }
    ObservableEstimate e =
        estimate_qsp_observable(plan.signal, part.phases, u_o, psi, plan.problem.noise, shots, k, exec);
    out.value += e.value;
    out.raw_value += e.raw_value;
    variance += e.standard_error * e.standard_error;
  }
  out.value *= 4.0;
  out.standard_error = 4.0 * std::sqrt(variance);
  ComplexMatrix u = plan.exact_evolution();
  out.reference = v.dot(u.adjoint() * o * u * v).real();
  return out;
}

// ---------------------------------------------------------------------------

QLSPProblem QLSPProblem::make(ComplexMatrix a, StateVector b, double kappa, double eps,
                              double delta, NoiseModel noise) {
  require_hermitian(a, "QLSP matrix");
  require_state(b, a, "right-hand side");
  require_unit_interval(eps, "eps");
  require_unit_interval(delta, "delta");
  QLSPProblem p;
  HermitianEigen e = eigh(a);
  double norm = e.values.cwiseAbs().maxCoeff();
  double smallest = e.values.cwiseAbs().minCoeff();
  if (!(smallest > 0.0) || !(norm > 0.0)) throw std::invalid_argument("QLSP matrix is singular");
  double exact_kappa = norm / smallest;
  if (kappa <= 0.0) kappa = exact_kappa;
  if (kappa < 1.0) throw std::invalid_argument("kappa must be >= 1");
  // Smallest normalized eigenvalue must stay outside (-1/kappa, 1/kappa).
  if (smallest / norm < (1.0 / kappa) * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "eigenvalue " << smallest / norm << " of the normalized matrix lies inside (-1/kappa, "
        << "1/kappa) for kappa = " << kappa << " (condition number " << exact_kappa << ")";
    throw std::invalid_argument(msg.str());
  }
  p.input_norm = norm;
  p.a = 0.5 * (a + a.adjoint()) / norm;
  p.b = std::move(b);
  p.kappa = kappa;
  p.eps = eps;
  p.delta = delta;
  p.noise = noise;
  return p;
}

ComplexVector QLSPProblem::solution() const { return a.partialPivLu().solve(b.amplitudes()); }

double QLSPPlan::success_bound() const {
  double c2d = std::pow(attenuation, 2.0 * static_cast<double>(degree()));
  double g = 3.0 / (8.0 * problem.kappa);
  return c2d * g * g;
}

std::size_t QLSPPlan::default_ensemble_size() const {
  return ensemble_size_for(eps_imp, problem.delta, attenuation, degree());
}

std::size_t QLSPPlan::theorem_ensemble_size() const {
  return ensemble_size_for(eps_poly, problem.delta, attenuation, degree());
}

std::size_t QLSPPlan::default_shots() const {
  double g = 3.0 / (4.0 * problem.kappa);
  return shots_for(problem.eps * g * g, problem.delta, attenuation, degree(), 4);
}

QLSPPlan plan_qlsp(const QLSPProblem& problem) {
  QLSPPlan plan;
  plan.problem = problem;
  plan.eps_poly = 3.0 * problem.eps / (8.0 * problem.kappa);
  plan.eps_imp = 0.5 * problem.eps;
  plan.attenuation = attenuation_factor(problem.noise);
  plan.signal = dilate_hermitian(problem.a);
  plan.approximation = inverse_approx(problem.kappa, plan.eps_poly);
  plan.phases = solve_phase_factors(plan.approximation.polynomial);
  require_signal_to_noise(plan.attenuation, plan.degree());
  return plan;
}

PreparedState qlsp_prepare_state(const QLSPPlan& plan, std::size_t m, const StreamKey& key,
                                 const Execution& exec) {
  EnsembleResult ens =
      ensemble_average_block(plan.signal, plan.phases, plan.problem.noise, m, key, exec);
  return prepare_from_ensemble(std::move(ens), plan.problem.b, plan.success_bound(),
                               plan.problem.delta, key);
}

ObservableEstimate qlsp_observable(const QLSPPlan& plan, const BlockEncoding& u_o,
                                   std::size_t shots, const StreamKey& key,
                                   const Execution& exec) {
  ObservableEstimate out = estimate_qsp_observable(plan.signal, plan.phases, u_o, plan.problem.b,
                                                   plan.problem.noise, shots, key, exec);
  double f = 4.0 * plan.problem.kappa / 3.0;
  out.rescale *= f * f;
  out.value *= f * f;
  out.standard_error *= f * f;
  ComplexVector x = plan.problem.solution();
  out.reference = x.dot(observable_matrix(u_o) * x).real();
  return out;
}

// ---------------------------------------------------------------------------

BlockEncoding qetu_cosine_encoding(const ComplexMatrix& h) {
  require_hermitian(h, "QETU Hamiltonian");
  HermitianEigen e = eigh(h);
  double lo = e.values.minCoeff(), hi = e.values.maxCoeff();
  if (!(lo > 0.0 && hi < std::numbers::pi)) {
    std::ostringstream msg;
    msg << "QETU needs the spectrum inside (0, pi), got [" << lo << ", " << hi << "]";
    throw std::invalid_argument(msg.str());
  }
  std::size_t n = log2_exact(static_cast<std::size_t>(h.rows()));
  auto dim = h.rows();
  ComplexMatrix select = ComplexMatrix::Zero(2 * dim, 2 * dim);
  select.topLeftCorner(dim, dim) = matfunc_hermitian(h, [](double x) { return std::polar(1.0, x); });
  select.bottomRightCorner(dim, dim) =
      matfunc_hermitian(h, [](double x) { return std::polar(1.0, -x); });
  ComplexMatrix had = kron(gates::hadamard(), gates::identity(static_cast<std::size_t>(dim)));
  return make_block_encoding(had * select * had, 1, n);
}

GSPProblem GSPProblem::make(ComplexMatrix h_input, StateVector phi0, double eta, double eps,
                            double delta, NoiseModel noise) {
  require_hermitian(h_input, "GSP Hamiltonian");
  require_state(phi0, h_input, "initial state");
  if (!(eta > 0.0 && eta < 0.25)) throw std::invalid_argument("eta must lie in (0, 1/4)");
  require_unit_interval(eps, "eps");
  require_unit_interval(delta, "delta");
  HermitianEigen e = eigh(h_input);
  double lo = e.values(0), hi = e.values(e.values.size() - 1);
  GSPProblem p;
  if (!(lo > eta && hi < 1.0 - eta)) {
    if (!(hi > lo)) throw std::invalid_argument("GSP Hamiltonian has no spectral gap");
    p.scale = (1.0 - 4.0 * eta) / (hi - lo);
    p.shift = 2.0 * eta - p.scale * lo;
  }
  auto dim = h_input.rows();
  p.h = p.scale * 0.5 * (h_input + h_input.adjoint()) + p.shift * ComplexMatrix::Identity(dim, dim);
  RealVector levels = p.scale * e.values.array() + p.shift;
  if (levels.size() < 2 || !(levels(1) - levels(0) > 1e-9)) {
    throw std::invalid_argument("GSP ground level is degenerate");
  }
  p.ground_energy = levels(0);
  p.gap = levels(1) - levels(0);
  p.mu = 0.5 * (levels(0) + levels(1));
  p.eta = eta;
  p.ground_state = StateVector::normalized(e.vectors.col(0));
  p.gamma = std::abs(p.ground_state.inner(phi0));
  if (!(p.gamma > 0.0)) throw std::invalid_argument("initial state has no ground-state overlap");
  p.phi0 = std::move(phi0);
  p.eps = eps;
  p.delta = delta;
  p.noise = noise;
  return p;
}

double GSPPlan::success_bound() const {
  double c2d = std::pow(attenuation, 2.0 * static_cast<double>(degree()));
  return 0.5 * c2d * problem.gamma * problem.gamma;
}

std::size_t GSPPlan::default_ensemble_size() const {
  return ensemble_size_for(eps_imp, problem.delta, attenuation, degree());
}

std::size_t GSPPlan::default_shots() const {
  double g2 = problem.gamma * problem.gamma;
  return shots_for(eps_imp * g2, problem.delta, attenuation, degree(), 4);
}

GSPPlan plan_gsp(const GSPProblem& problem) {
  GSPPlan plan;
  plan.problem = problem;
  plan.eps_alg = 0.5 * problem.eps;
  plan.eps_imp = 0.5 * problem.eps;
  plan.attenuation = attenuation_factor(problem.noise);
  plan.signal = qetu_cosine_encoding(problem.h);
  plan.approximation = gsp_filter_approx(problem.mu, problem.gap, problem.eta, plan.eps_alg);
  plan.phases = solve_phase_factors(plan.approximation.polynomial);
  require_signal_to_noise(plan.attenuation, plan.degree());
  return plan;
}

PreparedState gsp_prepare_state(const GSPPlan& plan, std::size_t m, const StreamKey& key,
                                const Execution& exec) {
  EnsembleResult ens =
      ensemble_average_block(plan.signal, plan.phases, plan.problem.noise, m, key, exec);
  return prepare_from_ensemble(std::move(ens), plan.problem.phi0, plan.success_bound(),
                               plan.problem.delta, key);
}

ObservableEstimate gsp_observable(const GSPPlan& plan, const BlockEncoding& u_o, std::size_t shots,
                                  const StreamKey& key, const Execution& exec) {
  double g2 = plan.problem.gamma * plan.problem.gamma;
  if (plan.problem.gamma < 1e-3) throw IllPosedError("ground-state overlap below 1e-3");
  ObservableEstimate out = estimate_qsp_observable(plan.signal, plan.phases, u_o, plan.problem.phi0,
                                                   plan.problem.noise, shots, key, exec);
  out.rescale /= g2;
  out.value /= g2;
  out.standard_error /= g2;
  const ComplexVector& g = plan.problem.ground_state.amplitudes();
  out.reference = g.dot(observable_matrix(u_o) * g).real();
  return out;
}

}  // namespace enqsp

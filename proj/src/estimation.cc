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

#include "enqsp/estimation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "enqsp/ensemble.h"

namespace enqsp {

namespace {

void require_contraction(const ComplexMatrix& o) {
  double norm = spectral_norm(o);
  if (norm > 1.0 + kBlockNormSlack) {
    std::ostringstream msg;
    msg << "Hadamard test needs ||O~|| <= 1, got " << norm;
    throw std::invalid_argument(msg.str());
  }
}

OutcomeDistribution from_probabilities(double plus, double minus) {
  OutcomeDistribution out;
  out.plus = plus;
  out.minus = minus;
  out.zero = std::max(0.0, 1.0 - plus - minus);
  return out;
}

}  // namespace

OutcomeDistribution hadamard_distribution(const ComplexMatrix& o_tilde, const StateVector& psi) {
  if (o_tilde.rows() != o_tilde.cols() ||
      static_cast<std::size_t>(o_tilde.rows()) != psi.dimension()) {
    throw std::invalid_argument("observable and state dimensions differ");
  }
  require_contraction(o_tilde);
  const ComplexVector& v = psi.amplitudes();
  ComplexVector ov = o_tilde * v;
  return from_probabilities(0.25 * (v + ov).squaredNorm(), 0.25 * (v - ov).squaredNorm());
}

OutcomeDistribution hadamard_distribution(const BlockEncoding& u_o, const StateVector& psi) {
  validate(u_o);
  if (psi.dimension() != u_o.system_dim()) throw std::invalid_argument("state dimension mismatch");
  auto d = static_cast<Eigen::Index>(u_o.dim());
  auto n = static_cast<Eigen::Index>(u_o.system_dim());
  // Register order: test qubit (most significant), ancillas, system.
  ComplexVector state = ComplexVector::Zero(2 * d);
  state.head(n) = psi.amplitudes();
  ComplexMatrix h = kron(gates::hadamard(), gates::identity(static_cast<std::size_t>(d)));
  ComplexMatrix controlled = ComplexMatrix::Identity(2 * d, 2 * d);
  controlled.bottomRightCorner(d, d) = u_o.unitary;
  state = h * controlled * h * state;
  double plus = state.segment(0, n).squaredNorm();
  double minus = state.segment(d, n).squaredNorm();
  return from_probabilities(plus, minus);
}

int draw_outcome(const OutcomeDistribution& dist, double u) {
  if (u < dist.plus) return 1;
  if (u < dist.plus + dist.minus) return -1;
  return 0;
}

namespace {

struct Moments {
  double mean = 0.0;
  double square = 0.0;
  Moments& operator+=(const Moments& o) {
    mean += o.mean;
    square += o.square;
    return *this;
  }
  Moments operator-(const Moments& o) const { return {mean - o.mean, square - o.square}; }
  Moments operator*(double s) const { return {mean * s, square * s}; }
  Moments operator/(double s) const { return {mean / s, square / s}; }
};

double standard_error(const Moments& m, std::size_t shots) {
  if (shots < 2) return std::numeric_limits<double>::infinity();
  double n = static_cast<double>(shots);
  double var = std::max(0.0, m.square - m.mean * m.mean) * n / (n - 1.0);
  return std::sqrt(var / n);
}

}  // namespace

ObservableEstimate run_hadamard_test(const RandomMatrixSource& sampler, const StateVector& psi,
                                     std::size_t shots, const StreamKey& master,
                                     const Execution& exec) {
  if (shots == 0) throw std::invalid_argument("Hadamard test needs at least one shot");
  Moments m = chunked_mean(shots, exec, Moments{}, [&](std::size_t s) {
    OutcomeDistribution dist = hadamard_distribution(sampler(s), psi);
    CounterStream rng(outcome_key(master, s));
    double o = draw_outcome(dist, rng.uniform());
    return Moments{o, o * o};
  });
  ObservableEstimate out;
  out.raw_value = m.mean;
  out.value = m.mean;
  out.shots = shots;
  out.rescale = 1.0;
  out.reference = std::numeric_limits<double>::quiet_NaN();
  out.standard_error = standard_error(m, shots);
  return out;
}

ComplexMatrix observable_matrix(const BlockEncoding& u_o) {
  validate(u_o);
  ComplexMatrix o = encoded_block(u_o);
  require_hermitian(o, "observable");
  if (spectral_norm(o) > 1.0 + kBlockNormSlack) throw std::invalid_argument("observable norm exceeds 1");
  return o;
}

ObservableEstimate estimate_qsp_observable(const BlockEncoding& u_a,
                                           const PhaseFactorSequence& phi,
                                           const BlockEncoding& u_o, const StateVector& psi,
                                           const NoiseModel& model, std::size_t shots,
                                           const StreamKey& master, const Execution& exec) {
  double c = attenuation_factor(model);
  std::size_t d = phi.degree();
  require_signal_to_noise(c, d, 2.0);
  ComplexMatrix o = observable_matrix(u_o);
  QspCircuit circuit(u_a);
  if (static_cast<std::size_t>(o.rows()) != psi.dimension() ||
      circuit.signal_matrix().rows() != o.rows()) {
    throw std::invalid_argument("observable, signal and state dimensions differ");
  }
  auto sample = [&](std::uint64_t index) {
    return sample_noisy_block(circuit, phi, model, sample_key(master, index)).block;
  };
  RandomMatrixSource sampler = [&](std::uint64_t s) -> ComplexMatrix {
    ComplexMatrix left = sample(4 * s) + sample(4 * s + 1).adjoint();
    ComplexMatrix right = sample(4 * s + 2) + sample(4 * s + 3).adjoint();
    return 0.25 * left * o * right;
  };
  ObservableEstimate out = run_hadamard_test(sampler, psi, shots, master, exec);
  out.rescale = 1.0 / std::pow(c, 2.0 * static_cast<double>(d));
  out.value = out.raw_value * out.rescale;
  out.standard_error *= out.rescale;
  ComplexMatrix p = matfunc_hermitian(circuit.signal_matrix(), [&](double x) -> Complex {
    return qsp_polynomial(phi.phases, std::clamp(x, -1.0, 1.0)).real();
  });
  const ComplexVector& v = psi.amplitudes();
  out.reference = v.dot(p * o * p * v).real();
  return out;
}

std::size_t shots_for(double eps, double delta, double c, std::size_t d, int power) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (power != 0 && power != 2 && power != 4) throw std::invalid_argument("power must be 0, 2 or 4");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("attenuation factor must lie in (0, 1]");
  double attenuated = eps * std::pow(c, static_cast<double>(d) * power / 2.0);
  if (attenuated < 1e-6) {
    std::ostringstream msg;
    msg << "ill-posed: attenuated accuracy " << attenuated << " < 1e-6";
    throw IllPosedError(msg.str());
  }
  double m = std::ceil(2.0 * std::log(2.0 / delta) / (attenuated * attenuated));
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

}  // namespace enqsp

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

#include "enqsp/qsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "enqsp/philox.h"

namespace enqsp {

std::vector<double> chebyshev_grid(std::size_t n, double lo, double hi) {
  if (n < 2) throw std::invalid_argument("Chebyshev grid needs at least two points");
  std::vector<double> out(n);
  double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = mid + half * std::cos(std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(n - 1));
  }
  // Pin the endpoints exactly.
  out.front() = hi;
  out.back() = lo;
  return out;
}

double chebyshev_eval(std::span<const double> c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

TargetPolynomial::TargetPolynomial(std::vector<double> coefficients, Parity parity)
    : coefficients_(std::move(coefficients)), parity_(parity) {
  if (coefficients_.empty()) throw std::invalid_argument("polynomial needs coefficients");
  if (parity_of(degree()) != parity_) {
    throw std::invalid_argument("polynomial degree " + std::to_string(degree()) +
                                " does not match its parity");
  }
  std::size_t wrong = parity_ == Parity::kEven ? 1 : 0;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    if (!std::isfinite(coefficients_[k])) throw std::invalid_argument("non-finite coefficient");
    if (k % 2 == wrong && coefficients_[k] != 0.0) {
      throw std::invalid_argument("coefficient of T_" + std::to_string(k) +
                                  " violates the declared parity");
    }
  }
  for (double x : chebyshev_grid(kSupGridPoints)) {
    sup_norm_ = std::max(sup_norm_, std::abs((*this)(x)));
  }
  if (sup_norm_ > 1.0 + kSupSlack) {
    std::ostringstream msg;
    msg << "polynomial exceeds 1 on [-1, 1]: grid sup " << sup_norm_;
    throw std::invalid_argument(msg.str());
  }
}

double TargetPolynomial::operator()(double x) const { return chebyshev_eval(coefficients_, x); }

namespace {

void require_signal(double x) {
  if (!(std::abs(x) <= 1.0)) {
    throw std::invalid_argument("signal value must lie in [-1, 1], got " + std::to_string(x));
  }
}

double complement(double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); }

}  // namespace

ComplexMatrix signal_operator(double x) {
  require_signal(x);
  double s = complement(x);
  ComplexMatrix r(2, 2);
  r << x, s, s, -x;
  return r;
}

ComplexMatrix qsp_unitary_scalar(const PhaseFactorSequence& phi, double x) {
  ComplexMatrix r = signal_operator(x);
  ComplexMatrix u = gates::identity(2);
  for (double p : phi.phases) u = gates::z_rotation(p) * r * u;
  return u;
}

Complex qsp_polynomial(std::span<const double> phases, double x) {
  require_signal(x);
  double s = complement(x);
  Complex v0 = 1.0, v1 = 0.0;
  for (double p : phases) {
    Complex a = x * v0 + s * v1;
    Complex b = s * v0 - x * v1;
    Complex e = std::polar(1.0, p);
    v0 = e * a;
    v1 = std::conj(e) * b;
  }
  return v0;
}

namespace {

void require_qsp_oracle(const BlockEncoding& u_a) {
  validate(u_a);
  if (u_a.scale != 1.0) throw std::invalid_argument("qubitization needs a scale-1 block-encoding");
  require_hermitian(top_left_block(u_a), "encoded signal matrix");
}

}  // namespace

BlockEncoding qubitize(const BlockEncoding& u_a, const PhaseFactorSequence& phi) {
  require_qsp_oracle(u_a);
  auto d = static_cast<Eigen::Index>(u_a.dim());
  auto n = static_cast<Eigen::Index>(u_a.system_dim());
  ComplexMatrix w_odd = kron(gates::identity(2), u_a.unitary);
  ComplexMatrix w_even = w_odd.adjoint();
  ComplexMatrix u = ComplexMatrix::Identity(2 * d, 2 * d);
  for (std::size_t j = 0; j < phi.phases.size(); ++j) {
    u = (j % 2 == 0 ? w_odd : w_even) * u;
    Complex in = std::polar(1.0, phi.phases[j]);
    u.topRows(n) *= in;
    u.bottomRows(2 * d - n) *= std::conj(in);
  }
  auto steps = static_cast<double>(phi.phases.size());
  return make_block_encoding(std::move(u), u_a.ancilla_qubits + 1, u_a.system_qubits, 1.0,
                             steps * u_a.precision);
}

BlockEncoding real_part_encoding(const PhaseFactorSequence& phi, const BlockEncoding& u_a) {
  BlockEncoding q = qubitize(u_a, phi);
  BlockEncoding parts[] = {q, adjoint(q)};
  Complex weights[] = {1.0, 1.0};
  return lcu_combine(parts, weights);
}

QspCircuit::QspCircuit(const BlockEncoding& u_a) : system_qubits_(u_a.system_qubits) {
  require_qsp_oracle(u_a);
  u_ = u_a.unitary;
  u_dag_ = u_.adjoint();
  a_ = top_left_block(u_a);
}

QspCircuit::Evaluation QspCircuit::evaluate(std::span<const double> phases) const {
  auto n = a_.rows();
  auto d = u_.rows();
  Evaluation out;
  if (phases.empty()) {
    out.block = ComplexMatrix::Identity(n, n);
    return out;
  }
  ComplexMatrix slab = u_.leftCols(n);
  ComplexMatrix next(d, n);
  for (std::size_t j = 0; j < phases.size(); ++j) {
    if (j > 0) {
      next.noalias() = (j % 2 == 0 ? u_ : u_dag_) * slab;
      slab.swap(next);
    }
    ++out.queries;
    Complex in = std::polar(1.0, phases[j]);
    slab.topRows(n) *= in;
    slab.bottomRows(d - n) *= std::conj(in);
  }
  out.block = slab.topRows(n);
  return out;
}

namespace {

struct SolverNodes {
  std::vector<double> x;
  std::vector<double> s;
  std::vector<double> target;
};

SolverNodes solver_nodes(const TargetPolynomial& p) {
  std::size_t d = p.degree();
  SolverNodes nodes;
  for (std::size_t k = 1; k <= 4 * d; ++k) {
    double x = std::cos(static_cast<double>(2 * k - 1) * std::numbers::pi /
                        static_cast<double>(8 * d));
    nodes.x.push_back(x);
    nodes.s.push_back(complement(x));
    nodes.target.push_back(p(x));
  }
  return nodes;
}

Eigen::VectorXd residuals(const std::vector<double>& phi, const SolverNodes& nodes) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(nodes.x.size()));
  for (std::size_t k = 0; k < nodes.x.size(); ++k) {
    r(static_cast<Eigen::Index>(k)) = qsp_polynomial(phi, nodes.x[k]).real() - nodes.target[k];
  }
  return r;
}

// d Re P / d phi_j via forward column and backward row vectors.
Eigen::MatrixXd jacobian(const std::vector<double>& phi, const SolverNodes& nodes) {
  std::size_t d = phi.size();
  std::size_t m = nodes.x.size();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  std::vector<Complex> e(d);
  for (std::size_t j = 0; j < d; ++j) e[j] = std::polar(1.0, phi[j]);
  std::vector<Complex> f0(d), f1(d);
  for (std::size_t k = 0; k < m; ++k) {
    double x = nodes.x[k], s = nodes.s[k];
    Complex v0 = 1.0, v1 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      Complex a = x * v0 + s * v1;
      Complex b = s * v0 - x * v1;
      v0 = e[j] * a;
      v1 = std::conj(e[j]) * b;
      f0[j] = v0;
      f1[j] = v1;
    }
    Complex w0 = 1.0, w1 = 0.0;
    for (std::size_t j = d; j-- > 0;) {
      Complex g = Complex(0, 1) * (w0 * f0[j] - w1 * f1[j]);
      jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = g.real();
      Complex a = w0 * e[j];
      Complex b = w1 * std::conj(e[j]);
      w0 = a * x + b * s;
      w1 = a * s - b * x;
    }
  }
  return jac;
}

struct FitResult {
  std::vector<double> phi;
  double residual;
};

FitResult levenberg_marquardt(std::vector<double> phi, const SolverNodes& nodes,
                              const PhaseSolverOptions& options) {
  Eigen::VectorXd r = residuals(phi, nodes);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  auto d = static_cast<Eigen::Index>(phi.size());
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (r.cwiseAbs().maxCoeff() <= options.tolerance) break;
    Eigen::MatrixXd jac = jacobian(phi, nodes);
    Eigen::MatrixXd normal = jac.transpose() * jac;
    Eigen::VectorXd grad = jac.transpose() * r;
    Eigen::VectorXd damp = normal.diagonal().array() + 1e-12;
    bool improved = false;
    while (!improved && lambda < 1e12) {
      Eigen::MatrixXd lhs = normal;
      lhs.diagonal() += lambda * damp;
      Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      std::vector<double> trial(phi);
      for (Eigen::Index j = 0; j < d; ++j) trial[static_cast<std::size_t>(j)] += step(j);
      Eigen::VectorXd rt = residuals(trial, nodes);
      double ct = rt.squaredNorm();
      if (ct < cost) {
        phi = std::move(trial);
        r = std::move(rt);
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
  }
  return {std::move(phi), r.cwiseAbs().maxCoeff()};
}

}  // namespace

double phase_residual(const PhaseFactorSequence& phi, const TargetPolynomial& p) {
  if (phi.degree() != p.degree()) throw std::invalid_argument("degree mismatch");
  if (p.degree() == 0) return std::abs(1.0 - p(0.0));
  return residuals(phi.phases, solver_nodes(p)).cwiseAbs().maxCoeff();
}

PhaseFactorSequence solve_phase_factors(const TargetPolynomial& p,
                                        const PhaseSolverOptions& options) {
  std::size_t d = p.degree();
  if (d == 0) {
    throw std::invalid_argument("degree-0 sequences only realize the constant polynomial 1");
  }
  // +-T_d saturates the bound but has a regular complementary part, so it is exempt.
  const std::vector<double>& a = p.coefficients();
  bool monomial = std::abs(std::abs(a[d]) - 1.0) <= 1e-12 &&
                  std::all_of(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(d),
                              [](double v) { return std::abs(v) <= 1e-12; });
  if (!monomial && p.sup_norm() > 1.0 - kSolverMargin + kSupSlack) {
    std::ostringstream msg;
    msg << "target sup-norm " << p.sup_norm() << " exceeds the solver margin 1 - 1e-6";
    throw std::invalid_argument(msg.str());
  }
  SolverNodes nodes = solver_nodes(p);
  // Re P = Re(i T_d) = 0 here.
  std::vector<double> start(d, -0.5 * std::numbers::pi);
  start[d - 1] = 0.5 * std::numbers::pi * static_cast<double>(d);
  FitResult best = levenberg_marquardt(start, nodes, options);
  for (std::size_t restart = 0; restart < options.max_restarts && best.residual > options.tolerance;
       ++restart) {
    CounterStream rng(StreamKey{options.seed, 0, restart, 0});
    std::vector<double> phi(d);
    for (double& v : phi) v = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    FitResult fit = levenberg_marquardt(std::move(phi), nodes, options);
    if (fit.residual < best.residual) best = std::move(fit);
  }
  if (best.residual > options.tolerance) {
    std::ostringstream msg;
    msg << "phase solver did not converge for degree " << d << ": residual " << best.residual;
    throw ConvergenceError(msg.str(), best.residual);
  }
  return PhaseFactorSequence{std::move(best.phi)};
}

}  // namespace enqsp

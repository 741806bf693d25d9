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

#include "experiment_kinds.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "enqsp/applications.h"
#include "enqsp/block_encoding.h"
#include "enqsp/ensemble.h"
#include "enqsp/estimation.h"
#include "enqsp/noise.h"
#include "enqsp/philox.h"
#include "enqsp/polyapprox.h"
#include "enqsp/qsp.h"

namespace enqsp {

using nlohmann::json;

namespace {

constexpr std::uint32_t kSetupLane = 0xFFFF;
constexpr int kSweepShift = 44;

// Sequential draws for building problem instances.
class SetupRandom {
 public:
  explicit SetupRandom(StreamKey key) : key_(key) {}
  double uniform() { return CounterStream(key_.with_sample(key_.sample + next_++)).uniform(); }
  double normal() { return CounterStream(key_.with_sample(key_.sample + next_++)).normal(); }

 private:
  StreamKey key_;
  std::uint64_t next_ = 0;
};

StreamKey setup_key(const ExperimentConfig& cfg, std::uint64_t offset = 0) {
  return StreamKey{cfg.seed, (cfg.experiment_id << 16) | kSetupLane, offset << 20, 0};
}

StreamKey trial_key(const ExperimentConfig& cfg, const Task& t) {
  auto trial = static_cast<std::uint32_t>(t.trial);
  return StreamKey{cfg.seed, (cfg.experiment_id << 16) | trial,
                   static_cast<std::uint64_t>(t.sweep_index) << kSweepShift, 0};
}

ComplexMatrix random_unitary(SetupRandom& rng, Eigen::Index dim) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix with_spectrum(SetupRandom& rng, const std::vector<double>& eigenvalues) {
  auto dim = static_cast<Eigen::Index>(eigenvalues.size());
  ComplexMatrix v = random_unitary(rng, dim);
  RealVector l(dim);
  for (Eigen::Index i = 0; i < dim; ++i) l(i) = eigenvalues[static_cast<std::size_t>(i)];
  ComplexMatrix h = v * l.cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (h + h.adjoint());
}

// Eigenvalues uniform in [-radius, radius].
ComplexMatrix random_hermitian(SetupRandom& rng, std::size_t qubits, double radius) {
  std::vector<double> eig(std::size_t{1} << qubits);
  for (double& e : eig) e = radius * (2.0 * rng.uniform() - 1.0);
  return with_spectrum(rng, eig);
}

StateVector random_state(SetupRandom& rng, std::size_t qubits) {
  ComplexVector v(static_cast<Eigen::Index>(std::size_t{1} << qubits));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
  return StateVector::normalized(v);
}

PhaseFactorSequence random_phases(SetupRandom& rng, std::size_t d) {
  PhaseFactorSequence phi;
  for (std::size_t j = 0; j < d; ++j) phi.phases.push_back(std::numbers::pi * (2.0 * rng.uniform() - 1.0));
  return phi;
}

NoiseModel noise_at(const ExperimentConfig& cfg, double nu) {
  return NoiseModel::checked(cfg.noise.kind, nu);
}

double c_d_of(const NoiseModel& model, std::size_t d) {
  return std::pow(attenuation_factor(model), static_cast<double>(d));
}

ReportRow make_row(const Task& t, std::size_t d, const NoiseModel& noise, std::size_t m,
                   std::string metric, double value, double bound) {
  ReportRow r;
  r.trial = t.trial;
  r.d = d;
  r.nu = t.nu;
  r.c_d = c_d_of(noise, d);
  r.m = m;
  r.metric = std::move(metric);
  r.value = value;
  r.bound = bound;
  return r;
}

std::size_t get_size(const json& problem, const char* key) { return problem.at(key).get<std::size_t>(); }
double get_real(const json& problem, const char* key) { return problem.at(key).get<double>(); }

// Optional matrix field; returns an error string or empty.
void check_matrix_field(const json& problem, const char* key, bool hermitian,
                        std::vector<std::string>& errors) {
  if (!problem.contains(key) || problem.at(key).is_null()) return;
  try {
    ComplexMatrix m = matrix_from_json(problem.at(key));
    if (hermitian) {
      double defect = hermiticity_defect(m);
      if (!(defect <= kHermitianTolerance)) {
        std::ostringstream msg;
        msg << "problem." << key << ": matrix is not Hermitian (Hermiticity defect ||A - A^dagger|| = " << defect
            << " > " << kHermitianTolerance << ")";
        errors.push_back(msg.str());
      }
    }
  } catch (const std::exception& e) {
    errors.push_back(std::string("problem.") + key + ": " + e.what());
  }
}

void check_state_field(const json& problem, const char* key, std::vector<std::string>& errors) {
  if (!problem.contains(key) || problem.at(key).is_null()) return;
  try {
    StateVector::normalized(vector_from_json(problem.at(key)));
  } catch (const std::exception& e) {
    errors.push_back(std::string("problem.") + key + ": " + e.what());
  }
}

void check_phases_field(const json& problem, const char* key, std::vector<std::string>& errors) {
  if (!problem.contains(key) || problem.at(key).is_null()) return;
  const json& p = problem.at(key);
  bool ok = p.is_array() && std::all_of(p.begin(), p.end(), [](const json& v) { return v.is_number(); });
  if (!ok) errors.push_back(std::string("problem.") + key + ": must be a list of angles");
}

bool present(const json& problem, const char* key) {
  return problem.contains(key) && !problem.at(key).is_null();
}

PhaseFactorSequence phases_from(const json& j) {
  PhaseFactorSequence phi;
  for (const json& v : j) phi.phases.push_back(v.get<double>());
  return phi;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Signal matrix for the ensemble kinds: given, or random with ||A|| <= 0.95.
ComplexMatrix signal_matrix(const ExperimentConfig& cfg, SetupRandom& rng) {
  if (present(cfg.problem, "matrix")) return matrix_from_json(cfg.problem.at("matrix"));
  return random_hermitian(rng, get_size(cfg.problem, "qubits"), 0.95);
}

}  // namespace

void ExperimentKind::check_problem(const json& problem, std::vector<std::string>& errors) const {
  json defaults = default_problem();
  for (auto it = defaults.begin(); it != defaults.end(); ++it) {
    if (!problem.contains(it.key())) continue;
    const json& v = problem.at(it.key());
    if (it.value().is_number_unsigned() && !(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) {
      errors.push_back("problem." + it.key() + ": must be a non-negative integer");
    } else if (it.value().is_number_float() && !v.is_number()) {
      errors.push_back("problem." + it.key() + ": must be a number");
    } else if (it.value().is_boolean() && !v.is_boolean()) {
      errors.push_back("problem." + it.key() + ": must be a boolean");
    }
  }
}

std::vector<Task> ExperimentKind::tasks(const ExperimentConfig& config) const {
  std::vector<Task> out;
  std::size_t sweep = 0;
  for (double nu : config.nu_values) {
    for (std::size_t m : config.m_values) {
      for (std::size_t t = 0; t < config.trials; ++t) {
        out.push_back(Task{nu, m, static_cast<std::int64_t>(t), sweep, ""});
      }
      ++sweep;
    }
  }
  return out;
}

std::vector<ReportRow> ExperimentKind::summarize(const ExperimentConfig&, const std::vector<ReportRow>&,
                                                 json&) const {
  return {};
}

double ExperimentKind::required_pass_fraction(std::string_view) const { return 1.0; }

namespace {

// ---------------------------------------------------------------------------

class ExpectationCheck : public ExperimentKind {
 public:
  std::string_view name() const override { return "expectation_check"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.1); }
  json default_problem() const override {
    return {{"qubits", 2u}, {"degree", 8u}, {"samples", 20000u}, {"tolerance", 0.02},
            {"matrix", nullptr}, {"phases", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "matrix", true, errors);
    check_phases_field(p, "phases", errors);
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    signal_ = dilate_hermitian(signal_matrix(cfg, rng));
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    PhaseFactorSequence phi;
    if (present(cfg.problem, "phases")) {
      phi = phases_from(cfg.problem.at("phases"));
    } else {
      SetupRandom rng(setup_key(cfg, 1 + static_cast<std::uint64_t>(t.trial)));
      phi = random_phases(rng, get_size(cfg.problem, "degree"));
    }
    NoiseModel noise = noise_at(cfg, t.nu);
    std::size_t n = t.m ? t.m : get_size(cfg.problem, "samples");
    QspCircuit circuit(signal_);
    ComplexMatrix expected = c_d_of(noise, phi.degree()) * circuit.evaluate(phi.phases).block;
    StreamKey key = trial_key(cfg, t);
    auto dim = expected.rows();
    ComplexMatrix mean = chunked_mean(n, exec, ComplexMatrix(ComplexMatrix::Zero(dim, dim)),
                                      [&](std::size_t i) {
                                        return sample_noisy_block(circuit, phi, noise, sample_key(key, i)).block;
                                      });
    double dev = (mean - expected).cwiseAbs().maxCoeff();
    return {make_row(t, phi.degree(), noise, n, "max_entry_deviation", dev,
                     get_real(cfg.problem, "tolerance"))};
  }

 private:
  BlockEncoding signal_;
};

// ---------------------------------------------------------------------------

class EnsembleConvergence : public ExperimentKind {
 public:
  std::string_view name() const override { return "ensemble_convergence"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.05); }
  std::vector<std::size_t> default_m_values() const override { return {100, 400, 1600, 6400}; }
  json default_problem() const override {
    return {{"qubits", 1u},       {"degree", 4u},        {"eps", 0.1},
            {"delta", 0.05},      {"budget_runs", 100u}, {"slope_target", -0.5},
            {"slope_tolerance", 0.1}, {"matrix", nullptr}, {"phases", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "matrix", true, errors);
    check_phases_field(p, "phases", errors);
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    signal_ = dilate_hermitian(signal_matrix(cfg, rng));
    phi_ = present(cfg.problem, "phases") ? phases_from(cfg.problem.at("phases"))
                                          : random_phases(rng, get_size(cfg.problem, "degree"));
  }
  std::vector<Task> tasks(const ExperimentConfig& cfg) const override {
    std::vector<Task> out = ExperimentKind::tasks(cfg);
    std::size_t sweep = cfg.nu_values.size() * cfg.m_values.size();
    for (double nu : cfg.nu_values) {
      for (std::size_t r = 0; r < get_size(cfg.problem, "budget_runs"); ++r) {
        out.push_back(Task{nu, 0, static_cast<std::int64_t>(r), sweep, "budget"});
      }
      ++sweep;
    }
    return out;
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    NoiseModel noise = noise_at(cfg, t.nu);
    double delta = get_real(cfg.problem, "delta");
    double cd = c_d_of(noise, phi_.degree());
    std::size_t m = t.m;
    double bound;
    std::string metric;
    if (t.variant == "budget" || m == 0) {
      double eps = get_real(cfg.problem, "eps");
      m = ensemble_size_for(eps, delta, attenuation_factor(noise), phi_.degree());
      bound = eps;
      metric = t.variant == "budget" ? "budget_error" : "rescaled_error";
    } else {
      bound = std::sqrt(std::log(2.0 / delta) / static_cast<double>(m)) / cd;
      metric = "rescaled_error";
    }
    EnsembleResult ens = ensemble_average_block(signal_, phi_, noise, m, trial_key(cfg, t), exec);
    return {make_row(t, phi_.degree(), noise, m, metric, ens.error, bound)};
  }
  std::vector<ReportRow> summarize(const ExperimentConfig& cfg, const std::vector<ReportRow>& rows,
                                   json& aggregates) const override {
    std::vector<ReportRow> out;
    json per_nu = json::array();
    for (double nu : cfg.nu_values) {
      std::map<std::size_t, std::vector<double>> errors;
      for (const ReportRow& r : rows) {
        if (r.metric == "rescaled_error" && r.nu == nu) errors[r.m].push_back(r.value);
      }
      std::vector<double> lx, ly;
      json medians = json::array();
      for (auto& [m, e] : errors) {
        double med = median(e);
        medians.push_back({{"M", m}, {"median_error", med}});
        lx.push_back(std::log(static_cast<double>(m)));
        ly.push_back(std::log(med));
      }
      json entry = {{"nu", nu}, {"median_error", medians}};
      if (lx.size() >= 2) {
        double slope = fit_slope(lx, ly);
        entry["loglog_slope"] = slope;
        Task t{nu, 0, -1, 0, ""};
        NoiseModel noise = noise_at(cfg, nu);
        out.push_back(make_row(t, phi_.degree(), noise, 0, "slope_deviation",
                               std::abs(slope - get_real(cfg.problem, "slope_target")),
                               get_real(cfg.problem, "slope_tolerance")));
      }
      per_nu.push_back(entry);
    }
    aggregates["degree"] = phi_.degree();
    aggregates["sweeps"] = per_nu;
    if (per_nu.size() == 1 && per_nu[0].contains("loglog_slope")) {
      aggregates["loglog_slope"] = per_nu[0]["loglog_slope"];
    }
    return out;
  }
  double required_pass_fraction(std::string_view metric) const override {
    if (metric == "rescaled_error" || metric == "budget_error") return 0.9;
    return 1.0;
  }

 private:
  BlockEncoding signal_;
  PhaseFactorSequence phi_;
};

// ---------------------------------------------------------------------------

class LcuEquivalence : public ExperimentKind {
 public:
  std::string_view name() const override { return "lcu_equivalence"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.05); }
  std::vector<std::size_t> default_m_values() const override { return {1, 2, 4, 8}; }
  json default_problem() const override {
    return {{"qubits", 1u}, {"degree", 4u}, {"tolerance", 1e-12}, {"unitarity_tolerance", 1e-10},
            {"matrix", nullptr}, {"phases", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "matrix", true, errors);
    check_phases_field(p, "phases", errors);
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    signal_ = dilate_hermitian(signal_matrix(cfg, rng));
    phi_ = present(cfg.problem, "phases") ? phases_from(cfg.problem.at("phases"))
                                          : random_phases(rng, get_size(cfg.problem, "degree"));
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    NoiseModel noise = noise_at(cfg, t.nu);
    std::size_t m = t.m ? t.m : 1;
    StreamKey key = trial_key(cfg, t);
    std::vector<BlockEncoding> samples = noisy_sample_encodings(signal_, phi_, noise, m, key);
    BlockEncoding witness = explicit_lcu_average(samples);
    EnsembleResult ens = ensemble_average_block(signal_, phi_, noise, m, key, exec);
    double dev = spectral_norm(encoded_block(witness) - ens.averaged_block);
    return {make_row(t, phi_.degree(), noise, m, "block_deviation", dev,
                     get_real(cfg.problem, "tolerance")),
            make_row(t, phi_.degree(), noise, m, "unitarity_defect", check_unitary(witness.unitary),
                     get_real(cfg.problem, "unitarity_tolerance"))};
  }

 private:
  BlockEncoding signal_;
  PhaseFactorSequence phi_;
};

// ---------------------------------------------------------------------------

class PhaseRoundtrip : public ExperimentKind {
 public:
  std::string_view name() const override { return "phase_roundtrip"; }
  NoiseModel default_noise() const override { return NoiseModel::none(); }
  json default_problem() const override {
    return {{"max_degree", 8u}, {"tolerance", 1e-8}, {"t2_tolerance", 1e-10}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    if (p.at("max_degree").is_number() && p.at("max_degree").get<double>() < 2) {
      errors.push_back("problem.max_degree: must be at least 2 so both parities occur");
    }
  }
  void prepare(const ExperimentConfig&) override {}
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution&) const override {
    NoiseModel noise = NoiseModel::none();
    std::vector<ReportRow> out;
    if (t.trial == 0 && t.sweep_index == 0) {
      TargetPolynomial t2({0.0, 0.0, 1.0}, Parity::kEven);
      PhaseFactorSequence phi = solve_phase_factors(t2);
      out.push_back(make_row(t, 2, noise, 0, "t2_residual", phase_residual(phi, t2),
                             get_real(cfg.problem, "t2_tolerance")));
    }
    SetupRandom rng(setup_key(cfg, 1 + static_cast<std::uint64_t>(t.trial)));
    std::size_t max_d = get_size(cfg.problem, "max_degree");
    Parity parity = t.trial % 2 ? Parity::kOdd : Parity::kEven;
    // Degrees of the requested parity in [1, max_d].
    std::vector<std::size_t> degrees;
    for (std::size_t d = 1; d <= max_d; ++d) {
      if (parity_of(d) == parity) degrees.push_back(d);
    }
    std::size_t d = degrees[static_cast<std::size_t>(rng.uniform() * static_cast<double>(degrees.size()))];
    while (true) {
      PhaseFactorSequence target = random_phases(rng, d);
      TargetPolynomial p = chebyshev_fit(
          [&](double x) { return qsp_polynomial(target.phases, x).real(); }, d, parity);
      if (p.sup_norm() > 1.0 - 1e-6) continue;
      PhaseFactorSequence phi = solve_phase_factors(p);
      out.push_back(make_row(t, d, noise, 0, "grid_residual", phase_residual(phi, p),
                             get_real(cfg.problem, "tolerance")));
      return out;
    }
  }
};

// ---------------------------------------------------------------------------

class HadamardUnbiased : public ExperimentKind {
 public:
  std::string_view name() const override { return "hadamard_unbiased"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.05); }
  json default_problem() const override {
    return {{"samplers", {"fixed_unitary", "random_sign_x", "noisy_qsp"}},
            {"eps", 0.1},
            {"delta", 0.05},
            {"degree", 4u},
            {"matrix", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "matrix", true, errors);
    const json& s = p.at("samplers");
    bool ok = s.is_array() && !s.empty();
    for (const json& v : s) {
      if (!v.is_string() || (v != "fixed_unitary" && v != "random_sign_x" && v != "noisy_qsp")) ok = false;
    }
    if (!ok) {
      errors.push_back(
          "problem.samplers: must be a non-empty list drawn from fixed_unitary, random_sign_x, noisy_qsp");
    }
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    unitary_ = random_unitary(rng, 2);
    psi_ = random_state(rng, 1);
    ComplexMatrix a = present(cfg.problem, "matrix") ? matrix_from_json(cfg.problem.at("matrix"))
                                                     : random_hermitian(rng, 1, 0.95);
    signal_ = dilate_hermitian(a);
    phi_ = random_phases(rng, get_size(cfg.problem, "degree"));
    psi_signal_ = random_state(rng, signal_.system_qubits);
  }
  std::vector<Task> tasks(const ExperimentConfig& cfg) const override {
    std::vector<Task> base = ExperimentKind::tasks(cfg);
    std::vector<Task> out;
    std::size_t sweeps = cfg.nu_values.size() * cfg.m_values.size();
    std::size_t index = 0;
    for (const json& s : cfg.problem.at("samplers")) {
      for (Task t : base) {
        t.variant = s.get<std::string>();
        t.sweep_index += index * sweeps;
        out.push_back(t);
      }
      ++index;
    }
    return out;
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    NoiseModel noise = noise_at(cfg, t.nu);
    double eps = get_real(cfg.problem, "eps");
    std::size_t shots = t.m ? t.m : shots_for(eps, get_real(cfg.problem, "delta"), 1.0, 0, 0);
    StreamKey key = trial_key(cfg, t);
    double exact = 0.0;
    std::size_t d = 0;
    ObservableEstimate est;
    if (t.variant == "fixed_unitary") {
      exact = psi_.amplitudes().dot(unitary_ * psi_.amplitudes()).real();
      est = run_hadamard_test([&](std::uint64_t) { return unitary_; }, psi_, shots, key, exec);
    } else if (t.variant == "random_sign_x") {
      StateVector plus = StateVector::plus(1);
      ComplexMatrix x = gates::pauli_x();
      est = run_hadamard_test(
          [&](std::uint64_t s) -> ComplexMatrix {
            CounterStream rng(key.with_sample(key.sample + s).with_slot(0));
            return (rng.next_u32() & 1u) ? ComplexMatrix(x) : ComplexMatrix(-x);
          },
          plus, shots, key, exec);
    } else {
      d = phi_.degree();
      QspCircuit circuit(signal_);
      ComplexMatrix p = matfunc_hermitian(circuit.signal_matrix(), [&](double v) -> Complex {
        return qsp_polynomial(phi_.phases, std::clamp(v, -1.0, 1.0)).real();
      });
      const ComplexVector& v = psi_signal_.amplitudes();
      exact = c_d_of(noise, d) * v.dot(p * v).real();
      est = run_hadamard_test(
          [&](std::uint64_t s) {
            return sample_noisy_block(circuit, phi_, noise, sample_key(key, s)).block;
          },
          psi_signal_, shots, key, exec);
    }
    return {make_row(t, d, noise, shots, "estimate_error_" + t.variant, std::abs(est.value - exact), eps)};
  }
  double required_pass_fraction(std::string_view) const override { return 0.9; }

 private:
  ComplexMatrix unitary_;
  StateVector psi_;
  BlockEncoding signal_;
  PhaseFactorSequence phi_;
  StateVector psi_signal_;
};

// ---------------------------------------------------------------------------

class Observable : public ExperimentKind {
 public:
  std::string_view name() const override { return "observable"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.05); }
  json default_problem() const override {
    return {{"qubits", 1u}, {"degree", 4u}, {"eps", 0.05}, {"delta", 0.05}, {"matrix", nullptr},
            {"observable", nullptr}, {"state", nullptr}, {"phases", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "matrix", true, errors);
    check_matrix_field(p, "observable", true, errors);
    check_state_field(p, "state", errors);
    check_phases_field(p, "phases", errors);
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    ComplexMatrix a = signal_matrix(cfg, rng);
    std::size_t n = log2_exact(static_cast<std::size_t>(a.rows()));
    signal_ = dilate_hermitian(a);
    phi_ = present(cfg.problem, "phases") ? phases_from(cfg.problem.at("phases"))
                                          : random_phases(rng, get_size(cfg.problem, "degree"));
    ComplexMatrix o = present(cfg.problem, "observable") ? matrix_from_json(cfg.problem.at("observable"))
                                                         : random_hermitian(rng, n, 1.0);
    observable_ = dilate_hermitian(o);
    psi_ = present(cfg.problem, "state") ? StateVector::normalized(vector_from_json(cfg.problem.at("state")))
                                         : random_state(rng, n);
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    NoiseModel noise = noise_at(cfg, t.nu);
    double eps = get_real(cfg.problem, "eps");
    std::size_t d = phi_.degree();
    std::size_t shots =
        t.m ? t.m : shots_for(eps, get_real(cfg.problem, "delta"), attenuation_factor(noise), d, 4);
    ObservableEstimate est =
        estimate_qsp_observable(signal_, phi_, observable_, psi_, noise, shots, trial_key(cfg, t), exec);
    return {make_row(t, d, noise, shots, "estimate_error", std::abs(est.value - est.reference), eps)};
  }
  double required_pass_fraction(std::string_view) const override { return 0.95; }

 private:
  BlockEncoding signal_;
  PhaseFactorSequence phi_;
  BlockEncoding observable_;
  StateVector psi_;
};

// ---------------------------------------------------------------------------

// Rows shared by the three state-preparation kinds.
std::vector<ReportRow> preparation_rows(const Task& t, const NoiseModel& noise, std::size_t m,
                                        const PreparedState& out, const StateVector& oracle,
                                        double eps) {
  std::size_t d = out.ensemble.degree;
  const PostSelectStats& s = out.stats;
  return {
      make_row(t, d, noise, m, "infidelity", 1.0 - out.state.fidelity(oracle), 2.0 * eps),
      make_row(t, d, noise, m, "success_bound_ratio", s.predicted_bound / s.empirical_rate, 1.0),
      make_row(t, d, noise, m, "probability_bound_ratio", s.predicted_bound / s.success_probability, 1.0),
      make_row(t, d, noise, m, "query_depth_excess",
               std::abs(static_cast<double>(out.ensemble.queries_per_sample) - static_cast<double>(d)),
               0.0),
  };
}

double preparation_fraction(std::string_view metric) {
  if (metric == "infidelity" || metric == "rescaled_block_error") return 0.9;
  return 1.0;
}

class Hsim : public ExperimentKind {
 public:
  std::string_view name() const override { return "hsim"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.01); }
  json default_problem() const override {
    return {{"qubits", 1u}, {"time", 1.0}, {"eps", 0.02}, {"delta", 0.05}, {"hamiltonian", nullptr},
            {"state", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "hamiltonian", true, errors);
    check_state_field(p, "state", errors);
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    ComplexMatrix h = present(cfg.problem, "hamiltonian")
                          ? matrix_from_json(cfg.problem.at("hamiltonian"))
                          : random_hermitian(rng, get_size(cfg.problem, "qubits"), 1.0);
    std::size_t n = log2_exact(static_cast<std::size_t>(h.rows()));
    StateVector psi = present(cfg.problem, "state")
                          ? StateVector::normalized(vector_from_json(cfg.problem.at("state")))
                          : random_state(rng, n);
    for (double nu : cfg.nu_values) {
      plans_.push_back(plan_hsim(HamSimProblem::make(h, get_real(cfg.problem, "time"), psi,
                                                     get_real(cfg.problem, "eps"),
                                                     get_real(cfg.problem, "delta"), noise_at(cfg, nu))));
    }
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    const HamSimPlan& plan = plans_[t.sweep_index / cfg.m_values.size()];
    std::size_t m = t.m ? t.m : plan.default_ensemble_size();
    PreparedState out = hsim_prepare_state(plan, m, trial_key(cfg, t), exec);
    StateVector oracle = StateVector::normalized(plan.exact_evolution() * plan.problem.psi0.amplitudes());
    std::vector<ReportRow> rows =
        preparation_rows(t, plan.problem.noise, m, out, oracle, plan.problem.eps);
    rows.push_back(make_row(t, out.ensemble.degree, plan.problem.noise, m, "rescaled_block_error",
                            out.ensemble.error, plan.problem.eps));
    return rows;
  }
  std::vector<ReportRow> summarize(const ExperimentConfig& cfg, const std::vector<ReportRow>&,
                                   json& aggregates) const override {
    json sweeps = json::array();
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      const HamSimPlan& p = plans_[i];
      sweeps.push_back({{"nu", cfg.nu_values[i]},
                        {"beta", p.beta},
                        {"degree_cos", p.cos_part.degree()},
                        {"degree_sin", p.sin_part.degree()},
                        {"block_factor", p.block_factor()},
                        {"default_M", p.default_ensemble_size()},
                        {"eps_alg", p.eps_alg},
                        {"eps_imp", p.eps_imp}});
    }
    aggregates["sweeps"] = sweeps;
    return {};
  }
  double required_pass_fraction(std::string_view metric) const override {
    return preparation_fraction(metric);
  }

 private:
  std::vector<HamSimPlan> plans_;
};

class Qlsp : public ExperimentKind {
 public:
  std::string_view name() const override { return "qlsp"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.005); }
  json default_problem() const override {
    return {{"kappa", 8.0}, {"eps", 0.05}, {"delta", 0.05}, {"matrix", nullptr}, {"state", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "matrix", true, errors);
    check_state_field(p, "state", errors);
  }
  void prepare(const ExperimentConfig& cfg) override {
    ComplexMatrix a;
    if (present(cfg.problem, "matrix")) {
      a = matrix_from_json(cfg.problem.at("matrix"));
    } else {
      a = ComplexMatrix::Zero(4, 4);
      a.diagonal() << 1.0, -0.5, 0.25, 0.125;
    }
    std::size_t n = log2_exact(static_cast<std::size_t>(a.rows()));
    StateVector b = present(cfg.problem, "state")
                        ? StateVector::normalized(vector_from_json(cfg.problem.at("state")))
                        : StateVector::plus(n);
    for (double nu : cfg.nu_values) {
      plans_.push_back(plan_qlsp(QLSPProblem::make(a, b, get_real(cfg.problem, "kappa"),
                                                   get_real(cfg.problem, "eps"),
                                                   get_real(cfg.problem, "delta"), noise_at(cfg, nu))));
    }
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    const QLSPPlan& plan = plans_[t.sweep_index / cfg.m_values.size()];
    std::size_t m = t.m ? t.m : plan.default_ensemble_size();
    PreparedState out = qlsp_prepare_state(plan, m, trial_key(cfg, t), exec);
    StateVector oracle = StateVector::normalized(plan.problem.solution());
    std::vector<ReportRow> rows =
        preparation_rows(t, plan.problem.noise, m, out, oracle, plan.problem.eps);
    if (t.trial == 0) {
      rows.push_back(make_row(t, plan.degree(), plan.problem.noise, m, "inverse_certified_error",
                              plan.approximation.max_error(),
                              3.0 * plan.problem.eps / (8.0 * plan.problem.kappa)));
    }
    return rows;
  }
  std::vector<ReportRow> summarize(const ExperimentConfig& cfg, const std::vector<ReportRow>&,
                                   json& aggregates) const override {
    json sweeps = json::array();
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      const QLSPPlan& p = plans_[i];
      sweeps.push_back({{"nu", cfg.nu_values[i]},
                        {"kappa", p.problem.kappa},
                        {"degree", p.degree()},
                        {"eps_poly", p.eps_poly},
                        {"certified_error", p.approximation.max_error()},
                        {"success_bound", p.success_bound()},
                        {"default_M", p.default_ensemble_size()},
                        {"theorem_M", p.theorem_ensemble_size()}});
    }
    aggregates["sweeps"] = sweeps;
    return {};
  }
  double required_pass_fraction(std::string_view metric) const override {
    return preparation_fraction(metric);
  }

 private:
  std::vector<QLSPPlan> plans_;
};

class Gsp : public ExperimentKind {
 public:
  std::string_view name() const override { return "gsp"; }
  NoiseModel default_noise() const override { return NoiseModel::gaussian(0.005); }
  json default_problem() const override {
    return {{"spectrum", {0.15, 0.55, 0.7, 0.85}},
            {"overlap", 0.6},
            {"eta", 0.05},
            {"eps", 0.05},
            {"delta", 0.05},
            {"hamiltonian", nullptr},
            {"state", nullptr}};
  }
  void check_problem(const json& p, std::vector<std::string>& errors) const override {
    ExperimentKind::check_problem(p, errors);
    check_matrix_field(p, "hamiltonian", true, errors);
    check_state_field(p, "state", errors);
    const json& s = p.at("spectrum");
    bool ok = s.is_array() && s.size() >= 2 && (s.size() & (s.size() - 1)) == 0 &&
              std::all_of(s.begin(), s.end(), [](const json& v) { return v.is_number(); });
    if (!ok) errors.push_back("problem.spectrum: must be a list of 2^n numbers, n >= 1");
    const json& o = p.at("overlap");
    if (o.is_number() && !(o.get<double>() > 0.0 && o.get<double>() <= 1.0)) {
      errors.push_back("problem.overlap: must lie in (0, 1]");
    }
  }
  void prepare(const ExperimentConfig& cfg) override {
    SetupRandom rng(setup_key(cfg));
    ComplexMatrix h;
    StateVector phi0;
    if (present(cfg.problem, "hamiltonian")) {
      h = matrix_from_json(cfg.problem.at("hamiltonian"));
    } else {
      std::vector<double> spectrum = cfg.problem.at("spectrum").get<std::vector<double>>();
      std::sort(spectrum.begin(), spectrum.end());
      auto dim = static_cast<Eigen::Index>(spectrum.size());
      ComplexMatrix v = random_unitary(rng, dim);
      RealVector l = Eigen::Map<RealVector>(spectrum.data(), dim);
      h = v * l.cast<Complex>().asDiagonal() * v.adjoint();
      h = 0.5 * (h + h.adjoint());
    }
    if (present(cfg.problem, "state")) {
      phi0 = StateVector::normalized(vector_from_json(cfg.problem.at("state")));
    } else {
      // Overlap gamma with the ground state, the rest spread over excited states.
      HermitianEigen e = eigh(h);
      ComplexVector rest = ComplexVector::Zero(h.rows());
      for (Eigen::Index i = 1; i < h.rows(); ++i) rest += Complex(rng.normal(), rng.normal()) * e.vectors.col(i);
      rest.normalize();
      double g = get_real(cfg.problem, "overlap");
      phi0 = StateVector::normalized(g * e.vectors.col(0) + std::sqrt(1.0 - g * g) * rest);
    }
    for (double nu : cfg.nu_values) {
      plans_.push_back(plan_gsp(GSPProblem::make(h, phi0, get_real(cfg.problem, "eta"),
                                                 get_real(cfg.problem, "eps"),
                                                 get_real(cfg.problem, "delta"), noise_at(cfg, nu))));
    }
  }
  std::vector<ReportRow> run(const ExperimentConfig& cfg, const Task& t,
                             const Execution& exec) const override {
    const GSPPlan& plan = plans_[t.sweep_index / cfg.m_values.size()];
    std::size_t m = t.m ? t.m : plan.default_ensemble_size();
    PreparedState out = gsp_prepare_state(plan, m, trial_key(cfg, t), exec);
    std::vector<ReportRow> rows =
        preparation_rows(t, plan.problem.noise, m, out, plan.problem.ground_state, plan.problem.eps);
    if (t.trial == 0) {
      ComplexMatrix exact = matfunc_hermitian(plan.problem.h, [](double x) -> Complex { return std::cos(x); });
      rows.push_back(make_row(t, plan.degree(), plan.problem.noise, m, "qetu_block_error",
                              spectral_norm(encoded_block(plan.signal) - exact), 1e-12));
    }
    return rows;
  }
  std::vector<ReportRow> summarize(const ExperimentConfig& cfg, const std::vector<ReportRow>&,
                                   json& aggregates) const override {
    json sweeps = json::array();
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      const GSPPlan& p = plans_[i];
      sweeps.push_back({{"nu", cfg.nu_values[i]},
                        {"gamma", p.problem.gamma},
                        {"gap", p.problem.gap},
                        {"mu", p.problem.mu},
                        {"eta", p.problem.eta},
                        {"affine_scale", p.problem.scale},
                        {"affine_shift", p.problem.shift},
                        {"degree", p.degree()},
                        {"certified_error", p.approximation.max_error()},
                        {"success_bound", p.success_bound()},
                        {"default_M", p.default_ensemble_size()}});
    }
    aggregates["sweeps"] = sweeps;
    return {};
  }
  double required_pass_fraction(std::string_view metric) const override {
    if (metric == "success_bound_ratio") return 0.95;
    return preparation_fraction(metric);
  }

 private:
  std::vector<GSPPlan> plans_;
};

}  // namespace

std::vector<std::string> kind_names() {
  return {"expectation_check", "ensemble_convergence", "lcu_equivalence", "phase_roundtrip",
          "hadamard_unbiased", "observable",           "hsim",            "qlsp",
          "gsp"};
}

std::unique_ptr<ExperimentKind> make_kind(std::string_view name) {
  if (name == "expectation_check") return std::make_unique<ExpectationCheck>();
  if (name == "ensemble_convergence") return std::make_unique<EnsembleConvergence>();
  if (name == "lcu_equivalence") return std::make_unique<LcuEquivalence>();
  if (name == "phase_roundtrip") return std::make_unique<PhaseRoundtrip>();
  if (name == "hadamard_unbiased") return std::make_unique<HadamardUnbiased>();
  if (name == "observable") return std::make_unique<Observable>();
  if (name == "hsim") return std::make_unique<Hsim>();
  if (name == "qlsp") return std::make_unique<Qlsp>();
  if (name == "gsp") return std::make_unique<Gsp>();
  return nullptr;
}

}  // namespace enqsp

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

#ifndef ENQSP_SRC_EXPERIMENT_KINDS_H_
#define ENQSP_SRC_EXPERIMENT_KINDS_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "enqsp/experiment.h"
#include "enqsp/parallel.h"

namespace enqsp {

// A unit of independent work; its rows land in the report in index order.
struct Task {
  double nu = 0.0;
  std::size_t m = 0;
  std::int64_t trial = 0;
  std::size_t sweep_index = 0;
  std::string variant;
};

class ExperimentKind {
 public:
  virtual ~ExperimentKind() = default;

  virtual std::string_view name() const = 0;
  virtual NoiseModel default_noise() const = 0;
  virtual std::vector<std::size_t> default_m_values() const { return {0}; }
  virtual nlohmann::json default_problem() const = 0;
  // Appends "field: message" entries for invalid problem fields.
  virtual void check_problem(const nlohmann::json& problem, std::vector<std::string>& errors) const;

  // Builds shared state (problem instances, approximants, phases).
  virtual void prepare(const ExperimentConfig& config) = 0;
  virtual std::vector<Task> tasks(const ExperimentConfig& config) const;
  // `exec` is the parallelism available inside the task.
  virtual std::vector<ReportRow> run(const ExperimentConfig& config, const Task& task,
                                     const Execution& exec) const = 0;
  // Rows computed from all task rows (e.g. fitted slopes), plus aggregates.
  virtual std::vector<ReportRow> summarize(const ExperimentConfig& config,
                                           const std::vector<ReportRow>& rows,
                                           nlohmann::json& aggregates) const;
  // Fraction of rows of `metric` that must pass.
  virtual double required_pass_fraction(std::string_view metric) const;
};

std::unique_ptr<ExperimentKind> make_kind(std::string_view name);
std::vector<std::string> kind_names();

}  // namespace enqsp

#endif  // ENQSP_SRC_EXPERIMENT_KINDS_H_

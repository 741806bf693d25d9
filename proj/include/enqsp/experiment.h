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

#ifndef ENQSP_EXPERIMENT_H_
#define ENQSP_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "enqsp/noise.h"
#include "enqsp/numerics.h"

namespace enqsp {

// Every validation problem found in a config, one message per entry.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 0;
  std::uint32_t experiment_id = 0;
  std::size_t trials = 50;
  NoiseModel noise;
  // Ensemble sizes or shot counts; 0 selects the kind's budget formula.
  std::vector<std::size_t> m_values;
  // Noise parameters swept with the configured noise kind.
  std::vector<double> nu_values;
  nlohmann::json problem = nlohmann::json::object();
  std::string output;
  bool record_wall_time = false;

  // Fully defaulted JSON form.
  nlohmann::json to_json() const;
};

struct ReportRow {
  std::uint32_t experiment_id = 0;
  std::string kind;
  std::uint64_t seed = 0;
  std::int64_t trial = 0;  // -1 for rows aggregated over trials
  std::size_t d = 0;
  double nu = 0.0;
  double c_d = 1.0;
  std::size_t m = 0;
  std::string metric;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::optional<double> wall_time;
  std::string note;
};

std::vector<std::string> list_kinds();

// Parses and defaults a config, or throws ConfigError listing every problem.
ExperimentConfig validate_config(std::string_view text);

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
  bool write_files = true;
};

struct RunResult {
  std::vector<ReportRow> rows;
  nlohmann::json summary;
  bool pass = false;
  std::string csv_path;
  std::string summary_path;
};

RunResult run_experiment(ExperimentConfig config, const RunOptions& options = {});

// CSV with a header row and 17 significant digits for reals.
std::string rows_to_csv(const std::vector<ReportRow>& rows);

// Matrices are arrays of rows of [re, im] pairs; states are arrays of pairs.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexVector vector_from_json(const nlohmann::json& j);

nlohmann::json noise_to_json(const NoiseModel& model);
NoiseModel noise_from_json(const nlohmann::json& j);

}  // namespace enqsp

#endif  // ENQSP_EXPERIMENT_H_

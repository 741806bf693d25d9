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

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "enqsp/experiment.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

int threads_from_env() {
  const char* v = std::getenv("ENQSP_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "warning: ignoring ENQSP_THREADS=" << v << "\n";
    return 1;
  }
  return static_cast<int>(n);
}

// Parses and validates a config file, printing every problem on failure.
bool load(const std::string& path, enqsp::ExperimentConfig& config) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << path << ": cannot read file\n";
    return false;
  }
  try {
    config = enqsp::validate_config(text);
    return true;
  } catch (const enqsp::ConfigError& e) {
    for (const std::string& msg : e.errors()) std::cerr << path << ": " << msg << "\n";
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble QSP experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  std::uint64_t seed_override = 0;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--out-dir", out_dir, "Directory for report files");
  run->add_option("--threads", threads, "Worker threads (default: $ENQSP_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  CLI::Option* seed_opt = run->add_option("--seed-override", seed_override, "Replace the master seed");

  CLI::App* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Config JSON")->required();

  CLI::App* kinds = app.add_subcommand("list-kinds", "Print the experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfig;
  }

  if (*kinds) {
    for (const std::string& k : enqsp::list_kinds()) std::cout << k << "\n";
    return kExitPass;
  }

  enqsp::ExperimentConfig config;
  if (!load(config_path, config)) return kExitConfig;

  if (*validate) {
    std::cout << config.to_json().dump(2) << "\n";
    return kExitPass;
  }

  enqsp::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads > 0 ? threads : threads_from_env();
  if (*seed_opt) options.seed_override = seed_override;
  enqsp::RunResult result;
  try {
    result = enqsp::run_experiment(config, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }

  for (const auto& [metric, info] : result.summary.at("metrics").items()) {
    std::cout << (info.at("pass").get<bool>() ? "PASS " : "FAIL ") << metric << "  "
              << info.at("passed") << "/" << info.at("rows") << "\n";
  }
  std::cout << "rows:    " << result.csv_path << "\n"
            << "summary: " << result.summary_path << "\n";
  return result.pass ? kExitPass : kExitFail;
}

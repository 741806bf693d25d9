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

#include "enqsp/experiment.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "enqsp/parallel.h"
#include "experiment_kinds.h"

namespace enqsp {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

bool is_uint(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument("invalid config: " + join(errors, "; ")), errors_(std::move(errors)) {}

json noise_to_json(const NoiseModel& model) {
  return json{{"kind", std::string(noise_kind_name(model.kind))}, {"parameter", model.parameter}};
}

NoiseModel noise_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("noise must be an object {kind, parameter}");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("noise.kind must be a string");
  }
  NoiseKind kind = parse_noise_kind(j["kind"].get<std::string>());
  double parameter = 0.0;
  if (j.contains("parameter")) {
    if (!j["parameter"].is_number()) throw std::invalid_argument("noise.parameter must be a number");
    parameter = j["parameter"].get<double>();
  } else if (kind != NoiseKind::kNone) {
    throw std::invalid_argument("noise.parameter is required for kind " + j["kind"].get<std::string>());
  }
  return NoiseModel::checked(kind, parameter);
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  auto rows = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw std::invalid_argument("matrix must be square; row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw std::invalid_argument("matrix entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                    ") must be a [re, im] pair");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  log2_exact(static_cast<std::size_t>(rows));
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("state must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw std::invalid_argument("state entry " + std::to_string(i) + " must be a [re, im] pair");
    }
    v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

json ExperimentConfig::to_json() const {
  return json{{"kind", kind},
              {"seed", seed},
              {"experiment_id", experiment_id},
              {"trials", trials},
              {"noise", noise_to_json(noise)},
              {"sweep", {{"M", m_values}, {"nu", nu_values}}},
              {"problem", problem},
              {"output", output},
              {"record_wall_time", record_wall_time}};
}

std::vector<std::string> list_kinds() { return kind_names(); }

ExperimentConfig validate_config(std::string_view text) {
  std::vector<std::string> errors;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: invalid JSON: ") + e.what()});
  }
  if (!j.is_object()) throw ConfigError({"config: top level must be a JSON object"});

  static const char* kKnown[] = {"kind",   "seed",    "experiment_id", "trials",          "noise",
                                 "sweep",  "problem", "output",        "record_wall_time"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnown) known = known || it.key() == k;
    if (!known) errors.push_back(it.key() + ": unknown field");
  }

  ExperimentConfig cfg;
  std::unique_ptr<ExperimentKind> kind;
  std::string valid = join(kind_names(), ", ");
  if (!j.contains("kind")) {
    errors.push_back("kind: missing (valid kinds: " + valid + ")");
  } else if (!j["kind"].is_string()) {
    errors.push_back("kind: must be a string (valid kinds: " + valid + ")");
  } else {
    cfg.kind = j["kind"].get<std::string>();
    kind = make_kind(cfg.kind);
    if (!kind) errors.push_back("kind: unknown kind '" + cfg.kind + "' (valid kinds: " + valid + ")");
  }

  if (!j.contains("seed")) {
    errors.push_back("seed: missing");
  } else if (!is_uint(j["seed"])) {
    errors.push_back("seed: must be a non-negative 64-bit integer");
  } else {
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("experiment_id")) {
    if (!is_uint(j["experiment_id"]) || j["experiment_id"].get<std::uint64_t>() > 0xFFFF) {
      errors.push_back("experiment_id: must be an integer in [0, 65535]");
    } else {
      cfg.experiment_id = static_cast<std::uint32_t>(j["experiment_id"].get<std::uint64_t>());
    }
  }

  if (j.contains("trials")) {
    if (!is_uint(j["trials"]) || j["trials"].get<std::uint64_t>() == 0 ||
        j["trials"].get<std::uint64_t>() > 0xFFFE) {
      errors.push_back("trials: must be an integer in [1, 65534]");
    } else {
      cfg.trials = j["trials"].get<std::size_t>();
    }
  }

  if (kind) cfg.noise = kind->default_noise();
  if (j.contains("noise")) {
    try {
      cfg.noise = noise_from_json(j["noise"]);
    } catch (const std::exception& e) {
      errors.push_back(std::string("noise: ") + e.what());
    }
  }

  if (kind) cfg.m_values = kind->default_m_values();
  cfg.nu_values = {cfg.noise.parameter};
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) {
      errors.push_back("sweep: must be an object with optional M and nu lists");
    } else {
      for (auto it = s.begin(); it != s.end(); ++it) {
        if (it.key() != "M" && it.key() != "nu") errors.push_back("sweep." + it.key() + ": unknown field");
      }
      if (s.contains("M")) {
        const json& m = s["M"];
        if (!m.is_array() || m.empty()) {
          errors.push_back("sweep.M: must be a non-empty list of non-negative integers");
        } else {
          cfg.m_values.clear();
          for (const json& v : m) {
            if (!is_uint(v)) {
              errors.push_back("sweep.M: entries must be non-negative integers");
              break;
            }
            cfg.m_values.push_back(v.get<std::size_t>());
          }
        }
      }
      if (s.contains("nu")) {
        const json& nu = s["nu"];
        if (!nu.is_array() || nu.empty()) {
          errors.push_back("sweep.nu: must be a non-empty list of non-negative numbers");
        } else {
          cfg.nu_values.clear();
          for (const json& v : nu) {
            if (!v.is_number() || v.get<double>() < 0.0) {
              errors.push_back("sweep.nu: entries must be non-negative numbers");
              break;
            }
            cfg.nu_values.push_back(v.get<double>());
            try {
              NoiseModel::checked(cfg.noise.kind, v.get<double>());
            } catch (const std::exception& e) {
              errors.push_back(std::string("sweep.nu: ") + e.what());
              break;
            }
          }
        }
      }
    }
  }

  if (kind) cfg.problem = kind->default_problem();
  if (j.contains("problem")) {
    if (!j["problem"].is_object()) {
      errors.push_back("problem: must be an object");
    } else {
      const json defaults = cfg.problem;
      for (auto it = j["problem"].begin(); it != j["problem"].end(); ++it) {
        if (!defaults.contains(it.key())) {
          errors.push_back("problem." + it.key() + ": unknown field for kind " + cfg.kind);
        }
        cfg.problem[it.key()] = it.value();
      }
    }
  }
  if (kind) kind->check_problem(cfg.problem, errors);

  cfg.output = cfg.kind;
  if (j.contains("output")) {
    if (!j["output"].is_string() || j["output"].get<std::string>().empty()) {
      errors.push_back("output: must be a non-empty string");
    } else {
      cfg.output = j["output"].get<std::string>();
    }
  }
  if (j.contains("record_wall_time")) {
    if (!j["record_wall_time"].is_boolean()) {
      errors.push_back("record_wall_time: must be a boolean");
    } else {
      cfg.record_wall_time = j["record_wall_time"].get<bool>();
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "experiment_id,kind,seed,trial,d,nu,c_d,M,metric,value,bound,pass,wall_time_s,note\n";
  for (const ReportRow& r : rows) {
    out << r.experiment_id << ',' << r.kind << ',' << r.seed << ',' << r.trial << ',' << r.d << ','
        << format_real(r.nu) << ',' << format_real(r.c_d) << ',' << r.m << ',' << r.metric << ','
        << format_real(r.value) << ',' << format_real(r.bound) << ',' << (r.pass ? "true" : "false")
        << ',' << (r.wall_time ? format_real(*r.wall_time) : "") << ',' << csv_quote(r.note) << '\n';
  }
  return out.str();
}

RunResult run_experiment(ExperimentConfig config, const RunOptions& options) {
  if (options.seed_override) config.seed = *options.seed_override;
  std::unique_ptr<ExperimentKind> kind = make_kind(config.kind);
  if (!kind) throw ConfigError({"kind: unknown kind '" + config.kind + "'"});

  auto base_row = [&](const Task& t) {
    ReportRow r;
    r.experiment_id = config.experiment_id;
    r.kind = config.kind;
    r.seed = config.seed;
    r.trial = t.trial;
    r.nu = t.nu;
    r.m = t.m;
    return r;
  };
  auto failure_row = [&](const Task& t, const std::string& metric, const std::string& what) {
    ReportRow r = base_row(t);
    r.metric = metric;
    r.value = 1.0;
    r.bound = 0.0;
    r.note = what;
    return r;
  };

  std::vector<ReportRow> rows;
  std::vector<ReportRow> extra;
  json aggregates = json::object();
  bool setup_ok = true;
  try {
    kind->prepare(config);
  } catch (const std::exception& e) {
    setup_ok = false;
    rows.push_back(failure_row(Task{config.noise.parameter, 0, -1, 0, ""}, "setup_failure", e.what()));
  }
  if (setup_ok) {
    std::vector<Task> tasks = kind->tasks(config);
    std::vector<std::vector<ReportRow>> table(tasks.size());
    Execution outer{std::max(1, options.threads)};
    Execution inner{tasks.size() == 1 ? outer.threads : 1};
    parallel_for(tasks.size(), outer, [&](std::size_t i) {
      const Task& t = tasks[i];
      auto start = std::chrono::steady_clock::now();
      std::vector<ReportRow> out;
      try {
        out = kind->run(config, t, inner);
      } catch (const std::exception& e) {
        out = {failure_row(t, "task_failure", e.what())};
      }
      double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (ReportRow& r : out) {
        ReportRow b = base_row(t);
        r.experiment_id = b.experiment_id;
        r.kind = b.kind;
        r.seed = b.seed;
        if (config.record_wall_time) r.wall_time = seconds;
      }
      table[i] = std::move(out);
    });
    for (auto& part : table) {
      for (auto& r : part) rows.push_back(std::move(r));
    }
    try {
      extra = kind->summarize(config, rows, aggregates);
    } catch (const std::exception& e) {
      extra = {failure_row(Task{config.noise.parameter, 0, -1, 0, ""}, "summary_failure", e.what())};
    }
    for (ReportRow& r : extra) {
      r.experiment_id = config.experiment_id;
      r.kind = config.kind;
      r.seed = config.seed;
      rows.push_back(std::move(r));
    }
  }
  for (ReportRow& r : rows) r.pass = r.value <= r.bound;

  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::vector<std::string> order;
  for (const ReportRow& r : rows) {
    if (!counts.count(r.metric)) order.push_back(r.metric);
    auto& c = counts[r.metric];
    ++c.first;
    if (r.pass) ++c.second;
  }
  json metrics = json::object();
  bool pass = !rows.empty();
  for (const std::string& name : order) {
    auto [total, passed] = counts[name];
    double rate = static_cast<double>(passed) / static_cast<double>(total);
    double required = kind->required_pass_fraction(name);
    bool ok = rate >= required;
    pass = pass && ok;
    metrics[name] = {{"rows", total},
                     {"passed", passed},
                     {"pass_rate", rate},
                     {"required_pass_rate", required},
                     {"pass", ok}};
  }
  RunResult result;
  result.rows = std::move(rows);
  result.pass = pass;
  result.summary = {{"kind", config.kind},
                    {"seed", config.seed},
                    {"experiment_id", config.experiment_id},
                    {"config", config.to_json()},
                    {"rows", result.rows.size()},
                    {"metrics", metrics},
                    {"aggregates", aggregates},
                    {"pass", pass}};
  if (options.write_files) {
    std::filesystem::path dir(options.out_dir);
    std::filesystem::path prefix = dir / config.output;
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    result.csv_path = prefix.string() + ".rows.csv";
    result.summary_path = prefix.string() + ".summary.json";
    std::ofstream csv(result.csv_path, std::ios::binary);
    csv << rows_to_csv(result.rows);
    std::ofstream js(result.summary_path, std::ios::binary);
    js << result.summary.dump(2) << '\n';
    if (!csv || !js) throw std::runtime_error("failed to write report files under " + dir.string());
  }
  return result;
}

}  // namespace enqsp

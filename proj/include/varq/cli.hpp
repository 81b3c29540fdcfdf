// Copyright 2026 The varq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration and the train / eval / cost commands behind the varq
// executable. Kept in the library so the commands can be driven in-process.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "varq/ansatz.hpp"
#include "varq/cost.hpp"
#include "varq/dataset.hpp"
#include "varq/encoding.hpp"
#include "varq/errors.hpp"
#include "varq/trainer.hpp"

namespace varq {

using Json = nlohmann::ordered_json;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int optimization = 3;
}  // namespace exit_code

/// Everything needed to reproduce one training run.
struct RunConfig {
  std::string task = "setosa-vs-versicolor";
  std::string data;  // empty: fall back to $VARQ_DATA_DIR/iris.csv
  double test_fraction = 0.2;
  std::string ansatz = "ry_cz_ring";
  std::size_t layers = 4;
  std::size_t n = 2;
  std::size_t epochs = 100;
  double lr = 0.05;
  double fd_eps = 1e-3;
  UpdateCadence cadence = UpdateCadence::per_batch;
  std::uint64_t seed_split = 0;
  std::uint64_t seed_init = 7;
  std::uint64_t seed_batch = 11;
  std::size_t shots = 0;  // 0 means exact mode
  std::uint64_t seed_shots = 13;
  std::size_t readout = 0;
  double threshold = 0.5;
  std::string out_metrics;
  std::string out_summary;
  std::string out_params;

  TrainConfig train_config() const {
    TrainConfig t;
    t.n = n;
    t.epochs = epochs;
    t.learning_rate = lr;
    t.fd_epsilon = fd_eps;
    t.cadence = cadence;
    t.init_seed = seed_init;
    t.batch_seed = seed_batch;
    t.mode = shots == 0 ? SwapMode{ExactMode{}}
                        : SwapMode{ShotsMode{shots, seed_shots}};
    t.decision_threshold = threshold;
    t.readout = readout;
    return t;
  }
};

inline std::string_view cadence_name(UpdateCadence c) {
  return c == UpdateCadence::per_batch ? "per_batch" : "per_epoch";
}

inline Json to_json(const RunConfig& c) {
  return Json{{"task", c.task},
              {"data", c.data},
              {"test_fraction", c.test_fraction},
              {"ansatz", c.ansatz},
              {"layers", c.layers},
              {"n", c.n},
              {"epochs", c.epochs},
              {"lr", c.lr},
              {"fd_eps", c.fd_eps},
              {"cadence", cadence_name(c.cadence)},
              {"seed_split", c.seed_split},
              {"seed_init", c.seed_init},
              {"seed_batch", c.seed_batch},
              {"shots", c.shots},
              {"seed_shots", c.seed_shots},
              {"readout", c.readout},
              {"threshold", c.threshold},
              {"out_metrics", c.out_metrics},
              {"out_summary", c.out_summary},
              {"out_params", c.out_params}};
}

namespace detail {

template <typename T>
void read_key(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

}  // namespace detail

/// Starts from defaults and applies every key present in `j`. Unknown keys
/// are rejected.
inline RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  const Json known = to_json(c);
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  detail::read_key(j, "task", c.task);
  detail::read_key(j, "data", c.data);
  detail::read_key(j, "test_fraction", c.test_fraction);
  detail::read_key(j, "ansatz", c.ansatz);
  detail::read_key(j, "layers", c.layers);
  detail::read_key(j, "n", c.n);
  detail::read_key(j, "epochs", c.epochs);
  detail::read_key(j, "lr", c.lr);
  detail::read_key(j, "fd_eps", c.fd_eps);
  std::string cadence(cadence_name(c.cadence));
  detail::read_key(j, "cadence", cadence);
  if (cadence == "per_batch") {
    c.cadence = UpdateCadence::per_batch;
  } else if (cadence == "per_epoch") {
    c.cadence = UpdateCadence::per_epoch;
  } else {
    throw ConfigError("cadence must be per_batch or per_epoch");
  }
  detail::read_key(j, "seed_split", c.seed_split);
  detail::read_key(j, "seed_init", c.seed_init);
  detail::read_key(j, "seed_batch", c.seed_batch);
  detail::read_key(j, "shots", c.shots);
  detail::read_key(j, "seed_shots", c.seed_shots);
  detail::read_key(j, "readout", c.readout);
  detail::read_key(j, "threshold", c.threshold);
  detail::read_key(j, "out_metrics", c.out_metrics);
  detail::read_key(j, "out_summary", c.out_summary);
  detail::read_key(j, "out_params", c.out_params);
  return c;
}

/// Defaults < config file < command-line flags.
inline RunConfig merge_config(const Json& file, const Json& flags) {
  Json merged = file.is_null() ? Json::object() : file;
  if (!merged.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  for (const auto& [key, value] : flags.items()) merged[key] = value;
  return run_config_from_json(merged);
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Explicit path, else $VARQ_DATA_DIR/iris.csv.
inline std::filesystem::path resolve_data_path(const RunConfig& c) {
  if (!c.data.empty()) return c.data;
  if (const char* dir = std::getenv("VARQ_DATA_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / "iris.csv";
  }
  throw ConfigError("no dataset path: pass --data or set VARQ_DATA_DIR");
}

/// Checks every value against the modules that will consume it.
inline void validate(const RunConfig& c) {
  parse_task_name(c.task);
  make_ansatz(c.ansatz, 2, c.layers);
  c.train_config().validate();
  if (!(c.test_fraction >= 0.0 && c.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in [0, 1)");
  }
  if (c.n > 10) throw ConfigError("n must be at most 10");
}

/// Encoded train/test sets of the configured task.
struct PreparedTask {
  BinaryTask task;
  std::vector<EncodedSample> train;
  std::vector<EncodedSample> test;
  AnsatzSpec spec;
};

inline PreparedTask prepare_task(const RunConfig& c) {
  validate(c);
  const auto path = resolve_data_path(c);
  if (!std::filesystem::exists(path)) {
    throw ConfigError("dataset not found: " + path.string());
  }
  const auto records = load_iris(path);
  const auto [class0, class1] = parse_task_name(c.task);
  PreparedTask p{make_task(records, class0, class1, c.test_fraction,
                           c.seed_split),
                 {},
                 {},
                 {}};
  p.train = encode_dataset(p.task.train);
  p.test = encode_dataset(p.task.test);
  const std::size_t k = p.train.front().state.num_qubits();
  p.spec = make_ansatz(c.ansatz, k, c.layers);
  if (c.readout >= k) throw ConfigError("readout qubit is not a data qubit");
  return p;
}

inline Json accuracy_json(std::optional<double> a) {
  return a ? Json(*a) : Json(nullptr);
}

inline Json metrics_json(const EpochMetrics& m) {
  return Json{{"epoch", m.epoch},
              {"loss", m.loss},
              {"train_acc", m.train_accuracy},
              {"test_acc", accuracy_json(m.test_accuracy)}};
}

inline void write_params(const std::filesystem::path& path,
                         const ParameterVector& theta) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << Json(theta.values).dump() << '\n';
}

inline ParameterVector read_params(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  if (!j.is_array()) throw ConfigError("parameter file must be a JSON array");
  ParameterVector theta;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("parameters must be numbers");
    theta.values.push_back(v.get<double>());
  }
  return theta;
}

namespace detail {

inline std::string format_accuracy(std::optional<double> a) {
  if (!a) return "-";
  std::ostringstream s;
  s << std::setprecision(4) << *a;
  return s.str();
}

inline std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(out[0]));
  return out;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

}  // namespace detail

/// Trains the configured task and writes metrics, summary and parameters.
/// Returns a process exit code; diagnostics go to `err`.
inline int cmd_train(const RunConfig& config, std::ostream& out,
                     std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    PreparedTask p = prepare_task(config);
    std::optional<std::ofstream> metrics;
    if (!config.out_metrics.empty()) {
      metrics = detail::open_output(config.out_metrics);
    }
    const auto result =
        train(p.train, p.test, p.spec, config.train_config(), std::nullopt,
              [&](const EpochMetrics& m) {
                if (metrics) *metrics << metrics_json(m).dump() << '\n';
              });
    const auto& last = result.history.back();
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    if (!config.out_params.empty()) {
      write_params(config.out_params, result.theta);
    }
    RunConfig echo = config;
    echo.data = std::filesystem::absolute(resolve_data_path(config)).string();
    const Json summary{{"task", config.task},
                       {"class0", species_name(p.task.class0)},
                       {"class1", species_name(p.task.class1)},
                       {"final_loss", last.loss},
                       {"train_acc", last.train_accuracy},
                       {"test_acc", accuracy_json(last.test_accuracy)},
                       {"epochs", result.history.size()},
                       {"wall_time_s", seconds},
                       {"config", to_json(echo)}};
    if (!config.out_summary.empty()) {
      detail::open_output(config.out_summary) << summary.dump(2) << '\n';
    }

    out << std::left << std::setw(12) << "Class 0" << std::setw(12)
        << "Class 1" << std::setw(16) << "Train accuracy"
        << "Test accuracy\n";
    out << std::setw(12) << detail::capitalized(species_name(p.task.class0))
        << std::setw(12) << detail::capitalized(species_name(p.task.class1))
        << std::setw(16) << detail::format_accuracy(last.train_accuracy)
        << detail::format_accuracy(last.test_accuracy) << '\n';
    return exit_code::ok;
  } catch (const OptimizationError& e) {
    err << "optimization error: " << e.what() << '\n';
    return exit_code::optimization;
  } catch (const VarqError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_code::config;
  }
}

/// Recomputes train/test accuracy for a stored parameter file and prints it
/// as one JSON object.
inline int cmd_eval(const RunConfig& config,
                    const std::filesystem::path& params, std::ostream& out,
                    std::ostream& err) {
  try {
    PreparedTask p = prepare_task(config);
    const ParameterVector theta = read_params(params);
    check_parameters(p.spec, theta);
    const auto train_acc = accuracy(p.train, p.spec, theta, config.readout,
                                    config.threshold);
    const auto test_acc =
        accuracy(p.test, p.spec, theta, config.readout, config.threshold);
    out << Json{{"task", config.task},
                {"train_acc", accuracy_json(train_acc)},
                {"test_acc", accuracy_json(test_acc)}}
               .dump()
        << '\n';
    return exit_code::ok;
  } catch (const OptimizationError& e) {
    err << "optimization error: " << e.what() << '\n';
    return exit_code::optimization;
  } catch (const VarqError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_code::config;
  }
}

inline Json cost_row_json(const CostRow& row) {
  return Json{{"n", row.n},
              {"N", row.samples},
              {"hadamards", row.batched.hadamards},
              {"qram_routing", row.batched.qram_routing},
              {"ansatz_gates", row.batched.ansatz_gates},
              {"label_state_gates", row.batched.label_state_gates},
              {"swap_test_gates", row.batched.swap_test_gates},
              {"total", row.batched.primitive_ops()},
              {"sequential_baseline", row.sequential_baseline}};
}

/// Forward-pass cost rows for n in [n_min, n_max], one JSON object per line.
inline int cmd_cost(std::size_t n_min, std::size_t n_max,
                    const AnsatzSpec& spec, std::ostream& out,
                    std::ostream& err) {
  if (n_min < 1 || n_max > 20 || n_min > n_max) {
    err << "configuration error: n range must lie within 1..20\n";
    return exit_code::config;
  }
  for (std::size_t n = n_min; n <= n_max; ++n) {
    out << cost_row_json(cost_row(n, spec)).dump() << '\n';
  }
  return exit_code::ok;
}

}  // namespace varq

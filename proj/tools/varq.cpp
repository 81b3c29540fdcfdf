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

#include <cstddef>
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "varq/cli.hpp"

namespace {

// Flag values land here; only flags the user actually passed are copied into
// the override object, so config-file values survive otherwise.
struct Flags {
  std::string config;
  varq::RunConfig values;
  std::string cadence;
};

using OptionMap = std::vector<std::pair<CLI::Option*, std::string>>;

void add_run_flags(CLI::App& cmd, Flags& f, OptionMap& map) {
  auto& v = f.values;
  cmd.add_option("--config", f.config, "JSON run-configuration file");
  map.emplace_back(cmd.add_option("--task", v.task,
                                  "species pair, e.g. setosa-vs-versicolor"),
                   "task");
  map.emplace_back(cmd.add_option("--data", v.data, "Iris CSV path"), "data");
  map.emplace_back(
      cmd.add_option("--test-fraction", v.test_fraction, "held-out fraction"),
      "test_fraction");
  map.emplace_back(cmd.add_option("--ansatz", v.ansatz, "ansatz template"),
                   "ansatz");
  map.emplace_back(cmd.add_option("--layers", v.layers, "ansatz layers"),
                   "layers");
  map.emplace_back(cmd.add_option("--n", v.n, "control qubits per batch"),
                   "n");
  map.emplace_back(cmd.add_option("--epochs", v.epochs), "epochs");
  map.emplace_back(cmd.add_option("--lr", v.lr, "learning rate"), "lr");
  map.emplace_back(cmd.add_option("--fd-eps", v.fd_eps,
                                  "finite-difference step (radians)"),
                   "fd_eps");
  map.emplace_back(cmd.add_option("--cadence", f.cadence,
                                  "per_batch or per_epoch"),
                   "cadence");
  map.emplace_back(cmd.add_option("--seed-split", v.seed_split), "seed_split");
  map.emplace_back(cmd.add_option("--seed-init", v.seed_init), "seed_init");
  map.emplace_back(cmd.add_option("--seed-batch", v.seed_batch), "seed_batch");
  map.emplace_back(
      cmd.add_option("--shots", v.shots, "swap-test shots (0 = exact)"),
      "shots");
  map.emplace_back(cmd.add_option("--seed-shots", v.seed_shots), "seed_shots");
  map.emplace_back(cmd.add_option("--readout", v.readout, "readout qubit"),
                   "readout");
  map.emplace_back(cmd.add_option("--threshold", v.threshold), "threshold");
  map.emplace_back(cmd.add_option("--out-metrics", v.out_metrics,
                                  "JSON Lines metrics output"),
                   "out_metrics");
  map.emplace_back(
      cmd.add_option("--out-summary", v.out_summary, "summary JSON output"),
      "out_summary");
  map.emplace_back(
      cmd.add_option("--out-params", v.out_params, "parameter JSON output"),
      "out_params");
}

varq::Json collect_overrides(const Flags& f, const OptionMap& map) {
  const varq::Json all = varq::to_json(f.values);
  varq::Json out = varq::Json::object();
  for (const auto& [opt, key] : map) {
    if (opt->count() == 0) continue;
    out[key] = key == "cadence" ? varq::Json(f.cadence) : all.at(key);
  }
  return out;
}

varq::RunConfig resolve(const Flags& f, const OptionMap& map) {
  const varq::Json file =
      f.config.empty() ? varq::Json::object() : varq::read_json_file(f.config);
  return varq::merge_config(file, collect_overrides(f, map));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batched variational quantum classifier"};
  app.require_subcommand(1);

  Flags train_flags;
  OptionMap train_map;
  auto* train = app.add_subcommand("train", "train a classifier on Iris");
  add_run_flags(*train, train_flags, train_map);

  Flags eval_flags;
  OptionMap eval_map;
  std::string params;
  auto* eval = app.add_subcommand("eval", "score a saved parameter file");
  add_run_flags(*eval, eval_flags, eval_map);
  eval->add_option("--params", params, "parameter JSON file")->required();

  std::size_t n_min = 1;
  std::size_t n_max = 12;
  std::size_t k = 2;
  std::size_t layers = 4;
  std::string ansatz = "ry_cz_ring";
  auto* cost = app.add_subcommand("cost", "forward-pass cost table");
  cost->add_option("--n-min", n_min, "smallest n");
  cost->add_option("--n-max", n_max, "largest n");
  cost->add_option("--k", k, "data qubits");
  cost->add_option("--layers", layers, "ansatz layers");
  cost->add_option("--ansatz", ansatz, "ansatz template");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : varq::exit_code::config;
  }

  try {
    if (train->parsed()) {
      return varq::cmd_train(resolve(train_flags, train_map), std::cout,
                             std::cerr);
    }
    if (eval->parsed()) {
      return varq::cmd_eval(resolve(eval_flags, eval_map), params, std::cout,
                            std::cerr);
    }
    return varq::cmd_cost(n_min, n_max, varq::make_ansatz(ansatz, k, layers),
                          std::cout, std::cerr);
  } catch (const varq::VarqError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return varq::exit_code::config;
  }
}

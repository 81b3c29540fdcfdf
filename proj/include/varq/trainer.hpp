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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "varq/ansatz.hpp"
#include "varq/encoding.hpp"
#include "varq/errors.hpp"
#include "varq/loss.hpp"
#include "varq/qram.hpp"

namespace varq {

enum class UpdateCadence { per_batch, per_epoch };

struct TrainConfig {
  std::size_t n = 2;  // control qubits per batch
  std::size_t epochs = 100;
  double learning_rate = 0.05;
  double fd_epsilon = 1e-3;
  UpdateCadence cadence = UpdateCadence::per_batch;
  std::uint64_t init_seed = 7;
  std::uint64_t batch_seed = 11;
  SwapMode mode = ExactMode{};
  double decision_threshold = 0.5;
  QubitIndex readout = 0;

  void validate() const {
    if (n == 0) throw ConfigError("n must be at least 1");
    if (epochs == 0) throw ConfigError("epochs must be at least 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
      throw ConfigError("learning rate must be finite and non-negative");
    }
    if (!(fd_epsilon > 0.0) || !std::isfinite(fd_epsilon)) {
      throw ConfigError("finite-difference step must be positive");
    }
    if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0)) {
      throw ConfigError("decision threshold must lie in [0, 1]");
    }
    if (const auto* s = std::get_if<ShotsMode>(&mode); s && s->count == 0) {
      throw ConfigError("shot count must be positive");
    }
  }
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // mean over the epoch's batches
  double train_accuracy = 0.0;
  std::optional<double> test_accuracy;  // empty when there is no test set
};

struct TrainResult {
  ParameterVector theta;
  std::vector<EpochMetrics> history;
};

/// Central differences (L(theta + eps e_j) - L(theta - eps e_j)) / (2 eps).
template <typename LossFn>
std::vector<double> numerical_gradient(LossFn&& loss_fn,
                                       const ParameterVector& theta,
                                       double fd_epsilon) {
  if (!(fd_epsilon > 0.0)) {
    throw ConfigError("finite-difference step must be positive");
  }
  std::vector<double> grad(theta.size());
  ParameterVector probe = theta;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta.values[j] + fd_epsilon == theta.values[j] ||
        theta.values[j] - fd_epsilon == theta.values[j]) {
      // the parameter has grown past the step's floating-point resolution
      throw OptimizationError("parameter " + std::to_string(j) +
                              " diverged beyond the finite-difference step");
    }
    probe.values[j] = theta.values[j] + fd_epsilon;
    const double up = loss_fn(probe);
    probe.values[j] = theta.values[j] - fd_epsilon;
    const double down = loss_fn(probe);
    probe.values[j] = theta.values[j];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw OptimizationError("non-finite loss while probing parameter " +
                              std::to_string(j));
    }
    grad[j] = (up - down) / (2.0 * fd_epsilon);
  }
  return grad;
}

/// Splits the training set into balanced stores of 2^n samples.
///
/// Each class is shuffled with a generator seeded by seed + epoch; samples
/// that cannot fill a balanced batch sit out this epoch.
inline std::vector<QramStore> make_batches(
    std::span<const EncodedSample> train_set, std::size_t n,
    std::uint64_t seed, std::size_t epoch) {
  if (n == 0) throw ConfigError("n must be at least 1");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < train_set.size(); ++i) {
    by_class[to_int(train_set[i].label)].push_back(i);
  }
  const std::size_t half = std::size_t{1} << (n - 1);
  if (by_class[0].size() < half || by_class[1].size() < half) {
    throw DataError("need at least " + std::to_string(half) +
                    " samples of each class, have " +
                    std::to_string(by_class[0].size()) + " and " +
                    std::to_string(by_class[1].size()));
  }

  std::mt19937_64 rng(seed + epoch);
  std::shuffle(by_class[0].begin(), by_class[0].end(), rng);
  std::shuffle(by_class[1].begin(), by_class[1].end(), rng);

  const std::size_t count =
      std::min(by_class[0].size(), by_class[1].size()) / half;
  std::vector<QramStore> stores;
  stores.reserve(count);
  std::vector<EncodedSample> batch;
  for (std::size_t b = 0; b < count; ++b) {
    batch.clear();
    for (int c = 0; c < 2; ++c) {
      for (std::size_t j = 0; j < half; ++j) {
        batch.push_back(train_set[by_class[c][b * half + j]]);
      }
    }
    stores.push_back(build_store(batch));
  }
  return stores;
}

/// Probability of reading 1 on `readout` after A(theta) acts on the sample.
inline double readout_probability(const EncodedSample& sample,
                                  const AnsatzSpec& spec,
                                  const ParameterVector& theta,
                                  QubitIndex readout) {
  if (sample.state.num_qubits() != spec.k) {
    throw ConfigError("sample has " +
                      std::to_string(sample.state.num_qubits()) +
                      " qubits, ansatz expects " + std::to_string(spec.k));
  }
  return measure_probability(apply_ansatz(spec, theta, sample.state), readout,
                             1);
}

/// Class 1 when p1 >= threshold (ties go to class 1).
inline ClassBit classify(const EncodedSample& sample, const AnsatzSpec& spec,
                         const ParameterVector& theta, QubitIndex readout = 0,
                         double threshold = 0.5) {
  return readout_probability(sample, spec, theta, readout) >= threshold
             ? ClassBit::one
             : ClassBit::zero;
}

/// Fraction of samples classified correctly; empty for an empty set.
inline std::optional<double> accuracy(std::span<const EncodedSample> samples,
                                      const AnsatzSpec& spec,
                                      const ParameterVector& theta,
                                      QubitIndex readout = 0,
                                      double threshold = 0.5) {
  if (samples.empty()) return std::nullopt;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (classify(s, spec, theta, readout, threshold) == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

namespace detail {

// splitmix64 finalizer, used to give every shot-mode evaluation its own seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

using EpochObserver = std::function<void(const EpochMetrics&)>;

/// Gradient-descent training over batched swap-test losses.
///
/// `initial` overrides the seeded initialization when given. `observer` sees
/// each epoch's metrics as soon as they are computed.
inline TrainResult train(std::span<const EncodedSample> train_set,
                         std::span<const EncodedSample> test_set,
                         const AnsatzSpec& spec, const TrainConfig& config,
                         std::optional<ParameterVector> initial = std::nullopt,
                         const EpochObserver& observer = {}) {
  config.validate();
  if (train_set.empty()) throw DataError("training set is empty");
  if (config.readout >= spec.k) {
    throw ConfigError("readout qubit is not a data qubit");
  }
  for (const auto* set : {&train_set, &test_set}) {
    for (const auto& s : *set) {
      if (s.state.num_qubits() != spec.k) {
        throw ConfigError("sample qubit count does not match the ansatz");
      }
    }
  }

  TrainResult result;
  result.theta = initial ? std::move(*initial)
                         : init_parameters(spec, config.init_seed);
  check_parameters(spec, result.theta);

  const auto* shots = std::get_if<ShotsMode>(&config.mode);
  std::uint64_t evaluation = 0;
  auto loss_on = [&](const QramStore& store) {
    return [&, shots](const ParameterVector& theta) {
      SwapMode mode = ExactMode{};
      if (shots) {
        mode = ShotsMode{shots->count,
                         detail::mix_seed(shots->seed ^ detail::mix_seed(
                                                            ++evaluation))};
      }
      return batched_loss(store, spec, theta, mode, config.readout);
    };
  };

  ParameterVector& theta = result.theta;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto batches =
        make_batches(train_set, config.n, config.batch_seed, epoch);
    std::vector<double> summed(theta.size(), 0.0);
    double loss_sum = 0.0;
    try {
      for (const auto& store : batches) {
        auto fn = loss_on(store);
        const double loss = fn(theta);
        if (!std::isfinite(loss)) {
          throw OptimizationError("non-finite batch loss");
        }
        loss_sum += loss;
        const auto grad = numerical_gradient(fn, theta, config.fd_epsilon);
        if (config.cadence == UpdateCadence::per_batch) {
          for (std::size_t j = 0; j < theta.size(); ++j) {
            theta.values[j] -= config.learning_rate * grad[j];
          }
        } else {
          for (std::size_t j = 0; j < theta.size(); ++j) summed[j] += grad[j];
        }
      }
    } catch (const OptimizationError& e) {
      throw OptimizationError(e.what(), static_cast<long>(epoch));
    }
    if (config.cadence == UpdateCadence::per_epoch) {
      const double scale =
          config.learning_rate / static_cast<double>(batches.size());
      for (std::size_t j = 0; j < theta.size(); ++j) {
        theta.values[j] -= scale * summed[j];
      }
    }
    for (double v : theta.values) {
      if (!std::isfinite(v)) {
        throw OptimizationError("parameters diverged",
                                static_cast<long>(epoch));
      }
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.loss = loss_sum / static_cast<double>(batches.size());
    m.train_accuracy = *accuracy(train_set, spec, theta, config.readout,
                                 config.decision_threshold);
    m.test_accuracy = accuracy(test_set, spec, theta, config.readout,
                               config.decision_threshold);
    result.history.push_back(m);
    if (observer) observer(m);
  }
  return result;
}

}  // namespace varq

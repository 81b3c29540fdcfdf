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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "varq/errors.hpp"
#include "varq/statevector.hpp"

namespace varq {

enum class RotationAxis { Y, Z };
enum class Entangler { none, cz_ring };

/// Layered parameterized circuit A(theta) on k data qubits.
///
/// Each layer applies one rotation per axis in `rotations` to every qubit
/// (axis-major, qubit-minor), then the entangler. Parameters are ordered
/// layer-major.
struct AnsatzSpec {
  std::string name;
  std::size_t k = 0;
  std::size_t layers = 0;
  std::vector<RotationAxis> rotations;
  Entangler entangler = Entangler::cz_ring;

  std::size_t parameters_per_layer() const { return rotations.size() * k; }
  std::size_t parameter_count() const {
    return parameters_per_layer() * layers;
  }

  /// CZ pairs per layer: none for k == 1, a single pair for k == 2, k for a
  /// closed ring of k >= 3.
  std::size_t entanglers_per_layer() const {
    if (entangler == Entangler::none || k < 2) return 0;
    return k == 2 ? 1 : k;
  }

  std::size_t gate_count() const {
    return layers * (parameters_per_layer() + entanglers_per_layer());
  }
};

/// Trainable angles in radians.
struct ParameterVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

namespace detail {

inline void check_shape(std::size_t k, std::size_t layers) {
  if (k == 0) throw ConfigError("ansatz needs at least one data qubit");
  if (layers == 0) throw ConfigError("ansatz needs at least one layer");
}

}  // namespace detail

/// RY on every qubit, then CZ(q, q+1 mod k).
inline AnsatzSpec default_ansatz(std::size_t k, std::size_t layers) {
  detail::check_shape(k, layers);
  return {"ry_cz_ring", k, layers, {RotationAxis::Y}, Entangler::cz_ring};
}

/// Known template names: "ry_cz_ring" (default) and "ry_rz_cz_ring".
inline AnsatzSpec make_ansatz(const std::string& name, std::size_t k,
                              std::size_t layers) {
  if (name == "ry_cz_ring") return default_ansatz(k, layers);
  if (name == "ry_rz_cz_ring") {
    detail::check_shape(k, layers);
    return {name, k, layers, {RotationAxis::Y, RotationAxis::Z},
            Entangler::cz_ring};
  }
  throw ConfigError("unknown ansatz template '" + name + "'");
}

inline void check_parameters(const AnsatzSpec& spec,
                             const ParameterVector& theta) {
  if (theta.size() != spec.parameter_count()) {
    throw ConfigError("ansatz '" + spec.name + "' expects " +
                      std::to_string(spec.parameter_count()) +
                      " parameters, got " + std::to_string(theta.size()));
  }
  for (double v : theta.values) {
    if (!std::isfinite(v)) throw ConfigError("non-finite ansatz parameter");
  }
}

/// Uniform angles in [0, 2pi) from a seeded generator.
inline ParameterVector init_parameters(const AnsatzSpec& spec,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  ParameterVector theta;
  theta.values.resize(spec.parameter_count());
  for (auto& v : theta.values) v = angle(rng);
  return theta;
}

/// Gate list for A(theta) acting on `data_qubits` of a larger register.
inline std::vector<GateOp> ansatz_circuit(
    const AnsatzSpec& spec, const ParameterVector& theta,
    std::span<const QubitIndex> data_qubits) {
  check_parameters(spec, theta);
  if (data_qubits.size() != spec.k) {
    throw ConfigError("ansatz acts on " + std::to_string(spec.k) +
                      " qubits, got " + std::to_string(data_qubits.size()));
  }
  std::vector<GateOp> gates;
  gates.reserve(spec.gate_count());
  std::size_t p = 0;
  for (std::size_t layer = 0; layer < spec.layers; ++layer) {
    for (auto axis : spec.rotations) {
      for (std::size_t q = 0; q < spec.k; ++q) {
        const double a = theta.values[p++];
        gates.push_back(axis == RotationAxis::Y ? gate::ry(data_qubits[q], a)
                                                : gate::rz(data_qubits[q], a));
      }
    }
    const std::size_t pairs = spec.entanglers_per_layer();
    for (std::size_t q = 0; q < pairs; ++q) {
      gates.push_back(
          gate::cz(data_qubits[q], data_qubits[(q + 1) % spec.k]));
    }
  }
  return gates;
}

/// A(theta) (x) I on the full register.
inline StateVector apply_ansatz(const AnsatzSpec& spec,
                                const ParameterVector& theta,
                                StateVector state,
                                std::span<const QubitIndex> data_qubits) {
  const auto gates = ansatz_circuit(spec, theta, data_qubits);
  return apply_circuit(std::move(state), gates);
}

/// Convenience overload for a bare k-qubit sample state.
inline StateVector apply_ansatz(const AnsatzSpec& spec,
                                const ParameterVector& theta,
                                StateVector state) {
  std::vector<QubitIndex> qubits(spec.k);
  for (std::size_t q = 0; q < spec.k; ++q) qubits[q] = q;
  return apply_ansatz(spec, theta, std::move(state), qubits);
}

}  // namespace varq

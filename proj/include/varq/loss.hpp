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
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "varq/ansatz.hpp"
#include "varq/errors.hpp"
#include "varq/qram.hpp"
#include "varq/statevector.hpp"

namespace varq {

/// Target state over 1 + n qubits: the label qubit first, then n controls.
/// The label qubit is |0> on the lower half of addresses and |1> on the
/// upper half.
struct LabelState {
  StateVector state;
  std::size_t n = 0;
};

/// Gates of the label-preparation circuit: H on every control, then CNOT
/// from the first control onto the label qubit.
inline std::vector<GateOp> label_state_circuit(std::size_t n) {
  if (n == 0) throw ConfigError("label state needs at least one control");
  std::vector<GateOp> gates;
  for (std::size_t c = 1; c <= n; ++c) gates.push_back(gate::h(c));
  gates.push_back(gate::cnot(1, 0));
  return gates;
}

inline LabelState prepare_label_state(std::size_t n) {
  const auto gates = label_state_circuit(n);
  return {apply_circuit(StateVector(1 + n), gates), n};
}

/// Direct amplitude placement of the same state.
inline LabelState label_state_closed_form(std::size_t n) {
  if (n == 0) throw ConfigError("label state needs at least one control");
  const std::size_t cells = std::size_t{1} << n;
  const double a = 1.0 / std::sqrt(static_cast<double>(cells));
  std::vector<Complex> amps(2 * cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const std::size_t label = i < cells / 2 ? 0 : 1;
    amps[label * cells + i] = a;
  }
  return {StateVector::from_amplitudes(std::move(amps)), n};
}

struct ExactMode {};
struct ShotsMode {
  std::size_t count = 1024;
  std::uint64_t seed = 0;
};
using SwapMode = std::variant<ExactMode, ShotsMode>;

struct SwapTestResult {
  double p_zero = 1.0;
  double overlap = 1.0;  // 2 p_zero - 1
  std::optional<std::size_t> shots;  // empty in exact mode
};

/// Gate counts of the swap-test circuit comparing 1 + n qubit pairs.
struct SwapTestCost {
  std::size_t hadamards = 2;
  std::size_t cswaps = 0;
  std::size_t measurements = 1;

  std::size_t gates() const noexcept { return hadamards + cswaps; }
};

inline SwapTestCost swap_test_cost(std::size_t n) {
  return {2, n + 1, 1};
}

namespace detail {

inline void check_swap_layout(const StateVector& data_state,
                              const LabelState& label, QubitIndex readout,
                              std::span<const QubitIndex> controls) {
  if (controls.size() != label.n) {
    throw ConfigError("swap test: " + std::to_string(controls.size()) +
                      " control qubits for a label state with n = " +
                      std::to_string(label.n));
  }
  std::vector<QubitIndex> compared{readout};
  compared.insert(compared.end(), controls.begin(), controls.end());
  check_indices(data_state.num_qubits(), compared);
}

}  // namespace detail

/// Tr(rho_sub |Phi><Phi|), where rho_sub is the reduced state of
/// (readout, controls...) of `data_state`.
inline double subsystem_fidelity(const StateVector& data_state,
                                 const LabelState& label, QubitIndex readout,
                                 std::span<const QubitIndex> controls) {
  detail::check_swap_layout(data_state, label, readout, controls);
  std::vector<QubitIndex> keep{readout};
  keep.insert(keep.end(), controls.begin(), controls.end());
  return partial_trace(data_state, keep).expectation(label.state);
}

/// Simulates the ancilla swap test between the (readout, controls) subsystem
/// of `data_state` and the label state.
///
/// Register layout: ancilla, then the data-state qubits, then the label
/// qubits. Exact mode returns the ancilla-zero probability of the simulated
/// circuit; shots mode samples `count` ancilla outcomes from it.
inline SwapTestResult swap_test(const StateVector& data_state,
                                const LabelState& label, QubitIndex readout,
                                std::span<const QubitIndex> controls,
                                const SwapMode& mode = ExactMode{}) {
  detail::check_swap_layout(data_state, label, readout, controls);

  const std::size_t offset = 1;
  const std::size_t label_offset = 1 + data_state.num_qubits();
  StateVector reg = StateVector(1).tensor(data_state).tensor(label.state);

  apply_gate_inplace(reg, gate::h(0));
  apply_gate_inplace(reg, gate::cswap(0, offset + readout, label_offset));
  for (std::size_t j = 0; j < controls.size(); ++j) {
    apply_gate_inplace(
        reg, gate::cswap(0, offset + controls[j], label_offset + 1 + j));
  }
  apply_gate_inplace(reg, gate::h(0));
  const double p_zero = measure_probability(reg, 0, 0);

  if (const auto* shots = std::get_if<ShotsMode>(&mode)) {
    if (shots->count == 0) throw ConfigError("shot count must be positive");
    std::mt19937_64 rng(shots->seed);
    std::binomial_distribution<std::size_t> zeros(shots->count, p_zero);
    const double freq =
        static_cast<double>(zeros(rng)) / static_cast<double>(shots->count);
    return {freq, 2.0 * freq - 1.0, shots->count};
  }
  return {p_zero, 2.0 * p_zero - 1.0, std::nullopt};
}

/// Data state A(theta)|retrieved batch>, with data qubits first.
inline StateVector data_state(const QramStore& store, const AnsatzSpec& spec,
                              const ParameterVector& theta) {
  if (store.data_qubits() != spec.k) {
    throw ConfigError("store has " + std::to_string(store.data_qubits()) +
                      " data qubits, ansatz expects " +
                      std::to_string(spec.k));
  }
  std::vector<QubitIndex> data(spec.k);
  for (std::size_t q = 0; q < spec.k; ++q) data[q] = q;
  return apply_ansatz(spec, theta, query_superposed(store), data);
}

/// 1 - overlap of the swap test between the data state of `store` and the
/// label state; `readout` is a data-qubit index.
inline double batched_loss(const QramStore& store, const AnsatzSpec& spec,
                           const ParameterVector& theta,
                           const SwapMode& mode = ExactMode{},
                           QubitIndex readout = 0) {
  if (readout >= spec.k) {
    throw ConfigError("readout qubit " + std::to_string(readout) +
                      " is not a data qubit");
  }
  const StateVector psi = data_state(store, spec, theta);
  const std::size_t n = store.control_qubits();
  std::vector<QubitIndex> controls(n);
  for (std::size_t j = 0; j < n; ++j) controls[j] = spec.k + j;
  const auto result =
      swap_test(psi, prepare_label_state(n), readout, controls, mode);
  return 1.0 - result.overlap;
}

}  // namespace varq

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

#include <cstddef>

#include "varq/ansatz.hpp"
#include "varq/errors.hpp"
#include "varq/loss.hpp"
#include "varq/qram.hpp"

namespace varq {

/// Cost of evaluating the loss on a batch of N = 2^n samples in one pass.
/// n == 0 gives the cost of one sample on its own.
inline QueryCost forward_pass_cost(std::size_t n, const AnsatzSpec& spec) {
  QueryCost c = query_cost(n);
  c.ansatz_gates = spec.gate_count();
  c.label_state_gates = n + 1;  // H per control + one CNOT
  c.swap_test_gates = swap_test_cost(n).gates();
  return c;
}

/// One row of the batched-vs-sequential comparison.
struct CostRow {
  std::size_t n = 0;
  std::size_t samples = 0;  // N = 2^n
  QueryCost batched;
  std::size_t sequential_baseline = 0;  // N passes of a single sample
};

inline CostRow cost_row(std::size_t n, const AnsatzSpec& spec) {
  if (n > 62) throw ConfigError("n too large for the cost table");
  CostRow row;
  row.n = n;
  row.samples = std::size_t{1} << n;
  row.batched = forward_pass_cost(n, spec);
  row.sequential_baseline =
      row.samples * forward_pass_cost(0, spec).primitive_ops();
  return row;
}

}  // namespace varq

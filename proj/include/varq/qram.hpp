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

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varq/encoding.hpp"
#include "varq/errors.hpp"
#include "varq/statevector.hpp"

namespace varq {

/// Routing steps charged per level of the bucket-brigade address tree
/// (one activation plus one routing step).
inline constexpr std::size_t kRoutingConstant = 2;

/// Gate-level cost of one forward pass, split by circuit block.
struct QueryCost {
  std::size_t hadamards = 0;
  std::size_t qram_routing = 0;
  std::size_t ansatz_gates = 0;
  std::size_t label_state_gates = 0;
  std::size_t swap_test_gates = 0;

  std::size_t primitive_ops() const noexcept {
    return hadamards + qram_routing + ansatz_gates + label_state_gates +
           swap_test_gates;
  }
};

/// Write-once memory of 2^n encoded samples on k data qubits each.
///
/// Addresses below 2^(n-1) hold class-0 samples and the upper half holds
/// class-1 samples; write() enforces the partition.
class QramStore {
 public:
  QramStore(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (n == 0) throw BatchError("a store needs at least one control qubit");
    if (n + k > 40) throw BatchError("store too large to simulate");
    cells_.resize(std::size_t{1} << n);
  }

  std::size_t control_qubits() const noexcept { return n_; }
  std::size_t data_qubits() const noexcept { return k_; }
  std::size_t size() const noexcept { return cells_.size(); }

  static ClassBit label_for_address(std::size_t address, std::size_t n) {
    return address < (std::size_t{1} << (n - 1)) ? ClassBit::zero
                                                 : ClassBit::one;
  }

  void write(std::size_t address, EncodedSample sample) {
    if (address >= cells_.size()) {
      throw StoreError("address " + std::to_string(address) +
                       " out of range");
    }
    if (cells_[address]) {
      throw StoreError("address " + std::to_string(address) +
                       " already written");
    }
    if (sample.state.num_qubits() != k_) {
      throw StoreError("cell state has " +
                       std::to_string(sample.state.num_qubits()) +
                       " qubits, store expects " + std::to_string(k_));
    }
    if (sample.label != label_for_address(address, n_)) {
      throw StoreError("label of sample at address " +
                       std::to_string(address) +
                       " violates the class partition");
    }
    cells_[address] = std::move(sample);
  }

  bool is_populated() const {
    for (const auto& c : cells_) {
      if (!c) return false;
    }
    return true;
  }

  const EncodedSample& cell(std::size_t address) const {
    if (address >= cells_.size() || !cells_[address]) {
      throw StoreError("missing cell at address " + std::to_string(address));
    }
    return *cells_[address];
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::optional<EncodedSample>> cells_;
};

/// Lays a balanced batch out in a store: class 0 in the lower address half,
/// class 1 in the upper half, input order preserved within each half.
inline QramStore build_store(std::span<const EncodedSample> batch) {
  const std::size_t size = batch.size();
  if (size < 2 || !std::has_single_bit(size)) {
    throw BatchError("batch size " + std::to_string(size) +
                     " is not a power of two >= 2");
  }
  const std::size_t k = batch[0].state.num_qubits();
  std::size_t zeros = 0;
  for (const auto& s : batch) {
    if (s.state.num_qubits() != k) {
      throw BatchError("batch samples have different qubit counts");
    }
    if (s.label == ClassBit::zero) ++zeros;
  }
  if (zeros != size / 2) {
    throw BatchError("unbalanced batch: " + std::to_string(zeros) +
                     " class-0 samples out of " + std::to_string(size));
  }

  const auto n = static_cast<std::size_t>(std::countr_zero(size));
  QramStore store(n, k);
  std::size_t next0 = 0;
  std::size_t next1 = size / 2;
  for (const auto& s : batch) {
    store.write(s.label == ClassBit::zero ? next0++ : next1++, s);
  }
  return store;
}

/// (1/sqrt(2^n)) sum_i |psi_i>|i>: data qubits 0..k-1, controls k..k+n-1.
///
/// Built by amplitude placement; the hardware cost of this step is modelled
/// by query_cost() rather than simulated.
inline StateVector query_superposed(const QramStore& store) {
  const std::size_t n = store.control_qubits();
  const std::size_t k = store.data_qubits();
  const std::size_t cells = std::size_t{1} << n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(cells));

  std::vector<Complex> amps(cells << k);
  for (std::size_t i = 0; i < cells; ++i) {
    const StateVector& psi = store.cell(i).state;
    for (std::size_t x = 0; x < psi.dim(); ++x) {
      amps[x * cells + i] = psi[x] * scale;
    }
  }
  return StateVector::from_amplitudes(std::move(amps));
}

/// Retrieval cost for a store with n control qubits: one Hadamard per control
/// and kRoutingConstant routing steps per address-tree level.
inline QueryCost query_cost(std::size_t n) {
  QueryCost c;
  c.hadamards = n;
  c.qram_routing = kRoutingConstant * n;
  return c;
}

inline QueryCost query_cost(const QramStore& store) {
  return query_cost(store.control_qubits());
}

// Store file: u32 n, u32 k, then 2^n cells of 2^k (re, im) pairs, all
// little-endian, doubles in IEEE-754 binary64.

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<unsigned char>(bits >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  if (!in.read(reinterpret_cast<char*>(b), bytes)) {
    throw StoreError("truncated store file");
  }
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace detail

inline void save_store(const QramStore& store,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StoreError("cannot open " + path.string() + " for writing");
  detail::put_u32(out, static_cast<std::uint32_t>(store.control_qubits()));
  detail::put_u32(out, static_cast<std::uint32_t>(store.data_qubits()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    for (const Complex& a : store.cell(i).state.amplitudes()) {
      detail::put_f64(out, a.real());
      detail::put_f64(out, a.imag());
    }
  }
  if (!out) throw StoreError("failed writing " + path.string());
}

/// Labels are recovered from the address partition.
inline QramStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot open " + path.string());
  const auto n = static_cast<std::size_t>(detail::get_le(in, 4));
  const auto k = static_cast<std::size_t>(detail::get_le(in, 4));
  if (n == 0 || n + k > 40) throw StoreError("implausible store header");

  QramStore store(n, k);
  for (std::size_t i = 0; i < store.size(); ++i) {
    std::vector<Complex> amps(std::size_t{1} << k);
    for (auto& a : amps) {
      const double re = std::bit_cast<double>(detail::get_le(in, 8));
      const double im = std::bit_cast<double>(detail::get_le(in, 8));
      a = {re, im};
    }
    StateVector psi = [&] {
      try {
        return StateVector::from_amplitudes(std::move(amps));
      } catch (const ConfigError& e) {
        throw StoreError("cell " + std::to_string(i) + ": " + e.what());
      }
    }();
    store.write(i, EncodedSample{std::move(psi),
                                 QramStore::label_for_address(i, n),
                                 std::nullopt});
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw StoreError("trailing bytes in store file");
  }
  return store;
}

}  // namespace varq

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
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varq/errors.hpp"

namespace varq {

using Complex = std::complex<double>;
using QubitIndex = std::size_t;

inline constexpr double kNormTolerance = 1e-10;

/// Dense statevector over `num_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so for three
/// qubits the basis index of |q0 q1 q2> is 4*q0 + 2*q1 + q2.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(std::size_t num_qubits = 0)
      : num_qubits_(num_qubits), amplitudes_(dimension_for(num_qubits)) {
    amplitudes_[0] = 1.0;
  }

  static StateVector basis(std::size_t num_qubits, std::size_t index) {
    StateVector out(num_qubits);
    if (index >= out.dim()) {
      throw ConfigError("basis index " + std::to_string(index) +
                        " out of range for " + std::to_string(num_qubits) +
                        " qubits");
    }
    out.amplitudes_[0] = 0.0;
    out.amplitudes_[index] = 1.0;
    return out;
  }

  /// Takes ownership of `amplitudes`. The length must be a power of two and
  /// the norm must already be 1 within kNormTolerance.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes) {
    StateVector out = wrap(std::move(amplitudes));
    const double norm = out.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw ConfigError("amplitudes are not normalized (norm " +
                        std::to_string(norm) + ")");
    }
    return out;
  }

  /// Like from_amplitudes but rescales to unit norm first.
  static StateVector normalized(std::vector<Complex> amplitudes) {
    StateVector out = wrap(std::move(amplitudes));
    const double norm = out.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ConfigError("cannot normalize a zero or non-finite vector");
    }
    for (auto& a : out.amplitudes_) a /= norm;
    return out;
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
  }

  /// Bit mask selecting `qubit` inside a basis index.
  std::size_t mask(QubitIndex qubit) const noexcept {
    return std::size_t{1} << (num_qubits_ - 1 - qubit);
  }

  /// |this> (x) |other>, with this register's qubits first.
  StateVector tensor(const StateVector& other) const {
    std::vector<Complex> out(dim() * other.dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t j = 0; j < other.dim(); ++j) {
        out[i * other.dim() + j] = amplitudes_[i] * other.amplitudes_[j];
      }
    }
    return wrap(std::move(out));
  }

  // Mutable access is reserved for gate kernels.
  std::vector<Complex>& raw() noexcept { return amplitudes_; }

 private:
  static std::size_t dimension_for(std::size_t num_qubits) {
    if (num_qubits >= 8 * sizeof(std::size_t) - 1) {
      throw ConfigError("too many qubits: " + std::to_string(num_qubits));
    }
    return std::size_t{1} << num_qubits;
  }

  static StateVector wrap(std::vector<Complex> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n == 0 || (n & (n - 1)) != 0) {
      throw ConfigError("amplitude count " + std::to_string(n) +
                        " is not a power of two");
    }
    StateVector out;
    out.num_qubits_ = static_cast<std::size_t>(std::countr_zero(n));
    out.amplitudes_ = std::move(amplitudes);
    return out;
  }

  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Reduced state of a subset of qubits, stored row-major.
class DensityMatrix {
 public:
  explicit DensityMatrix(std::size_t num_qubits)
      : num_qubits_(num_qubits),
        dim_(std::size_t{1} << num_qubits),
        entries_(dim_ * dim_) {}

  /// |psi><psi|
  static DensityMatrix projector(const StateVector& psi) {
    DensityMatrix out(psi.num_qubits());
    for (std::size_t r = 0; r < out.dim_; ++r) {
      for (std::size_t c = 0; c < out.dim_; ++c) {
        out(r, c) = psi[r] * std::conj(psi[c]);
      }
    }
    return out;
  }

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t row, std::size_t col) {
    return entries_[row * dim_ + col];
  }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// <psi| rho |psi>
  double expectation(const StateVector& psi) const {
    if (psi.dim() != dim_) {
      throw ConfigError("dimension mismatch in density-matrix expectation");
    }
    Complex acc = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      Complex row = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) row += (*this)(r, c) * psi[c];
      acc += std::conj(psi[r]) * row;
    }
    return acc.real();
  }

  /// Largest |rho(r,c) - conj(rho(c,r))|.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        worst = std::max(worst,
                         std::abs((*this)(r, c) - std::conj((*this)(c, r))));
      }
    }
    return worst;
  }

 private:
  std::size_t num_qubits_;
  std::size_t dim_;
  std::vector<Complex> entries_;
};

enum class GateKind { H, X, RY, RZ, CNOT, CZ, CSWAP };

/// One gate of a circuit. `targets` and `controls` hold register indices.
struct GateOp {
  GateKind kind;
  std::vector<QubitIndex> targets;
  std::vector<QubitIndex> controls;
  double angle = 0.0;  // radians, RY and RZ only
};

namespace gate {

inline GateOp h(QubitIndex q) { return {GateKind::H, {q}, {}}; }
inline GateOp x(QubitIndex q) { return {GateKind::X, {q}, {}}; }
inline GateOp ry(QubitIndex q, double angle) {
  return {GateKind::RY, {q}, {}, angle};
}
inline GateOp rz(QubitIndex q, double angle) {
  return {GateKind::RZ, {q}, {}, angle};
}
inline GateOp cnot(QubitIndex control, QubitIndex target) {
  return {GateKind::CNOT, {target}, {control}};
}
inline GateOp cz(QubitIndex a, QubitIndex b) {
  return {GateKind::CZ, {b}, {a}};
}
inline GateOp cswap(QubitIndex control, QubitIndex a, QubitIndex b) {
  return {GateKind::CSWAP, {a, b}, {control}};
}

}  // namespace gate

namespace detail {

inline void check_indices(std::size_t num_qubits,
                          std::span<const QubitIndex> qubits) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] >= num_qubits) {
      throw ConfigError("qubit index " + std::to_string(qubits[i]) +
                        " out of range for " + std::to_string(num_qubits) +
                        " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (qubits[i] == qubits[j]) {
        throw ConfigError("duplicate qubit index " +
                          std::to_string(qubits[i]));
      }
    }
  }
}

inline void validate(const GateOp& g, std::size_t num_qubits) {
  std::size_t want_targets = 1;
  std::size_t want_controls = 0;
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::RY:
    case GateKind::RZ:
      break;
    case GateKind::CNOT:
    case GateKind::CZ:
      want_controls = 1;
      break;
    case GateKind::CSWAP:
      want_targets = 2;
      want_controls = 1;
      break;
  }
  if (g.targets.size() != want_targets || g.controls.size() != want_controls) {
    throw ConfigError("wrong number of qubits for gate");
  }
  std::vector<QubitIndex> all(g.targets);
  all.insert(all.end(), g.controls.begin(), g.controls.end());
  check_indices(num_qubits, all);
}

// Applies a 2x2 matrix [[m00, m01], [m10, m11]] to `target` on every
// amplitude pair whose index has all bits of `control_mask` set.
inline void apply_1q(std::vector<Complex>& amps, std::size_t target_mask,
                     std::size_t control_mask, Complex m00, Complex m01,
                     Complex m10, Complex m11) {
  const std::size_t dim = amps.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & target_mask) || (i & control_mask) != control_mask) continue;
    const std::size_t j = i | target_mask;
    const Complex a0 = amps[i];
    const Complex a1 = amps[j];
    amps[i] = m00 * a0 + m01 * a1;
    amps[j] = m10 * a0 + m11 * a1;
  }
}

}  // namespace detail

/// Applies `g` in place. Throws ConfigError on bad indices.
inline void apply_gate_inplace(StateVector& state, const GateOp& g) {
  detail::validate(g, state.num_qubits());
  auto& amps = state.raw();
  const std::size_t t = state.mask(g.targets[0]);
  std::size_t cmask = 0;
  for (auto c : g.controls) cmask |= state.mask(c);

  switch (g.kind) {
    case GateKind::H: {
      const double r = std::numbers::sqrt2 / 2.0;
      detail::apply_1q(amps, t, 0, r, r, r, -r);
      break;
    }
    case GateKind::X:
      detail::apply_1q(amps, t, 0, 0.0, 1.0, 1.0, 0.0);
      break;
    case GateKind::RY: {
      const double c = std::cos(g.angle / 2.0);
      const double s = std::sin(g.angle / 2.0);
      detail::apply_1q(amps, t, 0, c, -s, s, c);
      break;
    }
    case GateKind::RZ: {
      const Complex lo = std::polar(1.0, -g.angle / 2.0);
      const Complex hi = std::polar(1.0, g.angle / 2.0);
      detail::apply_1q(amps, t, 0, lo, 0.0, 0.0, hi);
      break;
    }
    case GateKind::CNOT:
      detail::apply_1q(amps, t, cmask, 0.0, 1.0, 1.0, 0.0);
      break;
    case GateKind::CZ: {
      const std::size_t both = t | cmask;
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & both) == both) amps[i] = -amps[i];
      }
      break;
    }
    case GateKind::CSWAP: {
      const std::size_t a = t;
      const std::size_t b = state.mask(g.targets[1]);
      for (std::size_t i = 0; i < amps.size(); ++i) {
        // visit each swapped pair once: control set, a=1, b=0
        if ((i & cmask) == cmask && (i & a) && !(i & b)) {
          std::swap(amps[i], amps[(i & ~a) | b]);
        }
      }
      break;
    }
  }
}

inline StateVector apply_gate(StateVector state, const GateOp& g) {
  apply_gate_inplace(state, g);
  return state;
}

inline StateVector apply_circuit(StateVector state,
                                 std::span<const GateOp> gates) {
  for (const auto& g : gates) apply_gate_inplace(state, g);
  return state;
}

inline StateVector hadamard_layer(StateVector state,
                                  std::span<const QubitIndex> qubits) {
  detail::check_indices(state.num_qubits(), qubits);
  for (auto q : qubits) apply_gate_inplace(state, gate::h(q));
  return state;
}

/// Probability that measuring `qubit` yields `outcome`.
inline double measure_probability(const StateVector& state, QubitIndex qubit,
                                  int outcome) {
  if (qubit >= state.num_qubits()) {
    throw ConfigError("qubit index " + std::to_string(qubit) +
                      " out of range");
  }
  if (outcome != 0 && outcome != 1) {
    throw ConfigError("measurement outcome must be 0 or 1");
  }
  const std::size_t m = state.mask(qubit);
  const std::size_t want = outcome ? m : 0;
  double p = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if ((i & m) == want) p += std::norm(state[i]);
  }
  return std::min(1.0, p);
}

/// <a|b>, conjugate-linear in `a`.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ConfigError("inner product of states with different qubit counts");
  }
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

/// Reduced density matrix of `keep`, ordered as given (keep[0] becomes the
/// most significant qubit of the result).
inline DensityMatrix partial_trace(const StateVector& state,
                                   std::span<const QubitIndex> keep) {
  if (keep.empty()) throw ConfigError("partial_trace needs qubits to keep");
  detail::check_indices(state.num_qubits(), keep);

  const std::size_t k = keep.size();
  const std::size_t rest_qubits = state.num_qubits() - k;
  std::size_t keep_mask = 0;
  for (auto q : keep) keep_mask |= state.mask(q);

  // Group amplitudes into columns v_r[a] = psi[a, r], then sum v_r v_r^dag.
  const std::size_t kdim = std::size_t{1} << k;
  const std::size_t rdim = std::size_t{1} << rest_qubits;
  std::vector<Complex> grouped(kdim * rdim);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t a = 0;
    for (std::size_t j = 0; j < k; ++j) {
      a = (a << 1) | ((i & state.mask(keep[j])) ? 1u : 0u);
    }
    std::size_t r = 0;
    for (QubitIndex q = 0; q < state.num_qubits(); ++q) {
      const std::size_t m = state.mask(q);
      if (keep_mask & m) continue;
      r = (r << 1) | ((i & m) ? 1u : 0u);
    }
    grouped[r * kdim + a] = state[i];
  }

  DensityMatrix rho(k);
  for (std::size_t r = 0; r < rdim; ++r) {
    const Complex* v = &grouped[r * kdim];
    for (std::size_t row = 0; row < kdim; ++row) {
      if (v[row] == Complex{}) continue;
      for (std::size_t col = 0; col < kdim; ++col) {
        rho(row, col) += v[row] * std::conj(v[col]);
      }
    }
  }
  return rho;
}

}  // namespace varq

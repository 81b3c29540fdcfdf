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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varq/errors.hpp"
#include "varq/statevector.hpp"

namespace varq {

enum class ClassBit : std::uint8_t { zero = 0, one = 1 };

inline int to_int(ClassBit b) noexcept { return static_cast<int>(b); }

/// A classical sample x in R^d with its binary label.
struct FeatureVector {
  std::vector<double> values;
  ClassBit label = ClassBit::zero;
};

/// Amplitude-encoded sample. `source` is empty for stores read from disk.
struct EncodedSample {
  StateVector state;
  ClassBit label = ClassBit::zero;
  std::optional<FeatureVector> source;
};

/// ceil(log2 d); 0 for d == 1.
inline std::size_t qubits_for_dimension(std::size_t d) {
  if (d == 0) throw EncodingError("feature dimension must be at least 1");
  return static_cast<std::size_t>(std::bit_width(d - 1));
}

/// Maps x to sum_i x_i/|x| |i>, zero-padded up to 2^ceil(log2 d).
inline EncodedSample amplitude_encode(const FeatureVector& x) {
  const std::size_t k = qubits_for_dimension(x.values.size());
  double sumsq = 0.0;
  for (double v : x.values) {
    if (!std::isfinite(v)) throw EncodingError("non-finite feature value");
    sumsq += v * v;
  }
  if (sumsq == 0.0) throw EncodingError("cannot encode an all-zero vector");
  const double norm = std::sqrt(sumsq);

  std::vector<Complex> amps(std::size_t{1} << k);
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    amps[i] = x.values[i] / norm;
  }
  return EncodedSample{StateVector::from_amplitudes(std::move(amps)), x.label,
                       x};
}

inline std::vector<EncodedSample> encode_dataset(
    std::span<const FeatureVector> samples) {
  std::vector<EncodedSample> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].values.size() != samples[0].values.size()) {
      throw EncodingError("sample " + std::to_string(i) + " has dimension " +
                          std::to_string(samples[i].values.size()) +
                          ", expected " +
                          std::to_string(samples[0].values.size()));
    }
    out.push_back(amplitude_encode(samples[i]));
  }
  return out;
}

}  // namespace varq

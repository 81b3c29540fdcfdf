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
#include <stdexcept>
#include <string>

namespace varq {

/// Root of every exception thrown by the library.
class VarqError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid qubit indices, shape mismatches and out-of-range settings.
class ConfigError : public VarqError {
 public:
  using VarqError::VarqError;
};

/// A feature vector that cannot be amplitude-encoded.
class EncodingError : public VarqError {
 public:
  using VarqError::VarqError;
};

/// A batch that cannot be laid out in a qRAM store.
class BatchError : public VarqError {
 public:
  using VarqError::VarqError;
};

/// A store that is incomplete, inconsistent or unreadable.
class StoreError : public VarqError {
 public:
  using VarqError::VarqError;
};

/// Not enough samples to form the requested batches.
class DataError : public VarqError {
 public:
  using VarqError::VarqError;
};

/// Malformed dataset file. Carries the 1-based line number when known.
class IngestionError : public VarqError {
 public:
  explicit IngestionError(const std::string& what, std::size_t line = 0)
      : VarqError(line == 0 ? what
                            : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Unknown or unusable species pairing.
class TaskError : public VarqError {
 public:
  using VarqError::VarqError;
};

/// Non-finite losses or gradients during training.
class OptimizationError : public VarqError {
 public:
  explicit OptimizationError(const std::string& what, long epoch = -1)
      : VarqError(epoch < 0 ? what
                            : "epoch " + std::to_string(epoch) + ": " + what),
        epoch_(epoch) {}

  /// Epoch index at which the failure happened, or -1.
  long epoch() const noexcept { return epoch_; }

 private:
  long epoch_;
};

}  // namespace varq

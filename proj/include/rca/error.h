// Copyright 2026 The RCA Toolkit Authors.
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

#ifndef RCA_ERROR_H_
#define RCA_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rca {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape disagreement between operands, or an index out of range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented invariant (negative weights, bad row sums, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A row whose clamped sum is zero cannot be renormalized.
class DegenerateRowError : public Error {
 public:
  explicit DegenerateRowError(std::size_t row)
      : Error("degenerate row " + std::to_string(row) +
              ": no strictly positive entry after clamping"),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Recall is undefined when there is no ground truth to recall.
class UndefinedRecallError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class NoGroundTruthError : public Error {
 public:
  using Error::Error;
};

// Malformed dataset or fixture file; the message names the offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public IoError {
 public:
  using IoError::IoError;
};

// RCAD container errors. Each failure mode has its own type.
class DumpFormatError : public Error {
 public:
  using Error::Error;
};
class BadMagicError : public DumpFormatError {
 public:
  using DumpFormatError::DumpFormatError;
};
class UnsupportedVersionError : public DumpFormatError {
 public:
  using DumpFormatError::DumpFormatError;
};
class LengthMismatchError : public DumpFormatError {
 public:
  using DumpFormatError::DumpFormatError;
};
class ChecksumError : public DumpFormatError {
 public:
  using DumpFormatError::DumpFormatError;
};

}  // namespace rca

#endif  // RCA_ERROR_H_

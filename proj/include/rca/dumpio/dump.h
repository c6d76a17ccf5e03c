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

// RCAD: on-disk container for one (image, query) attention snapshot.
//
// Layout, all integers and floats little-endian:
//
//   "RCAD"                      4 bytes
//   version                     u32
//   n, H, d_v                   3 x u32
//   flags                       u8   bit0 values, bit1 hidden, bit2 theta_hint
//   metadata length             u32
//   metadata                    UTF-8 JSON object
//   attention                   H*n*n f32
//   values                      n*d_v f32 (if flagged)
//   hidden                      n*d_v f32 (if flagged)
//
// The metadata object holds image_id, category, theta_hint, the free-form
// string map and "payload_crc32", the CRC-32 of every payload byte.

#ifndef RCA_DUMPIO_DUMP_H_
#define RCA_DUMPIO_DUMP_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rca/core/attention.h"

namespace rca::dumpio {

inline constexpr char kRcadMagic[4] = {'R', 'C', 'A', 'D'};
inline constexpr std::uint32_t kRcadVersion = 1;
// Fixed-size header after magic and version: n, H, d_v, flags.
inline constexpr std::size_t kRcadHeaderBytes = 13;
// f32 storage widens row-sum tolerance.
inline constexpr double kDumpRowSumTolerance = 1e-4;

struct AttentionDump {
  std::uint32_t schema_version = kRcadVersion;
  std::string image_id;
  std::string category;
  std::uint32_t tokens = 0;
  std::uint32_t heads = 0;
  std::uint32_t dims = 0;
  std::vector<float> attention;
  std::optional<std::vector<float>> values;
  std::optional<std::vector<float>> hidden;
  std::optional<double> theta_hint;
  std::map<std::string, std::string> metadata;

  // Throws DimensionError when payload sizes disagree with the declared
  // dimensions and InvalidInputError when attention rows are not
  // stochastic within kDumpRowSumTolerance.
  void Validate() const;

  // Widened 64-bit views for the numerics core.
  core::AttentionStack stack() const;
  core::ValueMatrix value_matrix() const;     // throws InvalidInputError if absent
  core::HiddenStates hidden_states() const;   // throws InvalidInputError if absent

  friend bool operator==(const AttentionDump&, const AttentionDump&) = default;
};

// Narrowing constructor from core types.
AttentionDump make_dump(const core::AttentionStack& stack,
                        const std::optional<core::ValueMatrix>& values,
                        const std::optional<core::HiddenStates>& hidden);

std::vector<std::uint8_t> encode_dump(const AttentionDump& dump);
AttentionDump decode_dump(const std::vector<std::uint8_t>& bytes);

// Validates before writing. Throws IoError on write failure.
void write_dump(const AttentionDump& dump, const std::filesystem::path& path);

// Throws NotFoundError, BadMagicError, UnsupportedVersionError,
// LengthMismatchError or ChecksumError.
AttentionDump read_dump(const std::filesystem::path& path);

// Every *.rcad file in `dir`, in file-name order.
std::vector<std::filesystem::path> list_dumps(const std::filesystem::path& dir);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::uint32_t crc32_of(const std::uint8_t* data, std::size_t size);

}  // namespace rca::dumpio

#endif  // RCA_DUMPIO_DUMP_H_

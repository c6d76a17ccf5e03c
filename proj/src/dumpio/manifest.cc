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

#include "rca/dumpio/manifest.h"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rca/dumpio/dump.h"
#include "rca/error.h"

namespace rca::dumpio {
namespace {

std::string ChecksumOf(const std::vector<std::uint8_t>& bytes) {
  return fmt::format("crc32:{:08x}", crc32_of(bytes.data(), bytes.size()));
}

}  // namespace

ManifestEntry describe_dump(const std::filesystem::path& base_dir,
                            const std::string& relative_path) {
  const auto bytes = read_file_bytes(base_dir / relative_path);
  const AttentionDump dump = decode_dump(bytes);
  return {relative_path, dump.image_id, dump.category, bytes.size(), ChecksumOf(bytes)};
}

void write_manifest(const DumpManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json j;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    entries.push_back({{"path", e.path},
                       {"image_id", e.image_id},
                       {"category", e.category},
                       {"byte_length", e.byte_length},
                       {"checksum", e.checksum}});
  }
  write_text_file(path, j.dump(2) + "\n");
}

DumpManifest read_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  DumpManifest manifest;
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    for (const auto& e : j.at("entries")) {
      manifest.entries.push_back({e.at("path").get<std::string>(),
                                  e.at("image_id").get<std::string>(),
                                  e.at("category").get<std::string>(),
                                  e.at("byte_length").get<std::uint64_t>(),
                                  e.at("checksum").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("manifest " + path.string() + ": " + e.what());
  }
  return manifest;
}

void verify_manifest(const DumpManifest& manifest, const std::filesystem::path& base_dir) {
  for (const auto& e : manifest.entries) {
    const auto bytes = read_file_bytes(base_dir / e.path);
    if (bytes.size() != e.byte_length) {
      throw LengthMismatchError(e.path + ": " + std::to_string(bytes.size()) +
                                " bytes, manifest says " + std::to_string(e.byte_length));
    }
    if (ChecksumOf(bytes) != e.checksum) throw ChecksumError(e.path + ": checksum mismatch");
  }
}

}  // namespace rca::dumpio

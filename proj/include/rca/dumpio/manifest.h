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

#ifndef RCA_DUMPIO_MANIFEST_H_
#define RCA_DUMPIO_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rca::dumpio {

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  std::string image_id;
  std::string category;
  std::uint64_t byte_length = 0;
  std::string checksum;  // "crc32:xxxxxxxx" over the whole file

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DumpManifest {
  std::vector<ManifestEntry> entries;
};

// Reads the dump at base_dir / relative_path and fills every field.
ManifestEntry describe_dump(const std::filesystem::path& base_dir,
                            const std::string& relative_path);

void write_manifest(const DumpManifest& manifest, const std::filesystem::path& path);
DumpManifest read_manifest(const std::filesystem::path& path);

// Checks every entry's length and checksum against the file on disk.
// Throws NotFoundError, LengthMismatchError or ChecksumError.
void verify_manifest(const DumpManifest& manifest, const std::filesystem::path& base_dir);

}  // namespace rca::dumpio

#endif  // RCA_DUMPIO_MANIFEST_H_

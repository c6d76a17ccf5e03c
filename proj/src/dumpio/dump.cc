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

#include "rca/dumpio/dump.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "rca/error.h"

namespace rca::dumpio {
namespace {

constexpr std::uint8_t kFlagValues = 1u << 0;
constexpr std::uint8_t kFlagHidden = 1u << 1;
constexpr std::uint8_t kFlagTheta = 1u << 2;

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void PutFloats(std::vector<std::uint8_t>& out, const std::vector<float>& values) {
  for (float f : values) PutU32(out, std::bit_cast<std::uint32_t>(f));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  void Need(std::size_t count, const char* what) const {
    if (remaining() < count) {
      throw LengthMismatchError(std::string("file ends inside ") + what + ": need " +
                                std::to_string(count) + " bytes, have " +
                                std::to_string(remaining()));
    }
  }
  std::uint8_t U8(const char* what) {
    Need(1, what);
    return bytes_[pos_++];
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
    pos_ += 4;
    return v;
  }
  std::string Bytes(std::size_t count, const char* what) {
    Need(count, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), count);
    pos_ += count;
    return s;
  }
  std::vector<float> Floats(std::size_t count) {
    std::vector<float> out(count);
    for (auto& f : out) f = std::bit_cast<float>(U32("payload"));
    return out;
  }
  const std::uint8_t* cursor() const { return bytes_.data() + pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::vector<float> Narrow(const std::vector<double>& v) {
  std::vector<float> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return static_cast<float>(x); });
  return out;
}

std::vector<double> Widen(const std::vector<float>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t size) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  while (size > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = ::crc32(crc, data, chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

void AttentionDump::Validate() const {
  const std::size_t n = tokens, h = heads, dv = dims;
  if (n == 0 || h == 0) throw DimensionError("dump needs at least one token and head");
  if (attention.size() != h * n * n) {
    throw DimensionError("attention payload has " + std::to_string(attention.size()) +
                         " floats, header declares " + std::to_string(h * n * n));
  }
  if (values && values->size() != n * dv) {
    throw DimensionError("value payload has " + std::to_string(values->size()) +
                         " floats, header declares " + std::to_string(n * dv));
  }
  if (hidden && hidden->size() != n * dv) {
    throw DimensionError("hidden payload has " + std::to_string(hidden->size()) +
                         " floats, header declares " + std::to_string(n * dv));
  }
  // Constructing the widened stack checks finiteness, signs and row sums.
  (void)stack();
  auto finite = [](const std::vector<float>& v) {
    return std::all_of(v.begin(), v.end(), [](float f) { return std::isfinite(f); });
  };
  if ((values && !finite(*values)) || (hidden && !finite(*hidden))) {
    throw InvalidInputError("dump holds non-finite values or hidden states");
  }
  if (theta_hint && !std::isfinite(*theta_hint)) {
    throw InvalidInputError("theta hint must be finite");
  }
}

core::AttentionStack AttentionDump::stack() const {
  return core::AttentionStack(heads, tokens, Widen(attention), kDumpRowSumTolerance);
}

core::ValueMatrix AttentionDump::value_matrix() const {
  if (!values) throw InvalidInputError("dump has no value vectors");
  return core::ValueMatrix(tokens, dims, Widen(*values));
}

core::HiddenStates AttentionDump::hidden_states() const {
  if (!hidden) throw InvalidInputError("dump has no hidden states");
  return core::HiddenStates(tokens, dims, Widen(*hidden));
}

AttentionDump make_dump(const core::AttentionStack& stack,
                        const std::optional<core::ValueMatrix>& values,
                        const std::optional<core::HiddenStates>& hidden) {
  AttentionDump d;
  d.tokens = static_cast<std::uint32_t>(stack.tokens());
  d.heads = static_cast<std::uint32_t>(stack.heads());
  d.attention = Narrow(stack.weights());
  if (values && hidden && values->dims() != hidden->dims()) {
    throw DimensionError("values and hidden states differ in width");
  }
  if (values) {
    d.dims = static_cast<std::uint32_t>(values->dims());
    d.values = Narrow(values->matrix().data());
  }
  if (hidden) {
    d.dims = static_cast<std::uint32_t>(hidden->dims());
    d.hidden = Narrow(hidden->matrix().data());
  }
  return d;
}

std::vector<std::uint8_t> encode_dump(const AttentionDump& dump) {
  dump.Validate();
  std::vector<std::uint8_t> payload;
  PutFloats(payload, dump.attention);
  if (dump.values) PutFloats(payload, *dump.values);
  if (dump.hidden) PutFloats(payload, *dump.hidden);

  nlohmann::json meta;
  meta["image_id"] = dump.image_id;
  meta["category"] = dump.category;
  if (dump.theta_hint) meta["theta_hint"] = *dump.theta_hint;
  meta["metadata"] = dump.metadata;
  meta["payload_crc32"] = crc32_of(payload.data(), payload.size());
  const std::string meta_text = meta.dump();

  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 + kRcadHeaderBytes + 4 + meta_text.size() + payload.size());
  out.insert(out.end(), std::begin(kRcadMagic), std::end(kRcadMagic));
  PutU32(out, dump.schema_version);
  PutU32(out, dump.tokens);
  PutU32(out, dump.heads);
  PutU32(out, dump.dims);
  std::uint8_t flags = 0;
  if (dump.values) flags |= kFlagValues;
  if (dump.hidden) flags |= kFlagHidden;
  if (dump.theta_hint) flags |= kFlagTheta;
  out.push_back(flags);
  PutU32(out, static_cast<std::uint32_t>(meta_text.size()));
  out.insert(out.end(), meta_text.begin(), meta_text.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

AttentionDump decode_dump(const std::vector<std::uint8_t>& bytes) {
  Reader in(bytes);
  if (in.Bytes(4, "magic") != std::string(kRcadMagic, 4)) {
    throw BadMagicError("not an RCAD file (bad magic)");
  }
  AttentionDump d;
  d.schema_version = in.U32("version");
  if (d.schema_version != kRcadVersion) {
    throw UnsupportedVersionError("unsupported RCAD version " +
                                  std::to_string(d.schema_version));
  }
  d.tokens = in.U32("header");
  d.heads = in.U32("header");
  d.dims = in.U32("header");
  const std::uint8_t flags = in.U8("header");
  if (flags & ~(kFlagValues | kFlagHidden | kFlagTheta)) {
    throw DumpFormatError("unknown RCAD flag bits");
  }
  const std::uint32_t meta_len = in.U32("metadata length");
  const std::string meta_text = in.Bytes(meta_len, "metadata");

  const std::size_t n = d.tokens, h = d.heads, dv = d.dims;
  std::size_t floats = h * n * n;
  if (flags & kFlagValues) floats += n * dv;
  if (flags & kFlagHidden) floats += n * dv;
  if (in.remaining() != 4 * floats) {
    throw LengthMismatchError("payload is " + std::to_string(in.remaining()) +
                              " bytes, header declares " + std::to_string(4 * floats));
  }

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_text);
    d.image_id = meta.at("image_id").get<std::string>();
    d.category = meta.at("category").get<std::string>();
    if (meta.contains("metadata")) {
      d.metadata = meta.at("metadata").get<std::map<std::string, std::string>>();
    }
    if (meta.contains("theta_hint") != static_cast<bool>(flags & kFlagTheta)) {
      throw DumpFormatError("theta_hint flag disagrees with metadata");
    }
    if (flags & kFlagTheta) d.theta_hint = meta.at("theta_hint").get<double>();
    const auto expected = meta.at("payload_crc32").get<std::uint32_t>();
    if (crc32_of(in.cursor(), in.remaining()) != expected) {
      throw ChecksumError("payload checksum mismatch");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DumpFormatError(std::string("bad RCAD metadata: ") + e.what());
  }

  d.attention = in.Floats(h * n * n);
  if (flags & kFlagValues) d.values = in.Floats(n * dv);
  if (flags & kFlagHidden) d.hidden = in.Floats(n * dv);
  d.Validate();
  return d;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw NotFoundError("file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

void write_dump(const AttentionDump& dump, const std::filesystem::path& path) {
  write_file_bytes(path, encode_dump(dump));
}

AttentionDump read_dump(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw NotFoundError("dump not found: " + path.string());
  }
  return decode_dump(read_file_bytes(path));
}

std::vector<std::filesystem::path> list_dumps(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw NotFoundError("dump directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rcad") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rca::dumpio

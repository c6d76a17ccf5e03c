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

#include "rca/dumpio/dataset.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "rca/dumpio/dump.h"
#include "rca/error.h"

namespace rca::dumpio {
namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

// COCO ids are integers; string ids are accepted as-is.
std::string IdField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw SchemaError(where + "." + key + ": expected an integer or string id");
}

int DimensionField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw SchemaError(where + "." + key + ": expected a positive integer");
  }
  return v.get<int>();
}

const json& ArrayField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_array()) throw SchemaError(where + "." + key + ": expected an array");
  return v;
}

json ParseJson(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace

std::vector<fitap::GroundTruthBox> load_ground_truth(const std::filesystem::path& path,
                                                     DatasetCounts* counts) {
  const json root = ParseJson(path);
  const std::string file = path.filename().string();

  std::map<std::string, std::pair<int, int>> sizes;
  const json& images = ArrayField(root, "images", file);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = file + ": images[" + std::to_string(i) + "]";
    sizes[IdField(images[i], "id", where)] = {DimensionField(images[i], "width", where),
                                              DimensionField(images[i], "height", where)};
  }

  std::map<std::string, std::string> names;
  const json& categories = ArrayField(root, "categories", file);
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const std::string where = file + ": categories[" + std::to_string(i) + "]";
    const json& name = Field(categories[i], "name", where);
    if (!name.is_string()) throw SchemaError(where + ".name: expected a string");
    names[IdField(categories[i], "id", where)] = name.get<std::string>();
  }

  std::vector<fitap::GroundTruthBox> out;
  const json& annotations = ArrayField(root, "annotations", file);
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const std::string where = file + ": annotations[" + std::to_string(i) + "]";
    const json& ann = annotations[i];
    const std::string image_id = IdField(ann, "image_id", where);
    auto size = sizes.find(image_id);
    if (size == sizes.end()) {
      throw SchemaError(where + ".image_id: unknown image id " + image_id);
    }
    const std::string category_id = IdField(ann, "category_id", where);
    auto name = names.find(category_id);
    if (name == names.end()) {
      throw SchemaError(where + ".category_id: unknown category id " + category_id);
    }
    const json& bbox = ArrayField(ann, "bbox", where);
    if (bbox.size() != 4 || !std::all_of(bbox.begin(), bbox.end(),
                                         [](const json& v) { return v.is_number(); })) {
      throw SchemaError(where + ".bbox: expected [x, y, w, h] numbers");
    }
    const auto [w, h] = size->second;
    const double x = bbox[0].get<double>(), y = bbox[1].get<double>();
    const double bw = bbox[2].get<double>(), bh = bbox[3].get<double>();
    detparse::Box box{std::clamp(x / w, 0.0, 1.0), std::clamp(y / h, 0.0, 1.0),
                      std::clamp((x + bw) / w, 0.0, 1.0), std::clamp((y + bh) / h, 0.0, 1.0)};
    if (!detparse::NormalizedBox::IsValid(box)) {
      throw SchemaError(where + ".bbox: degenerate box after normalization");
    }
    out.push_back({image_id, name->second, detparse::NormalizedBox(box)});
  }

  if (counts) {
    counts->images = sizes.size();
    counts->categories = names.size();
    counts->annotations = out.size();
  }
  return out;
}

std::vector<detparse::RawResponse> load_responses(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  const std::string file = path.filename().string();
  std::vector<detparse::RawResponse> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = file + ":" + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(where + ": invalid JSON: " + e.what());
    }
    detparse::RawResponse r;
    r.image_id = IdField(rec, "image_id", where);
    const json& category = Field(rec, "category", where);
    if (!category.is_string()) throw SchemaError(where + ".category: expected a string");
    r.category = category.get<std::string>();
    r.image_width = DimensionField(rec, "width", where);
    r.image_height = DimensionField(rec, "height", where);
    const json& text = Field(rec, "response_text", where);
    if (!text.is_string()) throw SchemaError(where + ".response_text: expected a string");
    r.text = text.get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& gt_path,
                     const std::filesystem::path& responses_path) {
  Dataset d;
  d.ground_truth = load_ground_truth(gt_path, &d.counts);
  d.responses = load_responses(responses_path);
  d.counts.responses = d.responses.size();
  return d;
}

std::vector<fitap::Detection> detections_from_responses(
    const std::vector<detparse::RawResponse>& responses, std::size_t* dropped) {
  std::vector<fitap::Detection> out;
  std::size_t rejected = 0;
  for (const auto& r : responses) {
    auto parsed = detparse::parse_response(r);
    rejected += parsed.dropped;
    for (const auto& box : parsed.boxes) out.push_back({r.image_id, r.category, box, 0.0});
  }
  if (dropped) *dropped = rejected;
  return out;
}

}  // namespace rca::dumpio

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

#ifndef RCA_DUMPIO_DATASET_H_
#define RCA_DUMPIO_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "rca/detparse/parser.h"
#include "rca/fitap/fitap.h"

namespace rca::dumpio {

struct DatasetCounts {
  std::size_t images = 0;
  std::size_t annotations = 0;
  std::size_t categories = 0;
  std::size_t responses = 0;
};

struct Dataset {
  std::vector<fitap::GroundTruthBox> ground_truth;
  std::vector<detparse::RawResponse> responses;
  DatasetCounts counts;
};

// COCO-style subset: {images:[{id,width,height}],
// annotations:[{image_id,category_id,bbox:[x,y,w,h]}], categories:[{id,name}]}.
// Pixel boxes are divided by the image size. Throws SchemaError naming the
// offending field.
std::vector<fitap::GroundTruthBox> load_ground_truth(const std::filesystem::path& path,
                                                     DatasetCounts* counts = nullptr);

// JSON lines of {image_id, category, width, height, response_text}.
std::vector<detparse::RawResponse> load_responses(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& gt_path,
                     const std::filesystem::path& responses_path);

// Parses every response into detections. `dropped` (optional) receives the
// number of tuples rejected by standardization.
std::vector<fitap::Detection> detections_from_responses(
    const std::vector<detparse::RawResponse>& responses, std::size_t* dropped = nullptr);

}  // namespace rca::dumpio

#endif  // RCA_DUMPIO_DATASET_H_

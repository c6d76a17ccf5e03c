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

#ifndef RCA_DETPARSE_PARSER_H_
#define RCA_DETPARSE_PARSER_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rca/detparse/box.h"

namespace rca::detparse {

// Any coordinate above this marks the tuple as pixel coordinates. Normalized
// outputs that overflow slightly (1.02, say) stay normalized.
inline constexpr double kPixelCoordinateThreshold = 1.5;

// The grounding prompt; {cls} is replaced by the category or phrase.
inline constexpr const char* kGroundingPrompt =
    "Give the normalized bounding box coordinates in the format [x1, y1, x2, y2] "
    "of all instances of {cls} in the image.";

struct RawResponse {
  std::string text;
  int image_width = 0;
  int image_height = 0;
  std::string image_id;
  std::string category;
};

struct ParseResult {
  std::vector<NormalizedBox> boxes;  // in order of appearance
  std::size_t dropped = 0;           // 4-tuples rejected by standardize_box
};

// Rescales pixel tuples by the image size, clamps into [0,1] and rejects
// boxes that are degenerate after clamping. Throws InvalidInputError for
// non-positive dimensions.
std::optional<NormalizedBox> standardize_box(const std::array<double, 4>& raw,
                                             int width, int height);

// Extracts every bracketed group of exactly four numbers. Brackets holding
// anything else are skipped.
ParseResult parse_response(const RawResponse& response);

// Substitutes {cls} in the grounding prompt.
std::string fill_prompt(const std::string& category);

}  // namespace rca::detparse

#endif  // RCA_DETPARSE_PARSER_H_

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

#include "rca/detparse/parser.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>
#include <string_view>

#include "rca/error.h"

namespace rca::detparse {
namespace {

// Innermost bracket groups only, so "[[a, b, c, d]]" yields the inner tuple.
const std::regex& BracketPattern() {
  static const std::regex pattern(R"(\[([^\[\]]*)\])");
  return pattern;
}

std::optional<double> ParseNumber(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool IsSeparator(char c) {
  return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Splits on commas and whitespace; fails on anything that is not a number.
std::optional<std::vector<double>> ParseTuple(std::string_view body) {
  std::vector<double> numbers;
  std::size_t pos = 0;
  while (pos < body.size()) {
    while (pos < body.size() && IsSeparator(body[pos])) ++pos;
    if (pos == body.size()) break;
    std::size_t end = pos;
    while (end < body.size() && !IsSeparator(body[end])) ++end;
    auto value = ParseNumber(body.substr(pos, end - pos));
    if (!value) return std::nullopt;
    numbers.push_back(*value);
    pos = end;
  }
  return numbers;
}

}  // namespace

std::optional<NormalizedBox> standardize_box(const std::array<double, 4>& raw,
                                             int width, int height) {
  if (width <= 0 || height <= 0) {
    throw InvalidInputError("image dimensions must be positive");
  }
  Box box{raw[0], raw[1], raw[2], raw[3]};
  const bool pixel = std::any_of(raw.begin(), raw.end(), [](double v) {
    return v > kPixelCoordinateThreshold;
  });
  if (pixel) {
    box.x1 /= width;
    box.x2 /= width;
    box.y1 /= height;
    box.y2 /= height;
  }
  box.x1 = std::clamp(box.x1, 0.0, 1.0);
  box.y1 = std::clamp(box.y1, 0.0, 1.0);
  box.x2 = std::clamp(box.x2, 0.0, 1.0);
  box.y2 = std::clamp(box.y2, 0.0, 1.0);
  if (!NormalizedBox::IsValid(box)) return std::nullopt;
  return NormalizedBox(box);
}

ParseResult parse_response(const RawResponse& response) {
  ParseResult result;
  const std::string& text = response.text;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), BracketPattern());
       it != std::sregex_iterator(); ++it) {
    const auto& group = (*it)[1];
    auto numbers = ParseTuple(std::string_view(&*group.first, group.length()));
    if (!numbers || numbers->size() != 4) continue;
    auto box = standardize_box({(*numbers)[0], (*numbers)[1], (*numbers)[2], (*numbers)[3]},
                               response.image_width, response.image_height);
    if (box) {
      result.boxes.push_back(*box);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

std::string fill_prompt(const std::string& category) {
  std::string prompt = kGroundingPrompt;
  const std::string placeholder = "{cls}";
  if (auto pos = prompt.find(placeholder); pos != std::string::npos) {
    prompt.replace(pos, placeholder.size(), category);
  }
  return prompt;
}

}  // namespace rca::detparse

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

#include "rca/detparse/box.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rca/error.h"

namespace rca::detparse {

double Box::area() const {
  return std::max(0.0, width()) * std::max(0.0, height());
}

NormalizedBox::NormalizedBox(double x1, double y1, double x2, double y2)
    : box_{x1, y1, x2, y2} {
  if (!IsValid(box_)) {
    throw InvalidInputError(fmt::format(
        "box [{}, {}, {}, {}] is not a normalized box", x1, y1, x2, y2));
  }
}

bool NormalizedBox::IsValid(const Box& b) {
  return 0.0 <= b.x1 && b.x1 < b.x2 && b.x2 <= 1.0 && 0.0 <= b.y1 &&
         b.y1 < b.y2 && b.y2 <= 1.0;
}

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::string format_box(const NormalizedBox& box) {
  return fmt::format("[{}, {}, {}, {}]", box.x1(), box.y1(), box.x2(), box.y2());
}

}  // namespace rca::detparse

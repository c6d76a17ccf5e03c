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

#ifndef RCA_DETPARSE_BOX_H_
#define RCA_DETPARSE_BOX_H_

#include <string>

namespace rca::detparse {

// Axis-aligned box as corner coordinates. No range constraint.
struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const;

  friend bool operator==(const Box&, const Box&) = default;
};

// Box in unit image coordinates: 0 <= x1 < x2 <= 1 and 0 <= y1 < y2 <= 1.
class NormalizedBox {
 public:
  // Throws InvalidInputError when the corners violate the invariant.
  NormalizedBox(double x1, double y1, double x2, double y2);
  explicit NormalizedBox(const Box& box) : NormalizedBox(box.x1, box.y1, box.x2, box.y2) {}

  static bool IsValid(const Box& box);

  double x1() const { return box_.x1; }
  double y1() const { return box_.y1; }
  double x2() const { return box_.x2; }
  double y2() const { return box_.y2; }
  double area() const { return box_.area(); }
  const Box& box() const { return box_; }

  friend bool operator==(const NormalizedBox&, const NormalizedBox&) = default;

 private:
  Box box_;
};

// Intersection over union; 0 when the union is empty.
double iou(const Box& a, const Box& b);
inline double iou(const NormalizedBox& a, const NormalizedBox& b) {
  return iou(a.box(), b.box());
}

// "[x1, y1, x2, y2]" with round-trip precision.
std::string format_box(const NormalizedBox& box);

}  // namespace rca::detparse

#endif  // RCA_DETPARSE_BOX_H_

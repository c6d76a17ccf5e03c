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


#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "rca/detparse/box.h"
#include "rca/detparse/parser.h"
#include "rca/error.h"
#include "support/oracles.h"

namespace rca::detparse {
namespace {

RawResponse Response(std::string text, int width = 640, int height = 480) {
  RawResponse r;
  r.text = std::move(text);
  r.image_width = width;
  r.image_height = height;
  return r;
}

void ExpectBox(const NormalizedBox& box, double x1, double y1, double x2, double y2,
               double tol = 1e-12) {
  EXPECT_NEAR(box.x1(), x1, tol);
  EXPECT_NEAR(box.y1(), y1, tol);
  EXPECT_NEAR(box.x2(), x2, tol);
  EXPECT_NEAR(box.y2(), y2, tol);
}

TEST(NormalizedBoxTest, RejectsInvalidCorners) {
  EXPECT_NO_THROW(NormalizedBox(0.0, 0.0, 1.0, 1.0));
  EXPECT_THROW(NormalizedBox(0.5, 0.0, 0.5, 1.0), InvalidInputError);
  EXPECT_THROW(NormalizedBox(0.0, 0.6, 1.0, 0.5), InvalidInputError);
  EXPECT_THROW(NormalizedBox(-0.1, 0.0, 1.0, 1.0), InvalidInputError);
  EXPECT_THROW(NormalizedBox(0.0, 0.0, 1.1, 1.0), InvalidInputError);
}

TEST(StandardizeBoxTest, AlreadyNormalized) {
  for (auto [w, h] : {std::pair{640, 480}, std::pair{1, 1}, std::pair{4000, 3000}}) {
    auto box = standardize_box({0.2, 0.2, 0.8, 0.9}, w, h);
    ASSERT_TRUE(box.has_value());
    ExpectBox(*box, 0.2, 0.2, 0.8, 0.9, 0.0);
  }
}

TEST(StandardizeBoxTest, RejectsDegenerate) {
  EXPECT_FALSE(standardize_box({0.5, 0.5, 0.4, 0.9}, 640, 480).has_value());
  EXPECT_FALSE(standardize_box({0.5, 0.5, 0.9, 0.5}, 640, 480).has_value());
  // Both corners collapse onto the right edge after clamping.
  EXPECT_FALSE(standardize_box({1.2, 0.1, 1.4, 0.5}, 640, 480).has_value());
}

TEST(StandardizeBoxTest, Clamps) {
  auto box = standardize_box({-0.1, 0.0, 0.5, 1.2}, 640, 480);
  ASSERT_TRUE(box.has_value());
  ExpectBox(*box, 0.0, 0.0, 0.5, 1.0, 0.0);
}

TEST(StandardizeBoxTest, PixelCutoff) {
  // 1.5 itself is still read as normalized; anything above is pixels.
  auto normalized = standardize_box({0.5, 0.5, 1.5, 1.0}, 100, 100);
  ASSERT_TRUE(normalized.has_value());
  ExpectBox(*normalized, 0.5, 0.5, 1.0, 1.0, 0.0);
  auto pixels = standardize_box({50, 20, 75, 40}, 100, 200);
  ASSERT_TRUE(pixels.has_value());
  ExpectBox(*pixels, 0.5, 0.1, 0.75, 0.2);
}

TEST(StandardizeBoxTest, RejectsBadImageSize) {
  EXPECT_THROW(standardize_box({0.1, 0.1, 0.2, 0.2}, 0, 480), InvalidInputError);
  EXPECT_THROW(standardize_box({0.1, 0.1, 0.2, 0.2}, 640, -1), InvalidInputError);
}

TEST(ParseResponseTest, SingleBox) {
  const ParseResult r = parse_response(Response("[0.1, 0.2, 0.5, 0.6]"));
  ASSERT_EQ(r.boxes.size(), 1u);
  ExpectBox(r.boxes[0], 0.1, 0.2, 0.5, 0.6, 0.0);
  EXPECT_EQ(r.dropped, 0u);
}

TEST(ParseResponseTest, MultipleBoxesInOrder) {
  const ParseResult r =
      parse_response(Response("found [0.1,0.2,0.3,0.4] and [0.5,0.5,0.9,0.9] here"));
  ASSERT_EQ(r.boxes.size(), 2u);
  ExpectBox(r.boxes[0], 0.1, 0.2, 0.3, 0.4, 0.0);
  ExpectBox(r.boxes[1], 0.5, 0.5, 0.9, 0.9, 0.0);
}

TEST(ParseResponseTest, PixelCoordinates) {
  const ParseResult r = parse_response(Response("[120, 50, 400, 300]", 800, 600));
  ASSERT_EQ(r.boxes.size(), 1u);
  ExpectBox(r.boxes[0], 0.15, 0.08333, 0.5, 0.5, 1e-5);
  EXPECT_DOUBLE_EQ(r.boxes[0].y1(), 50.0 / 600.0);
}

TEST(ParseResponseTest, UnparseableTextYieldsNothing) {
  for (const char* text : {"", "no boxes", "[", "]", "[]", "[a, b, c, d]", "[[[", "[0.1, 0.2]"}) {
    const ParseResult r = parse_response(Response(text));
    EXPECT_TRUE(r.boxes.empty()) << text;
    EXPECT_EQ(r.dropped, 0u) << text;
  }
}

TEST(ParseResponseTest, IntegerAndWhitespaceVariants) {
  for (const char* text : {"[0,0,1,1]", "[ 0 , 0 , 1 , 1 ]", "[0\t0\n1 1]", "[0.0, 0.0, 1.0, 1.0]",
                           "[0., 0., 1., 1.]"}) {
    const ParseResult r = parse_response(Response(text));
    ASSERT_EQ(r.boxes.size(), 1u) << text;
    ExpectBox(r.boxes[0], 0, 0, 1, 1, 0.0);
  }
}

TEST(ParseResponseTest, FixtureCorpus) {
  std::ifstream in(std::string(RCA_TEST_DATA_DIR) + "/parser_corpus.json");
  ASSERT_TRUE(in.good());
  const auto corpus = nlohmann::json::parse(in);
  ASSERT_GE(corpus["cases"].size(), 20u);
  for (const auto& c : corpus["cases"]) {
    SCOPED_TRACE(c["name"].get<std::string>());
    const ParseResult r = parse_response(
        Response(c["text"].get<std::string>(), c["width"].get<int>(), c["height"].get<int>()));
    ASSERT_EQ(r.boxes.size(), c["boxes"].size());
    EXPECT_EQ(r.dropped, c["dropped"].get<std::size_t>());
    for (std::size_t k = 0; k < r.boxes.size(); ++k) {
      const auto& e = c["boxes"][k];
      ExpectBox(r.boxes[k], e[0], e[1], e[2], e[3]);
    }
  }
}

TEST(ParseResponseTest, RandomTextNeverYieldsInvalidBoxes) {
  std::mt19937_64 rng(53);
  const std::string alphabet = "[],. 0123456789-+eE\nabc";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 80);
  std::uniform_int_distribution<int> dim(1, 2000);
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    for (std::size_t k = len(rng); k > 0; --k) text.push_back(alphabet[pick(rng)]);
    const ParseResult r = parse_response(Response(text, dim(rng), dim(rng)));
    for (const auto& b : r.boxes) {
      ASSERT_TRUE(NormalizedBox::IsValid(b.box())) << text;
    }
  }
}

TEST(FormatBoxTest, RoundTripsThroughParser) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    double a = unit(rng), b = unit(rng), c = unit(rng), d = unit(rng);
    if (a == b || c == d) continue;
    const NormalizedBox box(std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d));
    const ParseResult r = parse_response(Response(format_box(box)));
    ASSERT_EQ(r.boxes.size(), 1u);
    ASSERT_EQ(r.boxes[0], box);
  }
  EXPECT_EQ(format_box(NormalizedBox(0.1, 0.2, 0.5, 1.0)), "[0.1, 0.2, 0.5, 1]");
}

TEST(FillPromptTest, SubstitutesCategory) {
  const std::string prompt = fill_prompt("traffic light");
  EXPECT_NE(prompt.find("of all instances of traffic light in the image"), std::string::npos);
  EXPECT_EQ(prompt.find("{cls}"), std::string::npos);
}

TEST(IouTest, Examples) {
  const Box unit{0, 0, 1, 1};
  EXPECT_EQ(iou(unit, unit), 1.0);
  EXPECT_EQ(iou(unit, Box{2, 2, 3, 3}), 0.0);
  EXPECT_EQ(iou(Box{0, 0, 0.5, 1}, Box{0.5, 0, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(iou(unit, Box{0.5, 0, 1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(iou(unit, Box{0.5, 0, 1.5, 1}), 1.0 / 3.0);
}

TEST(IouTest, MatchesRasterizedGrid) {
  using ::rca::testing::RasterIou;
  EXPECT_NEAR(RasterIou({0, 0, 1, 1}, {0.5, 0, 1, 1}), 0.5, 1e-3);
  EXPECT_NEAR(RasterIou({0, 0, 1, 1}, {0.5, 0, 1.5, 1}, 1500, 0.0, 1.5), 1.0 / 3.0, 1e-3);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double c[8];
    for (double& x : c) x = unit(rng);
    const Box a{std::min(c[0], c[1]), std::min(c[2], c[3]), std::max(c[0], c[1]),
                std::max(c[2], c[3])};
    const Box b{std::min(c[4], c[5]), std::min(c[6], c[7]), std::max(c[4], c[5]),
                std::max(c[6], c[7])};
    const double grid = RasterIou({a.x1, a.y1, a.x2, a.y2}, {b.x1, b.y1, b.x2, b.y2});
    EXPECT_NEAR(iou(a, b), grid, 1e-2);
  }
}

TEST(IouTest, SymmetricAndSelfOne) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    double c[8];
    for (double& x : c) x = unit(rng);
    const Box a{std::min(c[0], c[1]), std::min(c[2], c[3]), std::max(c[0], c[1]),
                std::max(c[2], c[3])};
    const Box b{std::min(c[4], c[5]), std::min(c[6], c[7]), std::max(c[4], c[5]),
                std::max(c[6], c[7])};
    ASSERT_EQ(iou(a, b), iou(b, a));
    if (a.area() > 0) ASSERT_EQ(iou(a, a), 1.0);
    ASSERT_GE(iou(a, b), 0.0);
    ASSERT_LE(iou(a, b), 1.0);
  }
}

}  // namespace
}  // namespace rca::detparse

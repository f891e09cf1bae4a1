// Copyright 2026 The skinaudit Authors.
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

#include "skinaudit/color.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

namespace skinaudit::color {
namespace {

using testing::MaxChannelDiff;
using testing::Rng;

TEST(RgbToHsv, Primaries) {
  const HsvPixel red = RgbToHsv({255, 0, 0});
  EXPECT_DOUBLE_EQ(red.h, 0.0);
  EXPECT_DOUBLE_EQ(red.s, 1.0);
  EXPECT_DOUBLE_EQ(red.v, 1.0);
  EXPECT_NEAR(RgbToHsv({0, 255, 0}).h, 120.0, 1e-12);
  EXPECT_NEAR(RgbToHsv({0, 0, 255}).h, 240.0, 1e-12);
  EXPECT_NEAR(RgbToHsv({255, 0, 255}).h, 300.0, 1e-12);
}

TEST(RgbToHsv, AchromaticHasZeroHue) {
  const HsvPixel gray = RgbToHsv({128, 128, 128});
  EXPECT_EQ(gray.h, 0.0);
  EXPECT_EQ(gray.s, 0.0);
  EXPECT_DOUBLE_EQ(gray.v, 128.0 / 255.0);
  EXPECT_EQ(RgbToHsv({0, 0, 0}).s, 0.0);
}

TEST(RgbToHsv, SkinTone) {
  // max = 229 (R), min = 166, delta = 63: h = 60 * (181 - 166) / 63.
  const HsvPixel p = RgbToHsv({229, 181, 166});
  EXPECT_NEAR(p.h, 60.0 * 15.0 / 63.0, 1e-12);
  EXPECT_NEAR(p.h, 14.3, 0.05);
  EXPECT_NEAR(p.s, 63.0 / 229.0, 1e-12);
  EXPECT_NEAR(p.v, 229.0 / 255.0, 1e-12);
}

TEST(RgbToHsv, HueInRangeForAllSectors) {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    const HsvPixel p = RgbToHsv(testing::RandomPixel(rng));
    ASSERT_GE(p.h, 0.0);
    ASSERT_LT(p.h, 360.0);
    ASSERT_GE(p.s, 0.0);
    ASSERT_LE(p.s, 1.0);
    ASSERT_GE(p.v, 0.0);
    ASSERT_LE(p.v, 1.0);
  }
}

TEST(RgbToHsv, ScaleConsistent) {
  // Scaling an integral pixel by an integer k keeps it exactly representable,
  // so h and s must not move and v must scale by k.
  Rng rng(11);
  std::uniform_int_distribution<int> channel(0, 63), factor(2, 4);
  for (int i = 0; i < 5000; ++i) {
    const int r = channel(rng), g = channel(rng), b = channel(rng), k = factor(rng);
    const HsvPixel a = RgbToHsv({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                 static_cast<std::uint8_t>(b)});
    const HsvPixel c = RgbToHsv({static_cast<std::uint8_t>(r * k),
                                 static_cast<std::uint8_t>(g * k),
                                 static_cast<std::uint8_t>(b * k)});
    ASSERT_NEAR(a.h, c.h, 1e-6);
    ASSERT_NEAR(a.s, c.s, 1e-6);
    ASSERT_NEAR(a.v * k, c.v, 1e-9);
  }
}

TEST(HsvToRgb, Examples) {
  EXPECT_EQ(HsvToRgb({0, 1, 1}), (RgbPixel{255, 0, 0}));
  EXPECT_EQ(HsvToRgb({0, 0, 0.5}), (RgbPixel{128, 128, 128}));
  EXPECT_EQ(HsvToRgb({120, 1, 1}), (RgbPixel{0, 255, 0}));
  EXPECT_EQ(HsvToRgb({240, 1, 1}), (RgbPixel{0, 0, 255}));
  EXPECT_EQ(HsvToRgb({0, 0.5, 1}), (RgbPixel{255, 128, 128}));
  // Out-of-range hue wraps.
  EXPECT_EQ(HsvToRgb({360, 1, 1}), (RgbPixel{255, 0, 0}));
  EXPECT_EQ(HsvToRgb({-120, 1, 1}), (RgbPixel{0, 0, 255}));
}

TEST(HsvToRgb, RoundTripExhaustiveWithinOne) {
  // Every 8-bit color, stepping 3 in each channel to keep runtime small.
  for (int r = 0; r < 256; r += 3) {
    for (int g = 0; g < 256; g += 3) {
      for (int b = 0; b < 256; b += 3) {
        const RgbPixel p{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                         static_cast<std::uint8_t>(b)};
        ASSERT_LE(MaxChannelDiff(p, HsvToRgb(RgbToHsv(p))), 1)
            << r << "," << g << "," << b;
      }
    }
  }
}

TEST(ToByte, RoundsHalfUpAndClamps) {
  EXPECT_EQ(ToByte(127.5), 128);
  EXPECT_EQ(ToByte(127.49), 127);
  EXPECT_EQ(ToByte(-3.0), 0);
  EXPECT_EQ(ToByte(300.0), 255);
  EXPECT_EQ(ToByte(0.5), 1);
}

TEST(RgbToYcbcr, Examples) {
  const YcbcrPixel white = RgbToYcbcr({255, 255, 255});
  EXPECT_NEAR(white.y, 255.0, 1e-9);
  EXPECT_NEAR(white.cb, 128.0, 1e-9);
  EXPECT_NEAR(white.cr, 128.0, 1e-9);
  const YcbcrPixel black = RgbToYcbcr({0, 0, 0});
  EXPECT_NEAR(black.y, 0.0, 1e-12);
  EXPECT_NEAR(black.cb, 128.0, 1e-12);
  EXPECT_NEAR(black.cr, 128.0, 1e-12);
  const YcbcrPixel red = RgbToYcbcr({255, 0, 0});
  EXPECT_NEAR(red.y, 0.299 * 255, 1e-9);
  EXPECT_NEAR(red.cb, 128 - 0.168736 * 255, 1e-9);
  EXPECT_NEAR(red.cb, 84.972, 1e-3);
  EXPECT_DOUBLE_EQ(red.cr, 255.0);  // 255.5 clamped
}

TEST(ToGrayscale, Examples) {
  EXPECT_EQ(ToGrayscale(RgbImage(3, 2, RgbPixel{255, 255, 255})),
            RgbImage(3, 2, RgbPixel{255, 255, 255}));
  const RgbImage red = ToGrayscale(RgbImage(1, 1, RgbPixel{255, 0, 0}));
  EXPECT_EQ(red[0], (RgbPixel{76, 76, 76}));
}

TEST(ToGrayscale, AchromaticAndIdempotent) {
  Rng rng(3);
  const RgbImage img = testing::RandomImage(rng, 40, 30);
  const RgbImage once = ToGrayscale(img);
  EXPECT_EQ(once.width(), 40u);
  EXPECT_EQ(once.height(), 30u);
  for (const RgbPixel& p : once.pixels()) {
    ASSERT_EQ(p.r, p.g);
    ASSERT_EQ(p.g, p.b);
  }
  EXPECT_EQ(ToGrayscale(once), once);
}

TEST(Conversions, Deterministic) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const RgbPixel p = testing::RandomPixel(rng);
    const HsvPixel a = RgbToHsv(p), b = RgbToHsv(p);
    ASSERT_EQ(a.h, b.h);
    ASSERT_EQ(a.s, b.s);
    ASSERT_EQ(a.v, b.v);
    ASSERT_EQ(HsvToRgb(a), HsvToRgb(b));
  }
}

}  // namespace
}  // namespace skinaudit::color

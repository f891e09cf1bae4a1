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

// Conversions between 8-bit RGB, HSV, YCbCr (BT.601 full range) and luma
// grayscale. Every function here is pure.

#pragma once

#include <cstdint>

#include "skinaudit/image.hpp"

namespace skinaudit::color {

/// h in degrees [0, 360); s and v in [0, 1]. Achromatic colors carry h = 0.
struct HsvPixel {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

struct YcbcrPixel {
  double y = 0.0;
  double cb = 0.0;
  double cr = 0.0;
};

/// Rounds half-up and clamps to [0, 255].
std::uint8_t ToByte(double value);

HsvPixel RgbToHsv(RgbPixel p);

/// Sector-based inverse. Out-of-range inputs are wrapped (h) or clamped
/// (s, v) rather than rejected.
RgbPixel HsvToRgb(const HsvPixel& p);

YcbcrPixel RgbToYcbcr(RgbPixel p);

/// BT.601 luma, unrounded.
double Luma(RgbPixel p);

/// Replaces every pixel by (L, L, L), L = round(luma).
RgbImage ToGrayscale(const RgbImage& img);

}  // namespace skinaudit::color

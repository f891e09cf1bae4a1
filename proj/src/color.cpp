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

#include <algorithm>
#include <cmath>

namespace skinaudit::color {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

}  // namespace

std::uint8_t ToByte(double value) {
  const double rounded = std::floor(value + 0.5);
  return static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
}

HsvPixel RgbToHsv(RgbPixel p) {
  const double r = p.r / 255.0;
  const double g = p.g / 255.0;
  const double b = p.b / 255.0;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;

  HsvPixel out;
  out.v = max;
  if (delta <= 0.0) return out;  // achromatic: h = s = 0

  out.s = delta / max;
  double h;
  if (p.r >= p.g && p.r >= p.b) {
    h = (g - b) / delta;
  } else if (p.g >= p.b) {
    h = 2.0 + (b - r) / delta;
  } else {
    h = 4.0 + (r - g) / delta;
  }
  h *= 60.0;
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

RgbPixel HsvToRgb(const HsvPixel& p) {
  double h = std::fmod(p.h, 360.0);
  if (h < 0.0) h += 360.0;
  const double s = std::clamp(p.s, 0.0, 1.0);
  const double v = std::clamp(p.v, 0.0, 1.0);

  const double chroma = v * s;
  const double sector = h / 60.0;
  const double x = chroma * (1.0 - std::fabs(std::fmod(sector, 2.0) - 1.0));
  const double m = v - chroma;

  double r = 0.0, g = 0.0, b = 0.0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {ToByte((r + m) * 255.0), ToByte((g + m) * 255.0),
          ToByte((b + m) * 255.0)};
}

YcbcrPixel RgbToYcbcr(RgbPixel p) {
  const double r = p.r, g = p.g, b = p.b;
  YcbcrPixel out;
  out.y = kLumaR * r + kLumaG * g + kLumaB * b;
  out.cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
  out.cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
  out.y = std::clamp(out.y, 0.0, 255.0);
  out.cb = std::clamp(out.cb, 0.0, 255.0);
  out.cr = std::clamp(out.cr, 0.0, 255.0);
  return out;
}

double Luma(RgbPixel p) {
  return kLumaR * p.r + kLumaG * p.g + kLumaB * p.b;
}

RgbImage ToGrayscale(const RgbImage& img) {
  RgbImage out = img;
  for (RgbPixel& px : out.pixels()) {
    const std::uint8_t l = ToByte(Luma(px));
    px = {l, l, l};
  }
  return out;
}

}  // namespace skinaudit::color

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

#include "skinaudit/augment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "skinaudit/color.hpp"
#include "text_util.hpp"

namespace skinaudit::augment {

namespace {

double CheckRatio(double ratio, const char* what) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw InvalidArgument(fmt::format("{} ratio {} outside [0, 1]", what, ratio));
  }
  return ratio;
}

template <typename Fn>
RgbImage MapHsv(const RgbImage& img, Fn&& fn) {
  RgbImage out = img;
  for (RgbPixel& px : out.pixels()) {
    color::HsvPixel hsv = color::RgbToHsv(px);
    fn(hsv);
    px = color::HsvToRgb(hsv);
  }
  return out;
}

}  // namespace

HsvAdjustment HsvAdjustment::HueRotate(double degrees) {
  if (!std::isfinite(degrees)) throw InvalidArgument("hue rotation must be finite");
  double d = std::fmod(degrees, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return {Kind::kHueRotate, d};
}

HsvAdjustment HsvAdjustment::SaturationScale(double ratio) {
  return {Kind::kSaturationScale, CheckRatio(ratio, "saturation")};
}

HsvAdjustment HsvAdjustment::ValueScale(double ratio) {
  return {Kind::kValueScale, CheckRatio(ratio, "value")};
}

std::string HsvAdjustment::Label() const {
  switch (kind_) {
    case Kind::kHueRotate: return fmt::format("hue{}", amount_);
    case Kind::kSaturationScale: return fmt::format("sat{}", amount_);
    case Kind::kValueScale: return fmt::format("val{}", amount_);
    case Kind::kIdentity: break;
  }
  return "identity";
}

RgbImage HsvAdjustment::Apply(const RgbImage& img) const {
  switch (kind_) {
    case Kind::kHueRotate: return RotateHue(img, amount_);
    case Kind::kSaturationScale: return ScaleSaturation(img, amount_);
    case Kind::kValueScale: return ScaleValue(img, amount_);
    case Kind::kIdentity: break;
  }
  return img;
}

RgbImage RotateHue(const RgbImage& img, double degrees) {
  const double d = HsvAdjustment::HueRotate(degrees).amount();
  return MapHsv(img,
                [d](color::HsvPixel& p) { p.h = std::fmod(p.h + d, 360.0); });
}

RgbImage ScaleSaturation(const RgbImage& img, double ratio) {
  CheckRatio(ratio, "saturation");
  return MapHsv(img, [ratio](color::HsvPixel& p) { p.s *= ratio; });
}

RgbImage ScaleValue(const RgbImage& img, double ratio) {
  CheckRatio(ratio, "value");
  return MapHsv(img, [ratio](color::HsvPixel& p) { p.v *= ratio; });
}

AugmentationPlan::AugmentationPlan(std::vector<HsvAdjustment> adjustments) {
  for (const HsvAdjustment& a : adjustments) {
    if (std::find(adjustments_.begin(), adjustments_.end(), a) ==
        adjustments_.end()) {
      adjustments_.push_back(a);
    }
  }
  if (adjustments_.empty()) {
    throw InvalidArgument("augmentation plan needs at least one adjustment");
  }
}

AugmentationPlan BuildPlan(const std::vector<double>& hue_steps,
                           const std::vector<double>& saturation_ratios,
                           const std::vector<double>& value_ratios) {
  std::vector<HsvAdjustment> all;
  all.reserve(hue_steps.size() + saturation_ratios.size() + value_ratios.size());
  for (double d : hue_steps) all.push_back(HsvAdjustment::HueRotate(d));
  for (double r : saturation_ratios) {
    all.push_back(HsvAdjustment::SaturationScale(r));
  }
  for (double r : value_ratios) all.push_back(HsvAdjustment::ValueScale(r));
  return AugmentationPlan(std::move(all));
}

AugmentationPlan DefaultPlan() {
  return BuildPlan(kDefaultHueSteps, kDefaultSaturationRatios,
                   kDefaultValueRatios);
}

AugmentationPlan ParsePlan(std::string_view text) {
  std::vector<double> hue, sat, val;
  bool seen[3] = {false, false, false};
  std::size_t line_no = 0;
  for (std::string_view line : text::SplitLines(text)) {
    ++line_no;
    line = text::Trim(text::StripComment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = values'", line_no, 0);
    }
    const std::string key = text::Lower(text::Trim(line.substr(0, eq)));
    int slot;
    std::vector<double>* target;
    if (key == "hue") {
      slot = 0, target = &hue;
    } else if (key == "saturation" || key == "sat") {
      slot = 1, target = &sat;
    } else if (key == "value" || key == "val") {
      slot = 2, target = &val;
    } else {
      throw ParseError("unknown plan key '" + key + "'", line_no, 1);
    }
    if (seen[slot]) throw ParseError("duplicate key '" + key + "'", line_no, 1);
    seen[slot] = true;

    std::size_t column = eq + 2;
    for (std::string_view item : text::Split(line.substr(eq + 1), ',')) {
      const std::string_view trimmed = text::Trim(item);
      if (!trimmed.empty()) {
        const auto number = text::ParseDouble(trimmed);
        if (!number) {
          throw ParseError("not a number: '" + std::string(trimmed) + "'",
                           line_no, column);
        }
        target->push_back(*number);
      }
      column += item.size() + 1;
    }
  }
  if (hue.empty() && sat.empty() && val.empty()) {
    throw ParseError("plan lists no adjustments", line_no, 0);
  }
  try {
    return BuildPlan(hue, sat, val);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line_no, 0);
  }
}

AugmentationPlan LoadPlan(const std::filesystem::path& path) {
  const std::string contents = text::ReadFile(path);
  try {
    return ParsePlan(contents);
  } catch (const ParseError& e) {
    throw e.WithSource(path.string());
  }
}

std::vector<AugmentedSample> ApplyPlan(const Sample& sample,
                                       const AugmentationPlan& plan) {
  std::vector<AugmentedSample> out;
  out.reserve(plan.size());
  for (const HsvAdjustment& adj : plan.adjustments()) {
    out.push_back({sample.id, adj, adj.Apply(sample.image), sample.mask});
  }
  return out;
}

}  // namespace skinaudit::augment

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

// Color-space dataset repair: single-channel HSV adjustments applied to
// images while their skin masks ride along untouched.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "skinaudit/image.hpp"

namespace skinaudit::augment {

class HsvAdjustment {
 public:
  enum class Kind { kIdentity, kHueRotate, kSaturationScale, kValueScale };

  /// Identity.
  HsvAdjustment() = default;

  static HsvAdjustment Identity() { return {}; }
  /// Degrees are reduced modulo 360 into [0, 360).
  static HsvAdjustment HueRotate(double degrees);
  /// Throws InvalidArgument unless 0 <= ratio <= 1.
  static HsvAdjustment SaturationScale(double ratio);
  static HsvAdjustment ValueScale(double ratio);

  Kind kind() const { return kind_; }
  /// Degrees for kHueRotate, ratio for the scale kinds, 0 for identity.
  double amount() const { return amount_; }

  /// Short filesystem-safe tag, e.g. "hue60", "sat0.4", "val1", "identity".
  std::string Label() const;

  RgbImage Apply(const RgbImage& img) const;

  friend bool operator==(const HsvAdjustment&, const HsvAdjustment&) = default;

 private:
  HsvAdjustment(Kind kind, double amount) : kind_(kind), amount_(amount) {}

  Kind kind_ = Kind::kIdentity;
  double amount_ = 0.0;
};

RgbImage RotateHue(const RgbImage& img, double degrees);
RgbImage ScaleSaturation(const RgbImage& img, double ratio);
RgbImage ScaleValue(const RgbImage& img, double ratio);

/// Ordered, duplicate-free, non-empty list of adjustments.
class AugmentationPlan {
 public:
  /// Drops repeated adjustments keeping first occurrence; throws on empty.
  explicit AugmentationPlan(std::vector<HsvAdjustment> adjustments);

  const std::vector<HsvAdjustment>& adjustments() const { return adjustments_; }
  std::size_t size() const { return adjustments_.size(); }

 private:
  std::vector<HsvAdjustment> adjustments_;
};

inline const std::vector<double> kDefaultHueSteps = {60, 120, 180, 240, 300};
inline const std::vector<double> kDefaultSaturationRatios = {0.8, 0.6, 0.4,
                                                             0.2, 0.0};
inline const std::vector<double> kDefaultValueRatios = {1.0, 0.8, 0.6, 0.4,
                                                        0.2};

/// Hue rotations, then saturation scales, then value scales.
AugmentationPlan BuildPlan(const std::vector<double>& hue_steps,
                           const std::vector<double>& saturation_ratios,
                           const std::vector<double>& value_ratios);

/// The fifteen-adjustment default.
AugmentationPlan DefaultPlan();

/// Reads a key-value plan file:
///
///   # comment
///   hue        = 60, 120, 180, 240, 300
///   saturation = 0.8, 0.6, 0.4, 0.2, 0.0
///   value      = 1.0, 0.8, 0.6, 0.4, 0.2
///
/// A missing key contributes nothing. Throws ParseError with a position.
AugmentationPlan ParsePlan(std::string_view text);
AugmentationPlan LoadPlan(const std::filesystem::path& path);

struct Sample {
  std::string id;
  RgbImage image;
  BinaryMask mask;
};

struct AugmentedSample {
  std::string source_id;
  HsvAdjustment adjustment;
  RgbImage image;
  BinaryMask mask;
};

/// One output per adjustment, in plan order.
std::vector<AugmentedSample> ApplyPlan(const Sample& sample,
                                       const AugmentationPlan& plan);

}  // namespace skinaudit::augment

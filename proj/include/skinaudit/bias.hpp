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

// Skin-tone bias analytics: Fitzpatrick-stratified metrics and their spread,
// skin/face ratios and their distributions, and HSV heatmaps of skin pixels.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skinaudit/eval.hpp"
#include "skinaudit/image.hpp"

namespace skinaudit::bias {

enum class SkinTone { kI, kII, kIII, kIV, kV, kVI, kMix, kUnknown };

/// Groups that take part in cross-group spread, in table order.
inline constexpr std::array<SkinTone, 7> kStratifiedTones = {
    SkinTone::kI,  SkinTone::kII, SkinTone::kIII, SkinTone::kIV,
    SkinTone::kV,  SkinTone::kVI, SkinTone::kMix};

std::string_view SkinToneName(SkinTone t);
/// Accepts roman or arabic numerals, "mix" and "unknown", case-insensitive.
std::optional<SkinTone> ParseSkinTone(std::string_view s);

struct FaceRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  friend bool operator==(const FaceRect&, const FaceRect&) = default;
};

/// Sample standard deviation (divisor n - 1); 0 for fewer than two values.
double SampleStddev(std::span<const double> values);

struct GroupResult {
  SkinTone tone = SkinTone::kUnknown;
  eval::ConfusionCounts counts;
  eval::MetricsReport metrics;
};

struct StratifiedReport {
  /// One entry per group present, in kStratifiedTones order. Unknown is
  /// never included.
  std::vector<GroupResult> groups;
  double sigma_f1 = 0.0;
  double sigma_iou = 0.0;

  const GroupResult* Find(SkinTone t) const;
};

/// Pools confusion counts within each skin tone, then computes metrics and
/// their spread across tones. Unknown-labelled results are ignored; throws
/// if nothing else is left.
StratifiedReport BuildStratifiedReport(
    std::span<const std::pair<eval::ConfusionCounts, SkinTone>> results);

/// Same spread computation from already-computed per-group metrics (for
/// metrics reported by another tool). Counts are left zero.
StratifiedReport StratifiedFromMetrics(
    std::span<const std::pair<eval::MetricsReport, SkinTone>> groups);

/// Fraction of the rectangle's pixels that are skin in `mask`.
double SkinFaceRatio(const BinaryMask& mask, const FaceRect& rect);

/// Normalized histogram over [0, 1]; 1.0 falls into the last bin.
class RatioDistribution {
 public:
  static constexpr std::size_t kDefaultBins = 100;

  static RatioDistribution FromRatios(std::span<const double> ratios,
                                      std::size_t bins = kDefaultBins);
  /// Takes raw non-negative weights and normalizes them.
  static RatioDistribution FromWeights(std::vector<double> weights);

  std::size_t bins() const { return probabilities_.size(); }
  const std::vector<double>& probabilities() const { return probabilities_; }

 private:
  explicit RatioDistribution(std::vector<double> p) : probabilities_(std::move(p)) {}

  std::vector<double> probabilities_;
};

inline constexpr double kDefaultKlEps = 1e-9;

/// D_KL(p || q) after adding eps to every bin of both and renormalizing.
double KlDivergence(const RatioDistribution& p, const RatioDistribution& q,
                    double eps = kDefaultKlEps);

enum class AxisPair { kSV, kSH, kVH };

std::string_view AxisPairName(AxisPair pair);
std::optional<AxisPair> ParseAxisPair(std::string_view s);

/// Count grid of skin pixels over two HSV axes. The first named axis runs
/// along x. H spans [0, 360), S and V span [0, 1]; top values are clamped
/// into the last bin.
class Histogram2D {
 public:
  static constexpr std::size_t kDefaultBins = 64;

  Histogram2D(AxisPair pair, std::size_t bins_x, std::size_t bins_y);

  AxisPair pair() const { return pair_; }
  std::size_t bins_x() const { return bins_x_; }
  std::size_t bins_y() const { return bins_y_; }
  std::uint64_t at(std::size_t x, std::size_t y) const {
    return counts_[y * bins_x_ + x];
  }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  void Add(RgbPixel p);
  std::uint64_t Total() const;
  /// Number of non-empty cells.
  std::size_t Support() const;

  Histogram2D& operator+=(const Histogram2D& other);
  friend bool operator==(const Histogram2D&, const Histogram2D&) = default;

  /// One CSV row per y bin (lowest first), one column per x bin.
  std::string ToCsv() const;

 private:
  AxisPair pair_;
  std::size_t bins_x_;
  std::size_t bins_y_;
  std::vector<std::uint64_t> counts_;
};

struct MaskedImage {
  const RgbImage* image;
  const BinaryMask* mask;
};

Histogram2D HsvHeatmap(std::span<const MaskedImage> samples, AxisPair pair,
                       std::size_t bins = Histogram2D::kDefaultBins);

/// Table layout: `metric,I,II,III,IV,V,VI,Mix,sigma`, values in percent.
/// Tones without data leave an empty cell.
std::string StratifiedCsv(const StratifiedReport& report);
/// Long layout with counts and all five metrics per tone.
std::string StratifiedDetailCsv(const StratifiedReport& report);

}  // namespace skinaudit::bias

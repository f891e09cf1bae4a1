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

#include "skinaudit/bias.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "skinaudit/color.hpp"
#include "text_util.hpp"

namespace skinaudit::bias {

namespace {

constexpr std::array<std::string_view, 8> kToneNames = {
    "I", "II", "III", "IV", "V", "VI", "Mix", "Unknown"};

std::size_t BinOf(double value, double range, std::size_t bins) {
  const auto idx = static_cast<std::size_t>(
      std::max(0.0, std::floor(value / range * static_cast<double>(bins))));
  return std::min(idx, bins - 1);
}

StratifiedReport Finish(std::vector<GroupResult> groups) {
  if (groups.empty()) {
    throw InvalidArgument("no results with a known skin tone");
  }
  std::vector<double> f1, iou;
  for (const GroupResult& g : groups) {
    f1.push_back(g.metrics.f1);
    iou.push_back(g.metrics.iou);
  }
  StratifiedReport report;
  report.groups = std::move(groups);
  report.sigma_f1 = SampleStddev(f1);
  report.sigma_iou = SampleStddev(iou);
  return report;
}

}  // namespace

std::string_view SkinToneName(SkinTone t) {
  return kToneNames[static_cast<std::size_t>(t)];
}

std::optional<SkinTone> ParseSkinTone(std::string_view s) {
  const std::string lower = text::Lower(text::Trim(s));
  static constexpr std::array<std::string_view, 6> kArabic = {"1", "2", "3",
                                                              "4", "5", "6"};
  for (std::size_t i = 0; i < kToneNames.size(); ++i) {
    if (lower == text::Lower(kToneNames[i])) return static_cast<SkinTone>(i);
    if (i < kArabic.size() && lower == kArabic[i]) return static_cast<SkinTone>(i);
  }
  if (lower == "mixed") return SkinTone::kMix;
  return std::nullopt;
}

double SampleStddev(std::span<const double> values) {
  const std::size_t n = values.size();
  // Equal values must give exactly zero, which the rounded mean would not.
  if (n < 2 || std::adjacent_find(values.begin(), values.end(),
                                  std::not_equal_to<>()) == values.end()) {
    return 0.0;
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

const GroupResult* StratifiedReport::Find(SkinTone t) const {
  for (const GroupResult& g : groups) {
    if (g.tone == t) return &g;
  }
  return nullptr;
}

StratifiedReport BuildStratifiedReport(
    std::span<const std::pair<eval::ConfusionCounts, SkinTone>> results) {
  std::map<SkinTone, eval::ConfusionCounts> pooled;
  for (const auto& [counts, tone] : results) {
    if (tone != SkinTone::kUnknown) pooled[tone] += counts;
  }
  std::vector<GroupResult> groups;
  for (SkinTone tone : kStratifiedTones) {
    const auto it = pooled.find(tone);
    if (it == pooled.end() || it->second.total() == 0) continue;
    groups.push_back({tone, it->second, eval::Metrics(it->second)});
  }
  return Finish(std::move(groups));
}

StratifiedReport StratifiedFromMetrics(
    std::span<const std::pair<eval::MetricsReport, SkinTone>> groups) {
  std::vector<GroupResult> out;
  for (SkinTone tone : kStratifiedTones) {
    for (const auto& [metrics, t] : groups) {
      if (t != tone) continue;
      if (std::any_of(out.begin(), out.end(),
                      [tone](const GroupResult& g) { return g.tone == tone; })) {
        throw InvalidArgument(fmt::format("skin tone {} listed twice",
                                          SkinToneName(tone)));
      }
      out.push_back({tone, {}, metrics});
    }
  }
  return Finish(std::move(out));
}

double SkinFaceRatio(const BinaryMask& mask, const FaceRect& rect) {
  if (rect.w == 0 || rect.h == 0) {
    throw InvalidArgument("face rectangle has zero area");
  }
  if (rect.x + rect.w > mask.width() || rect.y + rect.h > mask.height()) {
    throw InvalidArgument(fmt::format(
        "face rectangle {},{},{},{} exceeds {}x{} mask", rect.x, rect.y, rect.w,
        rect.h, mask.width(), mask.height()));
  }
  std::size_t skin = 0;
  for (std::size_t y = rect.y; y < rect.y + rect.h; ++y) {
    for (std::size_t x = rect.x; x < rect.x + rect.w; ++x) skin += mask.at(x, y);
  }
  return static_cast<double>(skin) / static_cast<double>(rect.w * rect.h);
}

RatioDistribution RatioDistribution::FromRatios(std::span<const double> ratios,
                                                std::size_t bins) {
  if (ratios.empty()) throw InvalidArgument("no ratios to distribute");
  if (bins < 2) throw InvalidArgument("ratio distribution needs >= 2 bins");
  std::vector<double> counts(bins, 0.0);
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw InvalidArgument(fmt::format("ratio {} outside [0, 1]", r));
    }
    counts[BinOf(r, 1.0, bins)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(ratios.size());
  return RatioDistribution(std::move(counts));
}

RatioDistribution RatioDistribution::FromWeights(std::vector<double> weights) {
  if (weights.size() < 2) throw InvalidArgument("distribution needs >= 2 bins");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("distribution weights must be finite and >= 0");
    }
    sum += w;
  }
  if (sum <= 0.0) throw InvalidArgument("distribution has no mass");
  for (double& w : weights) w /= sum;
  return RatioDistribution(std::move(weights));
}

double KlDivergence(const RatioDistribution& p, const RatioDistribution& q,
                    double eps) {
  if (p.bins() != q.bins()) {
    throw InvalidArgument(fmt::format("bin count mismatch: {} vs {}", p.bins(),
                                      q.bins()));
  }
  if (!(eps > 0.0)) throw InvalidArgument("kl eps must be > 0");
  const auto& pp = p.probabilities();
  const auto& qq = q.probabilities();
  const double n = static_cast<double>(pp.size());
  const double p_norm = std::accumulate(pp.begin(), pp.end(), 0.0) + eps * n;
  const double q_norm = std::accumulate(qq.begin(), qq.end(), 0.0) + eps * n;
  double kl = 0.0;
  for (std::size_t i = 0; i < pp.size(); ++i) {
    const double pi = (pp[i] + eps) / p_norm;
    const double qi = (qq[i] + eps) / q_norm;
    kl += pi * std::log(pi / qi);
  }
  // Rounding can leave a tiny negative residue for identical inputs.
  return std::max(kl, 0.0);
}

std::string_view AxisPairName(AxisPair pair) {
  switch (pair) {
    case AxisPair::kSV: return "sv";
    case AxisPair::kSH: return "sh";
    case AxisPair::kVH: return "vh";
  }
  return "?";
}

std::optional<AxisPair> ParseAxisPair(std::string_view s) {
  const std::string lower = text::Lower(s);
  if (lower == "sv") return AxisPair::kSV;
  if (lower == "sh") return AxisPair::kSH;
  if (lower == "vh") return AxisPair::kVH;
  return std::nullopt;
}

Histogram2D::Histogram2D(AxisPair pair, std::size_t bins_x, std::size_t bins_y)
    : pair_(pair), bins_x_(bins_x), bins_y_(bins_y) {
  if (bins_x == 0 || bins_y == 0) throw InvalidArgument("heatmap needs bins");
  counts_.assign(bins_x * bins_y, 0);
}

void Histogram2D::Add(RgbPixel p) {
  const color::HsvPixel hsv = color::RgbToHsv(p);
  std::size_t x = 0, y = 0;
  switch (pair_) {
    case AxisPair::kSV:
      x = BinOf(hsv.s, 1.0, bins_x_);
      y = BinOf(hsv.v, 1.0, bins_y_);
      break;
    case AxisPair::kSH:
      x = BinOf(hsv.s, 1.0, bins_x_);
      y = BinOf(hsv.h, 360.0, bins_y_);
      break;
    case AxisPair::kVH:
      x = BinOf(hsv.v, 1.0, bins_x_);
      y = BinOf(hsv.h, 360.0, bins_y_);
      break;
  }
  ++counts_[y * bins_x_ + x];
}

std::uint64_t Histogram2D::Total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::size_t Histogram2D::Support() const {
  return static_cast<std::size_t>(
      std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; }));
}

Histogram2D& Histogram2D::operator+=(const Histogram2D& other) {
  if (other.pair_ != pair_ || other.bins_x_ != bins_x_ || other.bins_y_ != bins_y_) {
    throw InvalidArgument("cannot add heatmaps of different layout");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

std::string Histogram2D::ToCsv() const {
  std::string out;
  for (std::size_t y = 0; y < bins_y_; ++y) {
    for (std::size_t x = 0; x < bins_x_; ++x) {
      if (x > 0) out += ',';
      out += std::to_string(at(x, y));
    }
    out += '\n';
  }
  return out;
}

Histogram2D HsvHeatmap(std::span<const MaskedImage> samples, AxisPair pair,
                       std::size_t bins) {
  Histogram2D hist(pair, bins, bins);
  for (const MaskedImage& s : samples) {
    if (!SameShape(*s.image, *s.mask)) {
      throw InvalidArgument("image and mask dimensions differ");
    }
    const auto pixels = s.image->pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if ((*s.mask)[i]) hist.Add(pixels[i]);
    }
  }
  return hist;
}

std::string StratifiedCsv(const StratifiedReport& report) {
  std::string out = "metric";
  for (SkinTone t : kStratifiedTones) out += fmt::format(",{}", SkinToneName(t));
  out += ",sigma\n";
  const auto row = [&](std::string_view name, double eval::MetricsReport::*field,
                       double sigma) {
    out += name;
    for (SkinTone t : kStratifiedTones) {
      out += ',';
      if (const GroupResult* g = report.Find(t)) {
        out += fmt::format("{:.2f}", 100.0 * g->metrics.*field);
      }
    }
    out += fmt::format(",{:.2f}\n", 100.0 * sigma);
  };
  row("f1", &eval::MetricsReport::f1, report.sigma_f1);
  row("iou", &eval::MetricsReport::iou, report.sigma_iou);
  return out;
}

std::string StratifiedDetailCsv(const StratifiedReport& report) {
  std::string out = "skin_type,tp,fp,tn,fn,accuracy,precision,recall,f1,iou\n";
  for (const GroupResult& g : report.groups) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", SkinToneName(g.tone),
                       g.counts.tp, g.counts.fp, g.counts.tn, g.counts.fn,
                       eval::FormatReal(g.metrics.accuracy),
                       eval::FormatReal(g.metrics.precision),
                       eval::FormatReal(g.metrics.recall),
                       eval::FormatReal(g.metrics.f1),
                       eval::FormatReal(g.metrics.iou));
  }
  return out;
}

}  // namespace skinaudit::bias

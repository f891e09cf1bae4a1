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

// Segmentation metrics: thresholding, confusion counts, the five ratio
// metrics, per-pixel binary cross-entropy and precision-recall sweeps.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skinaudit/image.hpp"

namespace skinaudit::eval {

inline constexpr double kDefaultDelta = 0.5;
inline constexpr double kDefaultBceEps = 1e-7;

/// 1 where p >= delta. Throws unless 0 <= delta <= 1.
BinaryMask Binarize(const ProbabilityMap& pm, double delta = kDefaultDelta);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp, fp += o.fp, tn += o.tn, fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) {
    return a += b;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts Confusion(const BinaryMask& pred, const BinaryMask& gt);

/// All values in [0, 1].
///
/// A ratio with a zero denominator measures an empty set and is taken as
/// vacuously perfect: precision is 1 when nothing is predicted, recall is 1
/// when nothing is actually skin, IoU is 1 when both are empty. F1 is the
/// harmonic mean of precision and recall, 0 when both are 0.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
};

/// Throws InvalidArgument when the counts are all zero.
MetricsReport Metrics(const ConfusionCounts& c);

/// Mean per-pixel binary cross-entropy with p clamped to [eps, 1 - eps].
double Bce(const ProbabilityMap& pm, const BinaryMask& gt,
           double eps = kDefaultBceEps);

struct PrPoint {
  double delta = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct ScoredMask {
  const ProbabilityMap* prediction;
  const BinaryMask* truth;
};

/// Micro-averaged precision/recall at each threshold. Thresholds must be
/// ascending and inside [0, 1].
std::vector<PrPoint> PrCurve(std::span<const ScoredMask> pairs,
                             std::span<const double> thresholds);

/// `steps` evenly spaced thresholds from 0 to 1 inclusive (steps >= 2).
std::vector<double> UniformThresholds(std::size_t steps);

// Report formatting. Reals are printed with fixed precision so reruns are
// byte-identical.

std::string MetricsCsvHeader();
/// scope,id,tp,fp,tn,fn,accuracy,precision,recall,f1,iou,bce
std::string MetricsCsvRow(const std::string& scope, const std::string& id,
                          const ConfusionCounts& c, const MetricsReport& m,
                          double bce);
std::string PrCurveCsv(std::span<const PrPoint> curve);

std::string FormatReal(double v);

}  // namespace skinaudit::eval

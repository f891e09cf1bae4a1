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

#include "skinaudit/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace skinaudit::eval {

namespace {

void CheckDelta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidArgument(fmt::format("threshold {} outside [0, 1]", delta));
  }
}

double Ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return 1.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

BinaryMask Binarize(const ProbabilityMap& pm, double delta) {
  CheckDelta(delta);
  BinaryMask out(pm.width(), pm.height());
  const auto values = pm.values();
  for (std::size_t i = 0; i < values.size(); ++i) out.set(i, values[i] >= delta);
  return out;
}

ConfusionCounts Confusion(const BinaryMask& pred, const BinaryMask& gt) {
  if (!SameShape(pred, gt)) {
    throw InvalidArgument(fmt::format("prediction {}x{} vs ground truth {}x{}",
                                      pred.width(), pred.height(), gt.width(),
                                      gt.height()));
  }
  const auto p = pred.bits();
  const auto g = gt.bits();
  ConfusionCounts c;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

MetricsReport Metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw InvalidArgument("metrics of an empty comparison");
  MetricsReport m;
  m.accuracy = Ratio(c.tp + c.tn, c.total());
  m.precision = Ratio(c.tp, c.tp + c.fp);
  m.recall = Ratio(c.tp, c.tp + c.fn);
  const double pr = m.precision + m.recall;
  m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  m.iou = Ratio(c.tp, c.tp + c.fp + c.fn);
  return m;
}

double Bce(const ProbabilityMap& pm, const BinaryMask& gt, double eps) {
  if (!SameShape(pm, gt)) {
    throw InvalidArgument("probability map and ground truth dimensions differ");
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw InvalidArgument(fmt::format("bce eps {} outside (0, 0.5)", eps));
  }
  const auto values = pm.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = std::clamp(values[i], eps, 1.0 - eps);
    sum += gt[i] ? std::log(p) : std::log(1.0 - p);
  }
  return -sum / static_cast<double>(values.size());
}

std::vector<PrPoint> PrCurve(std::span<const ScoredMask> pairs,
                             std::span<const double> thresholds) {
  if (pairs.empty()) throw InvalidArgument("precision-recall curve needs data");
  if (thresholds.empty()) throw InvalidArgument("no thresholds given");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    CheckDelta(thresholds[i]);
    if (i > 0 && thresholds[i] < thresholds[i - 1]) {
      throw InvalidArgument("thresholds must be ascending");
    }
  }

  // Scores of actual skin and actual background, sorted, so each threshold
  // costs two binary searches. Counting p >= delta this way gives exactly
  // the counts Binarize + Confusion would.
  std::vector<double> positive, negative;
  for (const ScoredMask& pair : pairs) {
    if (!SameShape(*pair.prediction, *pair.truth)) {
      throw InvalidArgument("probability map and ground truth dimensions differ");
    }
    const auto values = pair.prediction->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      ((*pair.truth)[i] ? positive : negative).push_back(values[i]);
    }
  }
  std::sort(positive.begin(), positive.end());
  std::sort(negative.begin(), negative.end());

  std::vector<PrPoint> curve;
  curve.reserve(thresholds.size());
  for (double delta : thresholds) {
    ConfusionCounts c;
    c.tp = static_cast<std::uint64_t>(
        positive.end() - std::lower_bound(positive.begin(), positive.end(), delta));
    c.fn = positive.size() - c.tp;
    c.fp = static_cast<std::uint64_t>(
        negative.end() - std::lower_bound(negative.begin(), negative.end(), delta));
    c.tn = negative.size() - c.fp;
    const MetricsReport m = Metrics(c);
    curve.push_back({delta, m.precision, m.recall});
  }
  return curve;
}

std::vector<double> UniformThresholds(std::size_t steps) {
  if (steps < 2) throw InvalidArgument("need at least two thresholds");
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return out;
}

std::string FormatReal(double v) { return fmt::format("{:.6f}", v); }

std::string MetricsCsvHeader() {
  return "scope,id,tp,fp,tn,fn,accuracy,precision,recall,f1,iou,bce\n";
}

std::string MetricsCsvRow(const std::string& scope, const std::string& id,
                          const ConfusionCounts& c, const MetricsReport& m,
                          double bce) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", scope, id, c.tp,
                     c.fp, c.tn, c.fn, FormatReal(m.accuracy),
                     FormatReal(m.precision), FormatReal(m.recall),
                     FormatReal(m.f1), FormatReal(m.iou), FormatReal(bce));
}

std::string PrCurveCsv(std::span<const PrPoint> curve) {
  std::string out = "delta,precision,recall\n";
  for (const PrPoint& p : curve) {
    out += fmt::format("{},{},{}\n", FormatReal(p.delta), FormatReal(p.precision),
                       FormatReal(p.recall));
  }
  return out;
}

}  // namespace skinaudit::eval

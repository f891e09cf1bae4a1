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

#include <gtest/gtest.h>

#include <cmath>

#include "skinaudit/error.hpp"
#include "test_util.hpp"

namespace skinaudit::eval {
namespace {

using testing::Rng;

BinaryMask Mask2x2(std::vector<std::uint8_t> bits) { return BinaryMask(2, 2, std::move(bits)); }

// Brute-force pixel enumeration.
ConfusionCounts OracleConfusion(const BinaryMask& pred, const BinaryMask& gt) {
  ConfusionCounts c;
  for (std::size_t y = 0; y < gt.height(); ++y) {
    for (std::size_t x = 0; x < gt.width(); ++x) {
      const bool p = pred.at(x, y), g = gt.at(x, y);
      if (p && g) ++c.tp;
      if (p && !g) ++c.fp;
      if (!p && g) ++c.fn;
      if (!p && !g) ++c.tn;
    }
  }
  return c;
}

TEST(Binarize, BoundaryIsInclusive) {
  ProbabilityMap pm(3, 1);
  pm.set(0, 0.5);
  pm.set(1, 0.49);
  pm.set(2, 0.51);
  const BinaryMask m = Binarize(pm, 0.5);
  EXPECT_TRUE(m[0]);
  EXPECT_FALSE(m[1]);
  EXPECT_TRUE(m[2]);
  EXPECT_EQ(Binarize(ProbabilityMap(4, 4, 0.0), 0.01).count(), 0u);
  EXPECT_THROW(Binarize(pm, -0.1), InvalidArgument);
  EXPECT_THROW(Binarize(pm, 1.1), InvalidArgument);
}

TEST(Binarize, MonotoneInDelta) {
  Rng rng(1);
  const ProbabilityMap pm = testing::RandomProbabilities(rng, 20, 20);
  EXPECT_EQ(Binarize(pm, 0.0).count(), pm.size());
  for (double lo = 0.0; lo <= 1.0; lo += 0.1) {
    const BinaryMask a = Binarize(pm, lo), b = Binarize(pm, std::min(1.0, lo + 0.05));
    for (std::size_t i = 0; i < pm.size(); ++i) ASSERT_GE(a[i], b[i]);
  }
}

TEST(Confusion, Examples) {
  const BinaryMask pred = Mask2x2({1, 1, 0, 0}), gt = Mask2x2({1, 0, 1, 0});
  EXPECT_EQ(Confusion(pred, gt), (ConfusionCounts{1, 1, 1, 1}));
  const ConfusionCounts same = Confusion(gt, gt);
  EXPECT_EQ(same.fp + same.fn, 0u);
  const ConfusionCounts inv = Confusion(Mask2x2({0, 1, 0, 1}), gt);
  EXPECT_EQ(inv.tp + inv.tn, 0u);
  EXPECT_THROW(Confusion(BinaryMask(2, 3), gt), InvalidArgument);
}

TEST(Confusion, MatchesBruteForce) {
  Rng rng(2);
  for (int n = 0; n < 50; ++n) {
    const BinaryMask p = testing::RandomMask(rng, 17, 13, 0.3);
    const BinaryMask g = testing::RandomMask(rng, 17, 13, 0.6);
    const ConfusionCounts c = Confusion(p, g);
    ASSERT_EQ(c, OracleConfusion(p, g));
    ASSERT_EQ(c.total(), 17u * 13u);
  }
}

TEST(Metrics, Examples) {
  const MetricsReport m = Metrics({1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 0.5);
  EXPECT_DOUBLE_EQ(m.iou, 1.0 / 3.0);

  const MetricsReport perfect = Metrics({7, 0, 0, 0});
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  EXPECT_EQ(perfect.iou, 1.0);

  const MetricsReport vacuous = Metrics({0, 0, 9, 0});
  EXPECT_EQ(vacuous.accuracy, 1.0);
  EXPECT_EQ(vacuous.precision, 1.0);
  EXPECT_EQ(vacuous.recall, 1.0);
  EXPECT_EQ(vacuous.f1, 1.0);
  EXPECT_EQ(vacuous.iou, 1.0);

  EXPECT_THROW(Metrics({0, 0, 0, 0}), InvalidArgument);
}

TEST(Metrics, OneSidedZeroDenominators) {
  // Nothing predicted but skin present: precision is vacuous, recall 0.
  const MetricsReport missed = Metrics({0, 0, 5, 3});
  EXPECT_EQ(missed.precision, 1.0);
  EXPECT_EQ(missed.recall, 0.0);
  EXPECT_EQ(missed.iou, 0.0);
  // Skin predicted where there is none: recall vacuous, precision 0.
  const MetricsReport spurious = Metrics({0, 4, 5, 0});
  EXPECT_EQ(spurious.precision, 0.0);
  EXPECT_EQ(spurious.recall, 1.0);
  EXPECT_EQ(spurious.f1, 0.0);
}

TEST(Metrics, IdentitiesOnRandomCounts) {
  Rng rng(3);
  std::uniform_int_distribution<std::uint64_t> d(0, 5000);
  for (int n = 0; n < 2000; ++n) {
    const ConfusionCounts c{d(rng) + 1, d(rng), d(rng), d(rng)};
    const MetricsReport m = Metrics(c);
    const double pre = double(c.tp) / double(c.tp + c.fp);
    const double rec = double(c.tp) / double(c.tp + c.fn);
    ASSERT_NEAR(m.precision, pre, 1e-12);
    ASSERT_NEAR(m.recall, rec, 1e-12);
    ASSERT_NEAR(m.f1, 2 * pre * rec / (pre + rec), 1e-12);
    ASSERT_NEAR(m.iou, m.f1 / (2 - m.f1), 1e-12);
    ASSERT_LE(m.iou, m.f1 + 1e-15);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1, m.iou}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Bce, Analytic) {
  const BinaryMask gt = [] { Rng rng(4); return testing::RandomMask(rng, 8, 8); }();
  EXPECT_NEAR(Bce(ProbabilityMap(8, 8, 0.5), gt), std::log(2.0), 1e-12);
  ProbabilityMap exact(8, 8);
  for (std::size_t i = 0; i < gt.size(); ++i) exact.set(i, gt[i] ? 1.0 : 0.0);
  const double eps = 1e-7;
  EXPECT_LE(Bce(exact, gt, eps), 2 * eps);
  EXPECT_NEAR(Bce(exact, gt, eps), -std::log1p(-eps), 1e-15);
  EXPECT_THROW(Bce(exact, BinaryMask(4, 4)), InvalidArgument);
  EXPECT_THROW(Bce(exact, gt, 0.0), InvalidArgument);
}

TEST(Bce, MatchesSummationOracle) {
  Rng rng(5);
  for (int n = 0; n < 100; ++n) {
    const ProbabilityMap pm = testing::RandomProbabilities(rng, 4, 4);
    const BinaryMask gt = testing::RandomMask(rng, 4, 4);
    double sum = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
      const double p = std::clamp(pm[i], 1e-7, 1 - 1e-7);
      sum += gt[i] ? std::log(p) : std::log(1 - p);
    }
    ASSERT_NEAR(Bce(pm, gt), -sum / 16.0, 1e-12);
  }
}

TEST(Bce, DecreasesWhenMovingTowardLabel) {
  Rng rng(6);
  std::uniform_int_distribution<std::size_t> pick(0, 35);
  for (int n = 0; n < 200; ++n) {
    ProbabilityMap pm = testing::RandomProbabilities(rng, 6, 6);
    const BinaryMask gt = testing::RandomMask(rng, 6, 6);
    const double before = Bce(pm, gt);
    const std::size_t i = pick(rng);
    const double target = gt[i] ? 1.0 : 0.0;
    pm.set(i, pm[i] + 0.5 * (target - pm[i]));
    ASSERT_LE(Bce(pm, gt), before);
  }
}

TEST(PrCurve, HandEnumeratedExample) {
  const ProbabilityMap pm(2, 1, std::vector<double>{0.2, 0.8});
  const BinaryMask gt(2, 1, std::vector<std::uint8_t>{0, 1});
  const ScoredMask pairs[] = {{&pm, &gt}};
  const double deltas[] = {0.0, 0.1, 0.5, 0.9};
  const auto curve = PrCurve(pairs, deltas);
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(curve[1].precision, 0.5);
  EXPECT_DOUBLE_EQ(curve[1].recall, 1.0);
  EXPECT_DOUBLE_EQ(curve[2].precision, 1.0);
  EXPECT_DOUBLE_EQ(curve[2].recall, 1.0);
  EXPECT_EQ(curve[3].recall, 0.0);
  EXPECT_EQ(curve[3].precision, 1.0);  // vacuous: nothing predicted
}

TEST(PrCurve, MatchesPooledBinarization) {
  Rng rng(7);
  std::vector<ProbabilityMap> maps;
  std::vector<BinaryMask> truths;
  for (int i = 0; i < 6; ++i) {
    maps.push_back(testing::RandomProbabilities(rng, 9, 7));
    truths.push_back(testing::RandomMask(rng, 9, 7));
  }
  std::vector<ScoredMask> pairs;
  for (int i = 0; i < 6; ++i) pairs.push_back({&maps[i], &truths[i]});
  const auto deltas = UniformThresholds(21);
  const auto curve = PrCurve(pairs, deltas);
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    ConfusionCounts pooled;
    for (int i = 0; i < 6; ++i) pooled += Confusion(Binarize(maps[i], deltas[k]), truths[i]);
    const MetricsReport m = Metrics(pooled);
    ASSERT_EQ(curve[k].delta, deltas[k]);
    ASSERT_NEAR(curve[k].precision, m.precision, 1e-12);
    ASSERT_NEAR(curve[k].recall, m.recall, 1e-12);
    if (k > 0) ASSERT_LE(curve[k].recall, curve[k - 1].recall);
  }
}

TEST(PrCurve, RejectsBadInput) {
  const ProbabilityMap pm(2, 2);
  const BinaryMask gt(2, 2);
  const ScoredMask pairs[] = {{&pm, &gt}};
  const double descending[] = {0.5, 0.1};
  const double ok[] = {0.5};
  EXPECT_THROW(PrCurve({}, ok), InvalidArgument);
  EXPECT_THROW(PrCurve(pairs, {}), InvalidArgument);
  EXPECT_THROW(PrCurve(pairs, descending), InvalidArgument);
}

TEST(UniformThresholds, Endpoints) {
  const auto t = UniformThresholds(11);
  ASSERT_EQ(t.size(), 11u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  EXPECT_DOUBLE_EQ(t[3], 0.3);
}

TEST(Csv, Rows) {
  EXPECT_EQ(FormatReal(1.0 / 3.0), "0.333333");
  const std::string row = MetricsCsvRow("overall", "ALL", {1, 1, 1, 1}, Metrics({1, 1, 1, 1}), 0.25);
  EXPECT_EQ(row, "overall,ALL,1,1,1,1,0.500000,0.500000,0.500000,0.500000,0.333333,0.250000\n");
}

}  // namespace
}  // namespace skinaudit::eval

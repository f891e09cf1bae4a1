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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skinaudit/image.hpp"

namespace skinaudit::detect {

struct LabeledImage {
  const RgbImage* image;
  const BinaryMask* mask;
};

struct BayesOptions {
  int bins_per_channel = 32;
  double smoothing_alpha = 1.0;
  /// Defaults to the skin-pixel fraction of the training corpus.
  std::optional<double> prior_skin;
};

/// Skin / non-skin RGB histogram pair combined with Bayes' rule.
///
/// Each channel is quantized to floor(c * bins / 256). Class likelihoods use
/// Laplace smoothing:
///
///   P(c | class) = (count(c) + alpha) / (total + alpha * bins^3)
///
/// and the returned skin probability is the posterior under `prior_skin`.
class BayesModel {
 public:
  /// Validates every invariant; throws InvalidArgument on violation.
  BayesModel(int bins_per_channel, double smoothing_alpha, double prior_skin,
             std::vector<std::uint64_t> skin_hist,
             std::vector<std::uint64_t> nonskin_hist);

  static BayesModel Train(std::span<const LabeledImage> corpus,
                          const BayesOptions& options = {});

  int bins_per_channel() const { return bins_; }
  double smoothing_alpha() const { return alpha_; }
  double prior_skin() const { return prior_; }
  std::uint64_t skin_total() const { return skin_total_; }
  std::uint64_t nonskin_total() const { return nonskin_total_; }
  const std::vector<std::uint64_t>& skin_hist() const { return skin_; }
  const std::vector<std::uint64_t>& nonskin_hist() const { return nonskin_; }

  std::size_t CellIndex(RgbPixel p) const;

  double Probability(RgbPixel p) const;
  ProbabilityMap Predict(const RgbImage& img) const;

  /// Copy with a different smoothing constant (counts unchanged).
  BayesModel WithAlpha(double alpha) const;

  std::string Serialize() const;
  static BayesModel Deserialize(std::string_view text);
  void Save(const std::filesystem::path& path) const;
  static BayesModel Load(const std::filesystem::path& path);

  friend bool operator==(const BayesModel&, const BayesModel&) = default;

 private:
  int bins_;
  double alpha_;
  double prior_;
  std::vector<std::uint64_t> skin_;
  std::vector<std::uint64_t> nonskin_;
  std::uint64_t skin_total_ = 0;
  std::uint64_t nonskin_total_ = 0;
};

inline ProbabilityMap PredictBayes(const BayesModel& model,
                                   const RgbImage& img) {
  return model.Predict(img);
}

}  // namespace skinaudit::detect

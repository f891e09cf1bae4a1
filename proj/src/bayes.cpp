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

#include "skinaudit/bayes.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "text_util.hpp"

namespace skinaudit::detect {

namespace {

constexpr std::string_view kMagic = "skinaudit-bayes";
constexpr int kFormatVersion = 1;

std::size_t CellCount(int bins) {
  const auto b = static_cast<std::size_t>(bins);
  return b * b * b;
}

std::size_t Cell(RgbPixel p, int bins) {
  const auto b = static_cast<std::size_t>(bins);
  const auto q = [b](std::uint8_t c) { return static_cast<std::size_t>(c) * b / 256; };
  return (q(p.r) * b + q(p.g)) * b + q(p.b);
}

void CheckBins(int bins) {
  if (bins < 1 || bins > 256) {
    throw InvalidArgument(fmt::format("bins per channel {} outside [1, 256]", bins));
  }
}

void CheckAlpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument(fmt::format("smoothing alpha {} must be >= 0", alpha));
  }
}

void CheckPrior(double prior) {
  if (!(prior > 0.0 && prior < 1.0)) {
    throw InvalidArgument(fmt::format("skin prior {} outside (0, 1)", prior));
  }
}

}  // namespace

BayesModel::BayesModel(int bins_per_channel, double smoothing_alpha,
                       double prior_skin, std::vector<std::uint64_t> skin_hist,
                       std::vector<std::uint64_t> nonskin_hist)
    : bins_(bins_per_channel),
      alpha_(smoothing_alpha),
      prior_(prior_skin),
      skin_(std::move(skin_hist)),
      nonskin_(std::move(nonskin_hist)) {
  CheckBins(bins_);
  CheckAlpha(alpha_);
  CheckPrior(prior_);
  if (skin_.size() != CellCount(bins_) || nonskin_.size() != CellCount(bins_)) {
    throw InvalidArgument("histogram size does not match bins^3");
  }
  skin_total_ = std::accumulate(skin_.begin(), skin_.end(), std::uint64_t{0});
  nonskin_total_ =
      std::accumulate(nonskin_.begin(), nonskin_.end(), std::uint64_t{0});
  if (skin_total_ == 0 || nonskin_total_ == 0) {
    throw InvalidArgument("model needs at least one skin and one non-skin pixel");
  }
}

BayesModel BayesModel::Train(std::span<const LabeledImage> corpus,
                             const BayesOptions& options) {
  CheckBins(options.bins_per_channel);
  const int bins = options.bins_per_channel;
  std::vector<std::uint64_t> skin(CellCount(bins), 0);
  std::vector<std::uint64_t> nonskin(CellCount(bins), 0);
  std::uint64_t skin_count = 0, nonskin_count = 0;

  for (const LabeledImage& sample : corpus) {
    if (!SameShape(*sample.image, *sample.mask)) {
      throw InvalidArgument("image and mask dimensions differ");
    }
    const auto pixels = sample.image->pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if ((*sample.mask)[i]) {
        ++skin[Cell(pixels[i], bins)];
        ++skin_count;
      } else {
        ++nonskin[Cell(pixels[i], bins)];
        ++nonskin_count;
      }
    }
  }
  if (skin_count == 0 || nonskin_count == 0) {
    throw InvalidArgument(
        "training corpus needs at least one skin and one non-skin pixel");
  }
  const double prior =
      options.prior_skin.value_or(static_cast<double>(skin_count) /
                                  static_cast<double>(skin_count + nonskin_count));
  return BayesModel(bins, options.smoothing_alpha, prior, std::move(skin),
                    std::move(nonskin));
}

std::size_t BayesModel::CellIndex(RgbPixel p) const { return Cell(p, bins_); }

double BayesModel::Probability(RgbPixel p) const {
  const std::size_t cell = CellIndex(p);
  const double cells = static_cast<double>(CellCount(bins_));
  // Posterior with both likelihoods brought over a common denominator:
  //   (cs + a)(Tn + aK) pi / [(cs + a)(Tn + aK) pi + (cn + a)(Ts + aK)(1 - pi)]
  const double skin_num = (static_cast<double>(skin_[cell]) + alpha_) *
                          (static_cast<double>(nonskin_total_) + alpha_ * cells) *
                          prior_;
  const double nonskin_num =
      (static_cast<double>(nonskin_[cell]) + alpha_) *
      (static_cast<double>(skin_total_) + alpha_ * cells) * (1.0 - prior_);
  const double denom = skin_num + nonskin_num;
  // Only reachable with alpha = 0 on a cell neither class has seen.
  if (denom <= 0.0) return prior_;
  return skin_num / denom;
}

ProbabilityMap BayesModel::Predict(const RgbImage& img) const {
  std::vector<double> values(img.size());
  const auto pixels = img.pixels();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    values[i] = Probability(pixels[i]);
  }
  return ProbabilityMap(img.width(), img.height(), std::move(values));
}

BayesModel BayesModel::WithAlpha(double alpha) const {
  BayesModel copy = *this;
  CheckAlpha(alpha);
  copy.alpha_ = alpha;
  return copy;
}

// Text dump. Doubles use shortest round-trip form so a reload is exact.
// Only non-zero cells are listed.
//
//   skinaudit-bayes 1
//   bins 32
//   alpha 1
//   prior 0.25
//   skin_total 1200
//   nonskin_total 3600
//   skin <cell> <count>
//   nonskin <cell> <count>
std::string BayesModel::Serialize() const {
  std::string out = fmt::format("{} {}\n", kMagic, kFormatVersion);
  out += fmt::format("bins {}\nalpha {}\nprior {}\n", bins_, alpha_, prior_);
  out += fmt::format("skin_total {}\nnonskin_total {}\n", skin_total_,
                     nonskin_total_);
  for (std::size_t i = 0; i < skin_.size(); ++i) {
    if (skin_[i] != 0) out += fmt::format("skin {} {}\n", i, skin_[i]);
  }
  for (std::size_t i = 0; i < nonskin_.size(); ++i) {
    if (nonskin_[i] != 0) out += fmt::format("nonskin {} {}\n", i, nonskin_[i]);
  }
  return out;
}

BayesModel BayesModel::Deserialize(std::string_view text) {
  const auto lines = text::SplitLines(text);
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(msg, line_no, 0);
  };

  std::optional<int> bins;
  std::optional<double> alpha, prior;
  std::optional<std::uint64_t> skin_total, nonskin_total;
  std::vector<std::uint64_t> skin, nonskin;
  bool header_seen = false;

  for (std::string_view raw : lines) {
    ++line_no;
    const std::string_view line = text::Trim(raw);
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    for (auto part : text::Split(line, ' ')) {
      if (!part.empty()) f.push_back(part);
    }
    if (!header_seen) {
      header_seen = true;
      if (f.size() != 2 || f[0] != kMagic) throw fail("not a skinaudit bayes model");
      if (text::ParseInt<int>(f[1]) != kFormatVersion) {
        throw fail("unsupported model version '" + std::string(f[1]) + "'");
      }
      continue;
    }
    if (f[0] == "skin" || f[0] == "nonskin") {
      if (!bins) throw fail("cell listed before 'bins'");
      if (f.size() != 3) throw fail("expected '<class> <cell> <count>'");
      const auto cell = text::ParseInt<std::size_t>(f[1]);
      const auto count = text::ParseInt<std::uint64_t>(f[2]);
      if (!cell || !count) throw fail("malformed cell entry");
      auto& grid = f[0] == "skin" ? skin : nonskin;
      if (*cell >= grid.size()) throw fail("cell index out of range");
      grid[*cell] = *count;
      continue;
    }
    if (f.size() != 2) throw fail("expected '<key> <value>'");
    if (f[0] == "bins") {
      bins = text::ParseInt<int>(f[1]);
      if (!bins || *bins < 1 || *bins > 256) throw fail("invalid bins");
      skin.assign(CellCount(*bins), 0);
      nonskin.assign(CellCount(*bins), 0);
    } else if (f[0] == "alpha") {
      alpha = text::ParseDouble(f[1]);
      if (!alpha) throw fail("invalid alpha");
    } else if (f[0] == "prior") {
      prior = text::ParseDouble(f[1]);
      if (!prior) throw fail("invalid prior");
    } else if (f[0] == "skin_total") {
      skin_total = text::ParseInt<std::uint64_t>(f[1]);
      if (!skin_total) throw fail("invalid skin_total");
    } else if (f[0] == "nonskin_total") {
      nonskin_total = text::ParseInt<std::uint64_t>(f[1]);
      if (!nonskin_total) throw fail("invalid nonskin_total");
    } else {
      throw fail("unknown key '" + std::string(f[0]) + "'");
    }
  }
  if (!header_seen) throw ParseError("empty model file", 1, 0);
  if (!bins || !alpha || !prior || !skin_total || !nonskin_total) {
    throw ParseError("model file is missing a required key", line_no, 0);
  }
  try {
    BayesModel model(*bins, *alpha, *prior, std::move(skin), std::move(nonskin));
    if (model.skin_total() != *skin_total ||
        model.nonskin_total() != *nonskin_total) {
      throw ParseError("histogram totals do not match the recorded totals",
                       line_no, 0);
    }
    return model;
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line_no, 0);
  }
}

void BayesModel::Save(const std::filesystem::path& path) const {
  text::WriteFile(path, Serialize());
}

BayesModel BayesModel::Load(const std::filesystem::path& path) {
  const std::string contents = text::ReadFile(path);
  try {
    return Deserialize(contents);
  } catch (const ParseError& e) {
    throw e.WithSource(path.string());
  }
}

}  // namespace skinaudit::detect

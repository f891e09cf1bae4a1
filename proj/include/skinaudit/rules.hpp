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

// Declarative per-pixel skin rules.
//
// A rule set is a disjunction of clauses, each clause a conjunction of
// predicates over the channels R, G, B (0..255), H (degrees), S, V (0..1)
// and Y, Cb, Cr (BT.601 full range, 0..255). Text form:
//
//   # comment
//   skin := R > 95 AND G > 40 AND ABS(R - G) > 15
//        OR Cr <= 1.5862*Cb + 20 AND H IN [340, 50]
//
// Keywords and channel names are case-insensitive. `X IN [lo, hi]` is an
// inclusive interval; lo > hi wraps around (meant for hue).

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skinaudit/image.hpp"

namespace skinaudit::detect {

enum class Channel { kR, kG, kB, kH, kS, kV, kY, kCb, kCr };

std::string_view ChannelName(Channel c);
std::optional<Channel> ParseChannel(std::string_view name);

enum class CompareOp { kLess, kLessEqual, kGreater, kGreaterEqual };

std::string_view CompareOpSymbol(CompareOp op);

/// A channel, or ABS(channel - minus) when `minus` is set.
struct Operand {
  Channel channel = Channel::kR;
  std::optional<Channel> minus;

  friend bool operator==(const Operand&, const Operand&) = default;
};

/// slope * channel + intercept
struct LinearBound {
  double slope = 1.0;
  Channel channel = Channel::kR;
  double intercept = 0.0;

  friend bool operator==(const LinearBound&, const LinearBound&) = default;
};

struct Comparison {
  Operand lhs;
  CompareOp op = CompareOp::kGreater;
  std::variant<double, LinearBound> rhs;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct Interval {
  Operand lhs;
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

using Predicate = std::variant<Comparison, Interval>;
using Clause = std::vector<Predicate>;

/// Channel values of one pixel in every supported color space.
struct ChannelValues {
  explicit ChannelValues(RgbPixel p);
  double operator[](Channel c) const { return values[static_cast<int>(c)]; }

  double values[9];
};

class RuleSet {
 public:
  /// Throws InvalidArgument if there are no clauses or a clause is empty.
  RuleSet(std::string name, std::vector<Clause> clauses);

  const std::string& name() const { return name_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  bool Matches(RgbPixel p) const;
  bool Matches(const ChannelValues& values) const;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;

 private:
  std::string name_;
  std::vector<Clause> clauses_;
};

bool Evaluate(const Predicate& pred, const ChannelValues& values);

inline bool EvaluateRuleSet(RgbPixel p, const RuleSet& rules) {
  return rules.Matches(p);
}

BinaryMask DetectRules(const RgbImage& img, const RuleSet& rules);

/// Throws ParseError carrying the line and column of the offending token.
RuleSet ParseRuleSet(std::string_view text);

/// Canonical text: one clause per line, single spaces, upper-case keywords,
/// shortest round-trip numbers. ParseRuleSet(SerializeRuleSet(r)) == r.
std::string SerializeRuleSet(const RuleSet& rules);

/// Accepts a file path or the name of a built-in preset ("kolkur").
RuleSet LoadRuleSet(const std::string& path_or_preset);

/// Built-in presets. "dahmani" is known but disabled and throws.
RuleSet PresetRuleSet(std::string_view name);
std::string_view PresetText(std::string_view name);

}  // namespace skinaudit::detect

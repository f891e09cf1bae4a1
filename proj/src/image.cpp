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

#include "skinaudit/image.hpp"

#include <algorithm>
#include <cmath>

namespace skinaudit {

namespace {

void CheckProbability(double p) {
  // NaN fails both comparisons.
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("probability " + std::to_string(p) +
                          " outside [0, 1]");
  }
}

}  // namespace

BinaryMask::BinaryMask(std::size_t width, std::size_t height,
                       std::vector<std::uint8_t> bits)
    : grid_(width, height, std::move(bits)) {
  for (std::uint8_t b : grid_.pixels()) {
    if (b > 1) throw InvalidArgument("mask value must be 0 or 1");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(
      std::count(grid_.pixels().begin(), grid_.pixels().end(), 1));
}

ProbabilityMap::ProbabilityMap(std::size_t width, std::size_t height,
                               double fill)
    : grid_(width, height, fill) {
  CheckProbability(fill);
}

ProbabilityMap::ProbabilityMap(std::size_t width, std::size_t height,
                               std::vector<double> values)
    : grid_(width, height, std::move(values)) {
  for (double p : grid_.pixels()) CheckProbability(p);
}

void ProbabilityMap::set(std::size_t x, std::size_t y, double p) {
  CheckProbability(p);
  grid_.at(x, y) = p;
}

void ProbabilityMap::set(std::size_t i, double p) {
  CheckProbability(p);
  grid_[i] = p;
}

}  // namespace skinaudit

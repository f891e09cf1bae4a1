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

// Pixel grids shared by every module: RGB images, binary skin masks and
// per-pixel skin probability maps. All grids are row-major.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skinaudit/error.hpp"

namespace skinaudit {

struct RgbPixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const RgbPixel&, const RgbPixel&) = default;
};

template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(Checked(width, height), fill) {}
  Grid(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != Checked(width, height)) {
      throw InvalidArgument("grid data size " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  const T& at(std::size_t x, std::size_t y) const {
    return data_[y * width_ + x];
  }
  T& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }

  const T& operator[](std::size_t i) const { return data_[i]; }
  T& operator[](std::size_t i) { return data_[i]; }

  std::span<const T> pixels() const { return data_; }
  std::span<T> pixels() { return data_; }

  bool same_shape(std::size_t w, std::size_t h) const {
    return width_ == w && height_ == h;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static std::size_t Checked(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) {
      throw InvalidArgument("grid dimensions must be positive");
    }
    return width * height;
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

using RgbImage = Grid<RgbPixel>;

/// Per-pixel skin label; 1 = skin. Values outside {0,1} are rejected.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(std::size_t width, std::size_t height, bool fill = false)
      : grid_(width, height, fill ? 1 : 0) {}
  BinaryMask(std::size_t width, std::size_t height,
             std::vector<std::uint8_t> bits);

  std::size_t width() const { return grid_.width(); }
  std::size_t height() const { return grid_.height(); }
  std::size_t size() const { return grid_.size(); }

  bool at(std::size_t x, std::size_t y) const { return grid_.at(x, y) != 0; }
  bool operator[](std::size_t i) const { return grid_[i] != 0; }
  void set(std::size_t x, std::size_t y, bool v) { grid_.at(x, y) = v ? 1 : 0; }
  void set(std::size_t i, bool v) { grid_[i] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return grid_.pixels(); }
  std::size_t count() const;

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return grid_.same_shape(other);
  }
  bool same_shape(std::size_t w, std::size_t h) const {
    return grid_.same_shape(w, h);
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  Grid<std::uint8_t> grid_;
};

/// Per-pixel skin probability in [0, 1].
class ProbabilityMap {
 public:
  ProbabilityMap() = default;
  ProbabilityMap(std::size_t width, std::size_t height, double fill = 0.0);
  ProbabilityMap(std::size_t width, std::size_t height,
                 std::vector<double> values);

  std::size_t width() const { return grid_.width(); }
  std::size_t height() const { return grid_.height(); }
  std::size_t size() const { return grid_.size(); }

  double at(std::size_t x, std::size_t y) const { return grid_.at(x, y); }
  double operator[](std::size_t i) const { return grid_[i]; }
  void set(std::size_t x, std::size_t y, double p);
  void set(std::size_t i, double p);

  std::span<const double> values() const { return grid_.pixels(); }

  bool same_shape(std::size_t w, std::size_t h) const {
    return grid_.same_shape(w, h);
  }

  friend bool operator==(const ProbabilityMap&,
                         const ProbabilityMap&) = default;

 private:
  Grid<double> grid_;
};

template <typename A, typename B>
bool SameShape(const A& a, const B& b) {
  return a.width() == b.width() && a.height() == b.height();
}

}  // namespace skinaudit

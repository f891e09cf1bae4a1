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
#include <span>
#include <vector>

#include "skinaudit/image.hpp"

namespace skinaudit::io {

/// Decoded 8-bit PNG: 1 channel for gray sources, 3 for color. Alpha is
/// dropped, palettes expanded and 16-bit samples reduced to 8 bits.
struct RawImage {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

RawImage ReadPng(const std::filesystem::path& path);

/// Reads only the header.
std::pair<std::size_t, std::size_t> PngSize(const std::filesystem::path& path);

/// Gray sources are replicated into all three channels.
RgbImage ReadRgb(const std::filesystem::path& path);

void WriteRgb(const std::filesystem::path& path, const RgbImage& img);
void WriteGray(const std::filesystem::path& path, std::size_t width,
               std::size_t height, std::span<const std::uint8_t> data);

}  // namespace skinaudit::io

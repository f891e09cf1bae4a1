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

// Corpus manifests and the file formats around them.
//
// A manifest is line-oriented text. Blank lines and lines starting with
// '#' are ignored; an optional `corpus <name>` line names the corpus; every other
// line is one sample as whitespace-separated key=value fields:
//
//   corpus ecu
//   id=im0001 image=img/im0001.png mask=gt/im0001.png skin_type=III
//   id=im0002 image=img/im0002.png faces=10,12,40,48;70,8,32,32 group=asian
//
// Keys: id and image are required; mask, skin_type, faces (x,y,w,h
// rectangles separated by ';'), prediction and group are optional. Values
// containing spaces may be double-quoted. Relative paths resolve against
// the manifest's directory.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skinaudit/bias.hpp"
#include "skinaudit/image.hpp"

namespace skinaudit::dataset {

struct SampleRecord {
  std::string id;
  std::filesystem::path image;
  std::optional<std::filesystem::path> mask;
  std::optional<bias::SkinTone> skin_type;
  std::vector<bias::FaceRect> faces;
  std::optional<std::filesystem::path> prediction;
  /// Free-form demographic group (e.g. an ethnicity label) for skin/face
  /// tables; independent of skin_type.
  std::optional<std::string> group;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct Manifest {
  std::string corpus;
  std::vector<SampleRecord> records;

  std::size_t size() const { return records.size(); }
};

struct ParseOptions {
  /// Directory that relative paths are resolved against.
  std::filesystem::path base_dir;
  /// Require every referenced file to exist.
  bool check_files = true;
};

/// Throws ParseError naming the line, or the duplicate id / missing path.
Manifest ParseManifest(std::string_view text, const ParseOptions& options);
Manifest LoadManifest(const std::filesystem::path& path, bool check_files = true);

/// Paths are written relative to the manifest's own directory.
std::string SerializeManifest(const Manifest& m,
                              const std::filesystem::path& manifest_dir);
void SaveManifest(const Manifest& m, const std::filesystem::path& path);

inline constexpr int kDefaultMaskThreshold = 127;

/// 1 where the gray level (luma for color files) exceeds `threshold`.
BinaryMask LoadMask(const std::filesystem::path& path,
                    int threshold = kDefaultMaskThreshold);
/// 0 / 255 grayscale PNG.
void SaveMask(const std::filesystem::path& path, const BinaryMask& mask);

/// 8-bit exchange format: p = value / 255.
ProbabilityMap LoadProbabilityMap(const std::filesystem::path& path);
/// Stores round(p * 255).
void SaveProbabilityMap(const std::filesystem::path& path,
                        const ProbabilityMap& pm);

/// One map per record, checked against the paired image's dimensions.
std::vector<ProbabilityMap> LoadPredictions(const Manifest& m);

struct SplitFractions {
  double train = 0.0;
  double val = 0.0;
  double test = 0.0;
};

struct Split {
  Manifest train;
  Manifest val;
  Manifest test;
};

/// Seeded shuffle, then floor(n * train) and floor(n * val) records, the
/// rest to test. Fractions must be >= 0 and sum to 1 within 1e-9.
Split SplitManifest(const Manifest& m, const SplitFractions& fractions,
                    std::uint64_t seed);

}  // namespace skinaudit::dataset

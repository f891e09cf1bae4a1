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

#include "skinaudit/dataset.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "skinaudit/color.hpp"
#include "skinaudit/png_io.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace skinaudit::dataset {

namespace {

struct Field {
  std::string key;
  std::string value;
  std::size_t column;
};

std::vector<Field> SplitFields(std::string_view line, std::size_t line_no) {
  std::vector<Field> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != '=' &&
           !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i >= line.size() || line[i] != '=') {
      throw ParseError("expected key=value", line_no, start + 1);
    }
    Field f{std::string(line.substr(start, i - start)), {}, start + 1};
    ++i;  // '='
    if (i < line.size() && line[i] == '"') {
      const auto close = line.find('"', i + 1);
      if (close == std::string_view::npos) {
        throw ParseError("unterminated quote", line_no, i + 1);
      }
      f.value = std::string(line.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      const std::size_t vstart = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
      }
      f.value = std::string(line.substr(vstart, i - vstart));
    }
    if (f.value.empty()) throw ParseError("empty value for '" + f.key + "'", line_no, f.column);
    fields.push_back(std::move(f));
  }
  return fields;
}

std::vector<bias::FaceRect> ParseFaces(std::string_view value, std::size_t line_no,
                                       std::size_t column) {
  std::vector<bias::FaceRect> faces;
  for (std::string_view rect : text::Split(value, ';')) {
    const auto parts = text::Split(rect, ',');
    if (parts.size() != 4) {
      throw ParseError("face must be x,y,w,h: '" + std::string(rect) + "'", line_no,
                       column);
    }
    std::size_t v[4];
    for (int k = 0; k < 4; ++k) {
      const auto n = text::ParseInt<std::size_t>(text::Trim(parts[k]));
      if (!n) {
        throw ParseError("bad face coordinate '" + std::string(parts[k]) + "'",
                         line_no, column);
      }
      v[k] = *n;
    }
    if (v[2] == 0 || v[3] == 0) {
      throw ParseError("face rectangle has zero area", line_no, column);
    }
    faces.push_back({v[0], v[1], v[2], v[3]});
  }
  return faces;
}

std::string Quote(const std::string& s) {
  const bool needs = s.find_first_of(" \t") != std::string::npos;
  return needs ? "\"" + s + "\"" : s;
}

std::string RelativePath(const fs::path& p, const fs::path& dir) {
  const fs::path base = fs::absolute(dir.empty() ? fs::path(".") : dir);
  const fs::path abs = fs::absolute(p).lexically_normal();
  const fs::path rel = abs.lexically_relative(base.lexically_normal());
  return rel.empty() ? abs.generic_string() : rel.generic_string();
}

// Unbiased draw from [0, bound) on top of the fully specified mt19937_64
// stream, so shuffles are identical on every platform.
std::uint64_t Bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

Manifest ParseManifest(std::string_view text, const ParseOptions& options) {
  Manifest m;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  const auto resolve = [&](const std::string& value) {
    fs::path p(value);
    if (p.is_relative() && !options.base_dir.empty()) p = options.base_dir / p;
    return p.lexically_normal();
  };
  const auto check_exists = [&](const fs::path& p, std::size_t column) {
    if (options.check_files && !fs::exists(p)) {
      throw ParseError("missing file " + p.string(), line_no, column);
    }
  };

  for (std::string_view raw : text::SplitLines(text)) {
    ++line_no;
    const std::string_view line = text::Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.substr(0, 7) == "corpus " || line == "corpus") {
      m.corpus = std::string(text::Trim(line.substr(6)));
      continue;
    }

    SampleRecord rec;
    bool has_image = false;
    std::set<std::string> seen;
    for (Field& f : SplitFields(line, line_no)) {
      if (!seen.insert(f.key).second) {
        throw ParseError("repeated field '" + f.key + "'", line_no, f.column);
      }
      if (f.key == "id") {
        rec.id = f.value;
      } else if (f.key == "image") {
        rec.image = resolve(f.value);
        check_exists(rec.image, f.column);
        has_image = true;
      } else if (f.key == "mask") {
        rec.mask = resolve(f.value);
        check_exists(*rec.mask, f.column);
      } else if (f.key == "prediction") {
        rec.prediction = resolve(f.value);
        check_exists(*rec.prediction, f.column);
      } else if (f.key == "skin_type") {
        rec.skin_type = bias::ParseSkinTone(f.value);
        if (!rec.skin_type) {
          throw ParseError("unknown skin_type '" + f.value + "'", line_no, f.column);
        }
      } else if (f.key == "faces") {
        rec.faces = ParseFaces(f.value, line_no, f.column);
      } else if (f.key == "group") {
        rec.group = f.value;
      } else {
        throw ParseError("unknown field '" + f.key + "'", line_no, f.column);
      }
    }
    if (rec.id.empty()) throw ParseError("record has no id", line_no, 0);
    if (!has_image) {
      throw ParseError("record '" + rec.id + "' has no image", line_no, 0);
    }
    if (!ids.insert(rec.id).second) {
      throw ParseError("duplicate id '" + rec.id + "'", line_no, 0);
    }
    m.records.push_back(std::move(rec));
  }
  if (m.records.empty()) throw ParseError("manifest has no records", line_no, 0);
  return m;
}

Manifest LoadManifest(const fs::path& path, bool check_files) {
  const std::string contents = text::ReadFile(path);
  try {
    return ParseManifest(contents, {path.parent_path(), check_files});
  } catch (const ParseError& e) {
    throw e.WithSource(path.string());
  }
}

std::string SerializeManifest(const Manifest& m, const fs::path& manifest_dir) {
  std::string out;
  if (!m.corpus.empty()) out += "corpus " + m.corpus + "\n";
  const fs::path& dir = manifest_dir;
  for (const SampleRecord& r : m.records) {
    out += "id=" + Quote(r.id);
    out += " image=" + Quote(RelativePath(r.image, dir));
    if (r.mask) out += " mask=" + Quote(RelativePath(*r.mask, dir));
    if (r.skin_type) out += fmt::format(" skin_type={}", bias::SkinToneName(*r.skin_type));
    if (!r.faces.empty()) {
      out += " faces=";
      for (std::size_t i = 0; i < r.faces.size(); ++i) {
        const auto& f = r.faces[i];
        out += fmt::format("{}{},{},{},{}", i ? ";" : "", f.x, f.y, f.w, f.h);
      }
    }
    if (r.prediction) out += " prediction=" + Quote(RelativePath(*r.prediction, dir));
    if (r.group) out += " group=" + Quote(*r.group);
    out += "\n";
  }
  return out;
}

void SaveManifest(const Manifest& m, const fs::path& path) {
  text::WriteFile(path, SerializeManifest(m, path.parent_path()));
}

BinaryMask LoadMask(const fs::path& path, int threshold) {
  const io::RawImage raw = io::ReadPng(path);
  std::vector<std::uint8_t> bits(raw.width * raw.height);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    double level;
    if (raw.channels == 1) {
      level = raw.data[i];
    } else {
      level = color::Luma({raw.data[3 * i], raw.data[3 * i + 1], raw.data[3 * i + 2]});
    }
    bits[i] = level > threshold ? 1 : 0;
  }
  return BinaryMask(raw.width, raw.height, std::move(bits));
}

void SaveMask(const fs::path& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> gray(mask.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask[i] ? 255 : 0;
  io::WriteGray(path, mask.width(), mask.height(), gray);
}

ProbabilityMap LoadProbabilityMap(const fs::path& path) {
  const io::RawImage raw = io::ReadPng(path);
  if (raw.channels != 1) {
    throw IoError(path.string() + ": prediction must be a grayscale image");
  }
  std::vector<double> values(raw.data.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = raw.data[i] / 255.0;
  return ProbabilityMap(raw.width, raw.height, std::move(values));
}

void SaveProbabilityMap(const fs::path& path, const ProbabilityMap& pm) {
  std::vector<std::uint8_t> gray(pm.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = color::ToByte(pm[i] * 255.0);
  io::WriteGray(path, pm.width(), pm.height(), gray);
}

std::vector<ProbabilityMap> LoadPredictions(const Manifest& m) {
  std::vector<ProbabilityMap> out;
  out.reserve(m.size());
  for (const SampleRecord& r : m.records) {
    if (!r.prediction) {
      throw InvalidArgument("record '" + r.id + "' has no prediction");
    }
    ProbabilityMap pm = LoadProbabilityMap(*r.prediction);
    const auto [w, h] = io::PngSize(r.image);
    if (!pm.same_shape(w, h)) {
      throw InvalidArgument(fmt::format(
          "record '{}': prediction is {}x{} but image is {}x{}", r.id, pm.width(),
          pm.height(), w, h));
    }
    out.push_back(std::move(pm));
  }
  return out;
}

Split SplitManifest(const Manifest& m, const SplitFractions& fr, std::uint64_t seed) {
  for (double f : {fr.train, fr.val, fr.test}) {
    if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("split fractions must be in [0, 1]");
  }
  if (std::fabs(fr.train + fr.val + fr.test - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must sum to 1");
  }
  const std::size_t n = m.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[Bounded(rng, i)]);
  }

  // The small slack keeps products like 0.29 * 100 from flooring to 28.
  const auto count = [n](double f) {
    return std::min<std::size_t>(
        n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9)));
  };
  const std::size_t n_train = count(fr.train);
  const std::size_t n_val = std::min(n - n_train, count(fr.val));

  Split out;
  out.train.corpus = m.corpus;
  out.val.corpus = m.corpus;
  out.test.corpus = m.corpus;
  for (std::size_t k = 0; k < n; ++k) {
    const SampleRecord& r = m.records[order[k]];
    if (k < n_train) {
      out.train.records.push_back(r);
    } else if (k < n_train + n_val) {
      out.val.records.push_back(r);
    } else {
      out.test.records.push_back(r);
    }
  }
  return out;
}

}  // namespace skinaudit::dataset

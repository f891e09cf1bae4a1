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

// Batch front end. Every subcommand reads a manifest and writes its
// artifacts under an output directory; CSV outputs are byte-identical
// across reruns with the same inputs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace skinaudit::cli {

/// Prefix of environment variables that stand in for flags, e.g.
/// SKINAUDIT_DELTA=0.4 acts like --delta 0.4 unless the flag is given.
inline constexpr const char* kEnvPrefix = "SKINAUDIT_";

struct CommandConfig {
  std::string subcommand;
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::optional<std::filesystem::path> plan;
  std::optional<std::string> rules;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> reference;

  double delta = 0.5;
  std::optional<int> bins;
  std::optional<double> eps;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0 = available cores

  // augment
  bool include_original = true;
  bool grayscale = false;
  // train-bayes
  double alpha = 1.0;
  std::optional<double> prior;
  // evaluate
  bool per_image = false;
  // pr-curve
  std::size_t steps = 101;
  // heatmap
  std::string pair = "all";
  std::string render = "none";
  // split
  std::vector<double> fractions = {0.4, 0.1, 0.5};
};

/// Executes one parsed command. Throws skinaudit::Error on failure.
void Execute(const CommandConfig& config, std::ostream& log);

/// Parses argv (flags and SKINAUDIT_* environment overrides), executes, and
/// reports errors to `err`. Returns the process exit status.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skinaudit::cli

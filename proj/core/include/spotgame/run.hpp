// Copyright 2026 The spotgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "spotgame/analytic.hpp"
#include "spotgame/calibration.hpp"
#include "spotgame/dataset.hpp"
#include "spotgame/nash.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spotgame {

enum class Mode { kClear, kNash, kSynthetic, kCalibrate, kDetect };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct SyntheticConfig {
  int figure = 4;  // 4: price ratios, 5: profit landscape, 6: price growth
  int samples = 10000;
  int players = 5;
  double demand = 1.0;  // random markets
  Range c_range{1.0, 10.0};
  Range b_range{0.5, 2.0};
  int bins = 50;
  // Total demand for the six example producers. At 1 the dearest producer
  // is priced out of the equilibrium; from about 3 upward all six stay in.
  double example_demand = 3.0;
  // Profit landscape of the first of the six example producers.
  Range m_range{0.5, 6.0};
  Range a_range{-4.0, 3.0};
  int landscape_points = 41;
  // Price growth for m = k c, k on an even grid over [1, k_max].
  double k_max = 10.0;
  int k_points = 19;
  double f_m = 0.1;
};

struct CalibrateConfig {
  std::filesystem::path targets;    // observed prices, hour x zone
  std::filesystem::path gt_prices;  // optional: strategic-model prices for the ratio step
  std::vector<int> gt_hours;        // rows used by the ratio step; empty = all
  FitOptions fit;
};

struct DetectConfig {
  std::filesystem::path tb;
  std::filesystem::path gt;
  std::filesystem::path target;
  double confidence = 0.975;
};

struct RunConfig {
  Mode mode = Mode::kClear;
  DatasetPaths data;
  double delta_max = 0.5;
  GridConfig grid;
  SyntheticConfig synthetic;
  CalibrateConfig calibrate;
  DetectConfig detect;
  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path output_dir = "out";

  /// Reads a JSON config; relative paths are taken relative to the file.
  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_json(const std::string& text, const std::filesystem::path& base_dir = {});

  /// Everything that can change the results, as sorted-key JSON (output
  /// directory and thread count excluded).
  std::string canonical_json() const;
  /// 64-bit FNV-1a of canonical_json(), as 16 hex digits.
  std::string hash() const;
};

struct RunResult {
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> warnings;  // e.g. hours that could not be cleared
  bool partial = false;
  std::string summary;                // short human-readable digest
};

/// Executes one mode and writes its CSV files into config.output_dir.
/// Throws InputError / NumericalError for unrecoverable failures.
RunResult run(const RunConfig& config);

}  // namespace spotgame

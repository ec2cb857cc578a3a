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

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace spotgame {

/// Standard normal quantile, |error| below 1e-12 on (0, 1).
double normal_quantile(double p);

struct NullModel {
  double mean = 0.0;
  double std = 1.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Gaussian fit with a symmetric interval holding `confidence` of the mass.
NullModel fit_null(const std::vector<double>& errors, double confidence);

enum class State { kNull, kTruthful, kStrategic, kExpectedAnomaly, kOtherAnomaly };

const char* to_string(State state);

enum class Side { kLow, kIn, kHigh };

struct StateLabel {
  int region = 5;  // 1..9
  State state = State::kNull;
};

Side side_of(double error, const NullModel& null);

StateLabel classify_point(double e_tb, double e_gt, const NullModel& null_tb,
                          const NullModel& null_gt);

/// Severity order OA > EA > GT > TB > S0.
State aggregate_states(const std::vector<State>& zone_states);

struct StateSeries {
  std::vector<NullModel> null_tb;  // per zone
  std::vector<NullModel> null_gt;
  std::vector<std::vector<StateLabel>> zonal;  // [hour][zone]
  std::vector<State> aggregate;                // per hour
  // counts[h][s]: hours with hour-of-day h whose aggregate state is s.
  std::vector<std::array<int, 5>> hour_of_day;
};

/// Errors are target - model. Inputs are hours x zones; every entry must be finite.
/// Hour-of-day of row t is (t + first_hour_of_day) mod 24.
StateSeries run_tdsd(const Eigen::MatrixXd& tb_prices, const Eigen::MatrixXd& gt_prices,
                     const Eigen::MatrixXd& target_prices, double confidence,
                     int first_hour_of_day = 0);

}  // namespace spotgame

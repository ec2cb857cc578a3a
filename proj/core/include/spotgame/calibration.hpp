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

#include "spotgame/market.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace spotgame {

struct Scales {
  Eigen::VectorXd c;  // s^c per zone
  Eigen::VectorXd b;  // s^b per zone

  static Scales ones(int num_zones);
  int num_zones() const { return static_cast<int>(c.size()); }
  /// Stacked as [c_0, b_0, c_1, b_1, ...], matching the per-zone Hessian blocks.
  Eigen::VectorXd stacked() const;
  static Scales unstack(const Eigen::VectorXd& v);
};

struct CalibrationProblem {
  std::vector<MarketInstance> hours;  // players carry the unscaled (initial) costs
  Eigen::MatrixXd targets;            // hours x zones, NaN where no observed price
  Scales initial;

  void validate() const;
};

struct CalibrationEvaluation {
  double objective = 0.0;
  Eigen::VectorXd gradient;               // stacked like Scales::stacked()
  std::vector<Eigen::Matrix2d> hessian;   // one (c, b) block per zone
  Eigen::MatrixXi price_setter;           // hours x zones, -1 where unused
  int hours_used = 0;                     // N_T
  int points_used = 0;
  int points_skipped = 0;                 // undefined model price or missing target
  int infeasible_hours = 0;
};

/// Clears every hour under truthful bids with scaled costs and returns the
/// mean (over hours) of the summed squared zonal price errors together with
/// its derivatives, holding the price setter's allocation fixed.
CalibrationEvaluation evaluate_calibration(const CalibrationProblem& problem, const Scales& s,
                                           int threads = 1);

double calibration_objective(const CalibrationProblem& problem, const Scales& s, int threads = 1);

struct FitOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-10;
  double step_tol = 1e-14;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  double min_step = 1e-20;
  double scale_floor = 1e-3;
  int threads = 1;
};

struct FitIterate {
  int iteration = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
  Scales scales;
};

struct FitResult {
  Scales scales;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
  std::vector<FitIterate> trace;
};

/// Projected gradient descent with Armijo backtracking on the truthful-bid model.
FitResult fit_tb_scales(const CalibrationProblem& problem, const FitOptions& options = {});

/// s^c_z / r_z with r_z the mean ratio model/target over `hours` (empty: all
/// rows); s^b unchanged. Hours where either price is undefined are skipped.
Scales gt_ratio_adjust(const Eigen::MatrixXd& gt_prices, const Eigen::MatrixXd& targets,
                       const std::vector<int>& hours, const Scales& s_tb);

}  // namespace spotgame

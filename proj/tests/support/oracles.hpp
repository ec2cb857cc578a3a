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
#include "spotgame/qp.hpp"

#include <Eigen/Dense>

namespace spotgame::testing {

struct BruteForceQp {
  bool feasible = false;
  Eigen::VectorXd x;
  double objective = 0.0;
  int candidates = 0;  // working sets whose stationary point was feasible
};

/// Exhaustive active-set enumeration: every subset of the inequality rows and
/// finite bounds (with the equality always imposed) is treated as equalities,
/// the resulting KKT system solved, and the best feasible stationary point kept.
/// Exponential; only for tiny problems.
BruteForceQp brute_force_qp(const Cqp& problem, double feas_tol = 1e-9);

/// Simplified single-zone clearing written as a Cqp: min 1/2 x'Mx + a'x,
/// x >= 0, sum x = d.
Cqp simplified_as_cqp(const SimpleMarket& market);

/// Profit of `player` in the simplified market after replacing its intercept.
double profit_with_intercept(SimpleMarket market, int player, double a);

/// Zonal prices of every hour cleared under truthful bids with scaled costs.
Eigen::MatrixXd model_prices(const CalibrationProblem& problem, const Scales& s);

}  // namespace spotgame::testing

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
#include "spotgame/market.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace spotgame {

enum class RssFlag {
  kSegment,     // v_wcp > b: one-dimensional strategy segment
  kDegenerate,  // v_wcp == b (to 1e-9 relative): the segment collapses to (m, b)
  kEmpty,       // v_wcp < b or the zone is unpriced: play (c, b)
};

const char* to_string(RssFlag flag);

struct RssContext {
  Eigen::VectorXd v_wcp;  // per zone, NaN where no player is active
  std::vector<Cost> costs;
  std::vector<int> zones;
  std::vector<RssFlag> flags;

  int num_players() const { return static_cast<int>(costs.size()); }
  double v_of(int player) const { return v_wcp[zones[static_cast<std::size_t>(player)]]; }
  RssFlag flag(int player) const { return flags[static_cast<std::size_t>(player)]; }
};

/// Zonal prices of the market cleared once with every player at (c/2, b).
/// Throws NumericalError if that clearing is infeasible.
Eigen::VectorXd worst_case_price(const MarketInstance& instance);

RssContext build_rss_context(const MarketInstance& instance);

/// a_i on the segment for slope m_i in [c_i/2, c_i]. Throws std::domain_error
/// for slopes outside that range and std::logic_error for empty players.
double intercept_for_slope(const RssContext& context, int player, double m);

/// (c_i, b_i); only valid for players whose segment is empty.
Strategy fallback_strategy(const RssContext& context, int player);

/// Slope of grid point l (0-based) out of n_pts on [c/2, c].
double grid_slope(double c, int l, int n_pts);

struct ExactCurvePoint {
  double a = 0.0;
  double x = 0.0;  // allocation of the player at (m, a)
  double v = 0.0;
  int iterations = 0;
};

/// Intercept solving the worst-case first-order condition exactly in the
/// single-zone uncapacitated market with all opponents at (c/2, b). Returns
/// nullopt when no root exists in [b_i, price without player i].
std::optional<ExactCurvePoint> exact_wcp_curve(const std::vector<Cost>& costs, int player,
                                               double m, double demand);

}  // namespace spotgame

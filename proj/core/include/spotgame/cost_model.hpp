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
#include <string>
#include <vector>

namespace spotgame {

inline constexpr double kMinCostSlope = 1e-6;  // EUR/MWh^2

struct TypeParams {
  std::string type;
  double n_theta = 0.0;  // full-capacity cost is (1 + n_theta) k
  double f_theta = 0.5;  // capacity fraction at which the marginal cost equals k
  std::optional<double> k_constant;  // EUR/MWh; otherwise read series `k_series`
  std::string k_series;

  void validate() const;
};

/// Built-in generation types: gas, coal, nuclear, wind, solar, hydro_storage,
/// hydro_ror. Series-driven types read the series named like the type.
std::vector<TypeParams> default_type_table();

/// Looks up `type` (after canonical_type) in `table`; throws InputError if absent.
const TypeParams& find_type(const std::vector<TypeParams>& table, const std::string& type);

/// Maps raw production-type names onto the merged types, e.g. wind_onshore and
/// wind_offshore -> wind, lignite and hard_coal -> coal, hydro_pumped and
/// hydro_reservoir -> hydro_storage. Unknown names are returned unchanged.
std::string canonical_type(const std::string& raw);

/// Linear marginal cost b + c x that equals k at x = f Q and (1 + n) k at x = Q
/// (for f = 1/2). c is clamped from below at kMinCostSlope.
Cost cost_from_k(double k, double n_theta, double f_theta, double capacity);

/// USD/ton coal price to EUR/MWh (0.89 EUR per USD, 20/11 MWh per ton).
double coal_k_from_usd_per_ton(double usd_per_ton);

struct TypeCapacity {
  std::string type;
  double capacity = 0.0;  // MW
};

struct PlayerSelection {
  int zone = 0;
  std::vector<TypeCapacity> retained;  // after merging
  double phi = 0.0;                    // retained share of the zone's capacity
  int n_star = 0;                      // types kept by the threshold, before merging
};

PlayerSelection select_players(const std::vector<TypeCapacity>& zone_capacities,
                               double threshold = 0.88, int min_players = 5);

/// c_i <- s_c[z_i] c_i, b_i <- s_b[z_i] b_i; capacities untouched.
std::vector<Player> apply_scales(const std::vector<Player>& players, const Eigen::VectorXd& s_c,
                                 const Eigen::VectorXd& s_b);

}  // namespace spotgame

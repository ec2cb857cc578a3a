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

#include "spotgame/qp.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace spotgame {

/// One producer. Its true marginal cost is c x + b; capacity in MWh.
struct Player {
  int id = 0;
  int zone = 0;
  double c = 1.0;  // EUR/MWh^2, > 0
  double b = 0.0;  // EUR/MWh, >= 0
  double capacity = 0.0;
};

/// A submitted linear order: marginal ask m x + a.
struct Strategy {
  double m = 1.0;  // EUR/MWh^2, > 0
  double a = 0.0;  // EUR/MWh

  double ask(double x) const { return m * x + a; }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

using StrategyProfile = std::vector<Strategy>;

/// Feasible set of zonal net production y:  rows * y <= rhs  and
/// zone_lo <= y <= zone_hi. Empty zone box vectors mean no zone boxes.
struct NetworkPolytope {
  Eigen::MatrixXd rows;  // (#rows x #zones), PTDF-like entries
  Eigen::VectorXd rhs;
  Eigen::VectorXd zone_lo;
  Eigen::VectorXd zone_hi;

  static NetworkPolytope unconstrained(int num_zones);
  void validate(int num_zones) const;
};

/// Inputs of one clearing hour.
struct MarketInstance {
  std::vector<Player> players;
  Eigen::VectorXd zonal_demand;  // MWh, one per zone
  NetworkPolytope network;

  int num_players() const { return static_cast<int>(players.size()); }
  int num_zones() const { return static_cast<int>(zonal_demand.size()); }
  double total_demand() const { return zonal_demand.sum(); }

  /// Zone incidence matrix E (zones x players), y = E x.
  Eigen::MatrixXd zone_map() const;

  /// Throws std::invalid_argument if any invariant is violated.
  void validate() const;
};

/// Bids equal to true costs: m = c, a = b.
StrategyProfile truthful_profile(const MarketInstance& instance);

/// Minimum acceptable bids: m = c / 2, a = b.
StrategyProfile worst_case_profile(const MarketInstance& instance);

/// Thrown when a price is requested for a zone with no active producer.
class UndefinedPrice : public std::runtime_error {
 public:
  explicit UndefinedPrice(int zone);
  int zone() const { return zone_; }

 private:
  int zone_;
};

struct ClearingResult {
  CqpStatus status = CqpStatus::kInfeasible;
  Eigen::VectorXd x;  // MWh per player
  Eigen::VectorXd y;  // MWh per zone
  Eigen::VectorXd v;  // EUR/MWh per zone; NaN where no player is active
  // Index of the price-setting player per zone (highest marginal ask among
  // active players, lowest index on ties); -1 where the price is undefined.
  std::vector<int> price_setter;
  double welfare = 0.0;  // -(1/2 x' D_m x + a' x)
  double kkt_residual = 0.0;
  double activity_eps = 0.0;
  std::string diagnostic;  // set when not optimal

  bool optimal() const { return status == CqpStatus::kOptimal; }
  bool priced(int zone) const { return price_setter[static_cast<std::size_t>(zone)] >= 0; }
  bool active(int player) const { return x[player] > activity_eps; }
};

/// Allocation threshold above which a player counts as active: 1e-7 * d.
double activity_threshold(const MarketInstance& instance);

/// Clearing problem for the given orders. General rows are laid out as
/// [rows * E ; E (zone upper) ; -E (zone lower)], skipping infinite zone
/// bounds. Throws std::invalid_argument on dimension mismatch or m <= 0.
Cqp build_swm(const MarketInstance& instance, const StrategyProfile& strategies);

/// Human-readable name of a clearing-problem constraint.
std::string swm_constraint_label(const MarketInstance& instance, const ConstraintRef& ref);

ClearingResult clear_market(const MarketInstance& instance,
                            const StrategyProfile& strategies,
                            const CqpOptions& options = {});

/// Maximum marginal ask among active players of `zone`. Throws
/// UndefinedPrice when none is active, std::invalid_argument if the result
/// is not optimal.
double zonal_price(const ClearingResult& result, const MarketInstance& instance,
                   const StrategyProfile& strategies, int zone);

/// Revenue minus true cost, v x - c x^2 / 2 - b x. Inactive players earn 0.
double player_profit(const ClearingResult& result, const MarketInstance& instance,
                     const StrategyProfile& strategies, int player);

/// Flow-based polytope from line limits r <= ptdf (y - d) <= R plus zone
/// boxes (1 - delta) d <= y <= (1 + delta) d.
NetworkPolytope assemble_polytope(const Eigen::MatrixXd& ptdf, const Eigen::VectorXd& r,
                                  const Eigen::VectorXd& R,
                                  const Eigen::VectorXd& zonal_demand, double delta_max);

}  // namespace spotgame

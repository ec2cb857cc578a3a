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

// Closed-form machinery for the single-zone market without capacity or
// network limits: sum x = d, x >= 0, orders m x + a.

#pragma once

#include "spotgame/market.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace spotgame {

struct Cost {
  double c = 1.0;
  double b = 0.0;
};

struct SimpleMarket {
  StrategyProfile strategies;
  std::vector<Cost> costs;
  double demand = 1.0;

  int size() const { return static_cast<int>(strategies.size()); }
  void validate() const;
};

struct ActiveSetSolution {
  std::vector<bool> active;
  Eigen::VectorXd x;
  double v = 0.0;
  int rounds = 0;
};

/// Closed-form allocation over a fixed active set (inactive entries are 0,
/// active entries may come out negative).
Eigen::VectorXd closed_form_allocation(const StrategyProfile& strategies,
                                       const std::vector<bool>& active, double demand);

/// Same allocation obtained by eliminating the last active player and
/// solving the reduced (diag + rank one) system with Sherman-Morrison.
Eigen::VectorXd allocation_by_elimination(const StrategyProfile& strategies, double demand);

/// Starts with every player active and repeatedly drops players with
/// x_i <= 0 until the closed form is positive on the active set.
ActiveSetSolution clear_simplified(const SimpleMarket& market);

/// v x - c x^2 / 2 - b x for one player of a simplified clearing.
double simple_profit(const SimpleMarket& market, const ActiveSetSolution& solution, int player);

struct EquilibriumCoefficients {
  Eigen::VectorXd k;      // 2 m - c
  Eigen::VectorXd K2;     // sum_{j!=i} 1/m_j / (m_i sum_j 1/m_j) = -dx_i/da_i
  Eigen::VectorXd theta;  // (2 - k K2) / (1 - k K2); infinite when k K2 = 1
  Eigen::VectorXd K1;     // d / (m_i sum_j 1/m_j)
};

EquilibriumCoefficients equilibrium_coefficients(const std::vector<Cost>& costs,
                                                 const Eigen::VectorXd& m, double demand);

enum class LinearMethod { kDense, kShermanMorrison };

struct APlusSolution {
  Eigen::VectorXd a;
  EquilibriumCoefficients coefficients;
  // Relative difference between the dense and the Sherman-Morrison solve.
  double method_gap = 0.0;
  bool ill_conditioned = false;
};

/// Unique Nash equilibrium in intercepts for fixed slopes m_plus, assuming
/// every player is active. Requires m_plus >= c / 2.
APlusSolution solve_a_plus(const std::vector<Cost>& costs, const Eigen::VectorXd& m_plus,
                           double demand, LinearMethod method = LinearMethod::kShermanMorrison);

struct PlayerCurvature {
  double x = 0.0;
  double dpi_da = 0.0;
  double dpi_dm = 0.0;
  double d2pi_da2 = 0.0;
  double d2pi_dm2 = 0.0;
  double d2pi_dmda = 0.0;
  double trace = 0.0;
  double det = 0.0;
};

struct LocalEquilibriumReport {
  std::vector<PlayerCurvature> players;
  bool stationary = false;
  bool negative_trace = false;
  bool zero_determinant = false;
  bool active_set_ok = true;  // false if some player clears at x_i <= 0
  double max_trace = 0.0;     // largest (least negative) trace over players
  double max_abs_det = 0.0;

  bool local_equilibrium() const {
    return active_set_ok && stationary && negative_trace && zero_determinant;
  }
};

/// Analytic first and second derivatives of every player's profit in its
/// own (m, a) at the given profile. Stationarity holds when both first
/// derivatives are below stationarity_tol * max(1, v); the determinant is
/// treated as zero when |det| <= 1e-6 * max(1, trace^2).
LocalEquilibriumReport verify_local_equilibrium(const std::vector<Cost>& costs,
                                                const Eigen::VectorXd& m_plus,
                                                const Eigen::VectorXd& a_plus, double demand,
                                                double stationarity_tol = 1e-8);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::int64_t> counts;
};

Histogram make_histogram(const std::vector<double>& samples, int bins);

struct PriceRatioResult {
  std::vector<double> ratios;  // v* / v0 per sample
  double mean = 0.0;
  double fraction_above_one = 0.0;
  int active_set_violations = 0;  // samples where a+ deactivates a player
  Histogram histogram;
};

/// Draws c ~ U(c_range), b ~ U(b_range) per player and compares the
/// equilibrium price at m = c, a = a+(c) with the truthful price.
PriceRatioResult price_ratio_experiment(int n_samples, int n_players, double demand,
                                        Range c_range, Range b_range, std::uint64_t seed,
                                        int bins = 50);

struct ProfileGrid {
  std::vector<double> m;
  std::vector<double> a;
  Eigen::MatrixXd profit;  // (m.size() x a.size())
};

/// Profit of `player` over an (m, a) grid while every other player bids
/// m_j = c_j, a_j = a+_j(c) with a+ solved over all players.
ProfileGrid profit_landscape(const std::vector<Cost>& costs, double demand, int player,
                             const std::vector<double>& m_grid,
                             const std::vector<double>& a_grid);

struct PriceGrowthSeries {
  std::vector<double> k;
  std::vector<double> unperturbed;
  std::vector<double> perturbed;
  std::vector<double> constrained;  // empty without a constrained instance
};

/// Equilibrium price along m+ = k c. The perturbed series scales every
/// player but 0 by (1 - f_m); the constrained series clears the full
/// problem on `constrained` (players aligned with costs) and reports the
/// demand-weighted mean of priced zones.
PriceGrowthSeries price_growth_experiment(const std::vector<Cost>& costs, double demand,
                                          const std::vector<double>& k_grid, double f_m,
                                          const std::optional<MarketInstance>& constrained);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spotgame

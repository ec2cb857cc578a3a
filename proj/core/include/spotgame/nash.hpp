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
#include "spotgame/rss.hpp"

#include <Eigen/Dense>

#include <optional>
#include <ostream>
#include <vector>

namespace spotgame {

enum class Schedule { kJacobi, kGaussSeidel };

const char* to_string(Schedule schedule);

struct PresolveConfig {
  int n_pts = 5;
  int max_cycles = 50;
};

struct GridConfig {
  int n_pts = 11;
  int max_cycles = 100;
  // Slope-change tolerance. 0 keeps only exact repetition of the profile as
  // the stopping rule, which is what makes the converged flag a certificate.
  double tol_ne = 0.0;
  Schedule schedule = Schedule::kJacobi;
  std::optional<PresolveConfig> presolve;
  int threads = 1;  // worker threads for clearing evaluations; results do not depend on it

  void validate() const;
};

struct BestResponse {
  Strategy strategy;
  int grid_index = -1;  // -1 when the player falls back to (c, b)
  double profit = 0.0;
  int infeasible_points = 0;
};

/// Grid best response of `player` against `profile` (the player's own entry
/// is ignored). Profits within 1e-9 * max(1, |best|) of the best count as
/// ties, and ties go to the lowest grid index.
BestResponse best_response(const MarketInstance& instance, const RssContext& context,
                           const StrategyProfile& profile, int player, int n_pts,
                           int threads = 1);

StrategyProfile jacobi_update(const MarketInstance& instance, const RssContext& context,
                              const StrategyProfile& profile, int n_pts, int threads = 1);

StrategyProfile gauss_seidel_update(const MarketInstance& instance, const RssContext& context,
                                    const StrategyProfile& profile, int n_pts,
                                    const std::vector<int>& order, int threads = 1);

struct AuditResult {
  std::vector<double> max_improvement;  // per player, >= 0
  double epsilon = 0.0;                 // max over players
};

/// Largest profit gain any single player obtains by moving to a point of the
/// n_pts grid (every `stride`-th point) with all others fixed.
AuditResult audit_profile(const MarketInstance& instance, const RssContext& context,
                          const StrategyProfile& profile, int n_pts, int stride = 1,
                          int threads = 1);

struct EquilibriumReport {
  StrategyProfile strategies;
  Eigen::VectorXd profits;
  bool converged = false;
  int cycles_used = 0;
  int presolve_cycles = 0;
  std::vector<StrategyProfile> trace;  // trace[0] is the starting profile
  ClearingResult clearing;
  // Audit bound on the final profile; 0 up to rounding when converged.
  double epsilon = 0.0;
};

/// Initial profile with every player at (c, b).
StrategyProfile truthful_start(const RssContext& context);

EquilibriumReport find_equilibrium(const MarketInstance& instance, const RssContext& context,
                                   const StrategyProfile& initial, const GridConfig& config);

/// One row per (cycle, player): cycle,player,m,a.
void write_trace_csv(std::ostream& out, const EquilibriumReport& report);

}  // namespace spotgame

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


#include "spotgame/nash.hpp"

#include "parallel.hpp"
#include "spotgame/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spotgame {

const char* to_string(Schedule schedule) {
  return schedule == Schedule::kJacobi ? "jacobi" : "gauss_seidel";
}

void GridConfig::validate() const {
  if (n_pts < 2) throw std::invalid_argument("n_pts must be >= 2");
  if (max_cycles < 1) throw std::invalid_argument("max_cycles must be >= 1");
  if (!(tol_ne >= 0.0)) throw std::invalid_argument("tol_ne must be >= 0");
  if (presolve && (presolve->n_pts < 2 || presolve->max_cycles < 1)) {
    throw std::invalid_argument("presolve needs n_pts >= 2 and max_cycles >= 1");
  }
}

namespace {

constexpr double kNoProfit = -std::numeric_limits<double>::infinity();
constexpr double kProfitTieTol = 1e-9;  // relative

Strategy grid_strategy(const RssContext& context, int player, int l, int n_pts) {
  const double m = grid_slope(context.costs[static_cast<std::size_t>(player)].c, l, n_pts);
  return {m, intercept_for_slope(context, player, m)};
}

// Profit of `player` when the market clears at `profile`; -inf if infeasible.
double profit_at(const MarketInstance& instance, const StrategyProfile& profile, int player) {
  const ClearingResult res = clear_market(instance, profile);
  if (!res.optimal()) return kNoProfit;
  return player_profit(res, instance, profile, player);
}

}  // namespace

BestResponse best_response(const MarketInstance& instance, const RssContext& context,
                           const StrategyProfile& profile, int player, int n_pts, int threads) {
  if (n_pts < 2) throw std::invalid_argument("best_response: n_pts must be >= 2");
  BestResponse out;
  if (context.flag(player) == RssFlag::kEmpty) {
    StrategyProfile trial = profile;
    out.strategy = fallback_strategy(context, player);
    trial[static_cast<std::size_t>(player)] = out.strategy;
    out.profit = profit_at(instance, trial, player);
    if (out.profit == kNoProfit) {
      throw NumericalError("clearing infeasible at fallback strategy of player " +
                           std::to_string(player));
    }
    return out;
  }

  std::vector<double> profits(static_cast<std::size_t>(n_pts), kNoProfit);
  detail::parallel_for(profits.size(), threads, [&](std::size_t l) {
    StrategyProfile trial = profile;
    trial[static_cast<std::size_t>(player)] =
        grid_strategy(context, player, static_cast<int>(l), n_pts);
    profits[l] = profit_at(instance, trial, player);
  });

  double best = kNoProfit;
  for (double p : profits) {
    if (p == kNoProfit) {
      ++out.infeasible_points;
    } else {
      best = std::max(best, p);
    }
  }
  if (best != kNoProfit) {
    // Clearing noise makes exact comparisons flip between equal points, which
    // keeps the iteration from ever repeating a profile.
    const double tie = kProfitTieTol * std::max(1.0, std::abs(best));
    for (int l = 0; l < n_pts; ++l) {
      if (profits[static_cast<std::size_t>(l)] >= best - tie) {
        out.grid_index = l;
        out.profit = profits[static_cast<std::size_t>(l)];
        break;
      }
    }
  }
  if (out.grid_index < 0) {
    throw NumericalError("best response of player " + std::to_string(player) + ": all " +
                         std::to_string(n_pts) + " grid points give an infeasible clearing");
  }
  out.strategy = grid_strategy(context, player, out.grid_index, n_pts);
  return out;
}

StrategyProfile jacobi_update(const MarketInstance& instance, const RssContext& context,
                              const StrategyProfile& profile, int n_pts, int threads) {
  StrategyProfile next = profile;
  detail::parallel_for(profile.size(), threads, [&](std::size_t i) {
    next[i] = best_response(instance, context, profile, static_cast<int>(i), n_pts).strategy;
  });
  return next;
}

StrategyProfile gauss_seidel_update(const MarketInstance& instance, const RssContext& context,
                                    const StrategyProfile& profile, int n_pts,
                                    const std::vector<int>& order, int threads) {
  std::vector<bool> seen(profile.size(), false);
  for (int i : order) {
    if (i < 0 || i >= static_cast<int>(profile.size()) || seen[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("gauss_seidel_update: order is not a permutation of players");
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
  if (order.size() != profile.size()) {
    throw std::invalid_argument("gauss_seidel_update: order is not a permutation of players");
  }
  StrategyProfile next = profile;
  for (int i : order) {
    next[static_cast<std::size_t>(i)] =
        best_response(instance, context, next, i, n_pts, threads).strategy;
  }
  return next;
}

AuditResult audit_profile(const MarketInstance& instance, const RssContext& context,
                          const StrategyProfile& profile, int n_pts, int stride, int threads) {
  if (n_pts < 2 || stride < 1) throw std::invalid_argument("audit_profile: bad grid");
  const ClearingResult base = clear_market(instance, profile);
  if (!base.optimal()) throw NumericalError("audit_profile: profile clears infeasibly");

  const int n = instance.num_players();
  AuditResult out;
  out.max_improvement.assign(static_cast<std::size_t>(n), 0.0);
  detail::parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    const int player = static_cast<int>(i);
    if (context.flag(player) == RssFlag::kEmpty) return;
    const double current = player_profit(base, instance, profile, player);
    StrategyProfile trial = profile;
    double best = 0.0;
    for (int l = 0; l < n_pts; l += stride) {
      trial[i] = grid_strategy(context, player, l, n_pts);
      const double p = profit_at(instance, trial, player);
      if (p != kNoProfit) best = std::max(best, p - current);
    }
    out.max_improvement[i] = best;
  });
  for (double e : out.max_improvement) out.epsilon = std::max(out.epsilon, e);
  return out;
}

StrategyProfile truthful_start(const RssContext& context) {
  StrategyProfile out;
  for (const Cost& c : context.costs) out.push_back({c.c, c.b});
  return out;
}

namespace {

double slope_change(const StrategyProfile& a, const StrategyProfile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i].m - b[i].m) * (a[i].m - b[i].m);
  return std::sqrt(s);
}

}  // namespace

EquilibriumReport find_equilibrium(const MarketInstance& instance, const RssContext& context,
                                   const StrategyProfile& initial, const GridConfig& config) {
  config.validate();
  const int n = instance.num_players();
  if (context.num_players() != n) throw std::invalid_argument("context does not match instance");
  StrategyProfile current = initial.empty() ? truthful_start(context) : initial;
  if (static_cast<int>(current.size()) != n) {
    throw std::invalid_argument("initial profile has wrong length");
  }

  EquilibriumReport report;
  if (config.presolve) {
    GridConfig coarse = config;
    coarse.n_pts = config.presolve->n_pts;
    coarse.max_cycles = config.presolve->max_cycles;
    coarse.presolve.reset();
    const EquilibriumReport warm = find_equilibrium(instance, context, current, coarse);
    current = warm.strategies;
    report.presolve_cycles = warm.cycles_used;
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  report.trace.push_back(current);
  for (int cycle = 1; cycle <= config.max_cycles; ++cycle) {
    StrategyProfile next =
        config.schedule == Schedule::kJacobi
            ? jacobi_update(instance, context, current, config.n_pts, config.threads)
            : gauss_seidel_update(instance, context, current, config.n_pts, order,
                                  config.threads);
    report.trace.push_back(next);
    report.cycles_used = cycle;
    const bool repeated = next == current;
    const bool small_step = config.tol_ne > 0.0 && slope_change(next, current) < config.tol_ne;
    current = std::move(next);
    if (repeated || small_step) {
      report.converged = true;
      break;
    }
  }

  report.strategies = current;
  report.clearing = clear_market(instance, current);
  if (!report.clearing.optimal()) {
    throw NumericalError("final equilibrium profile clears infeasibly: " +
                         report.clearing.diagnostic);
  }
  report.profits.resize(n);
  for (int i = 0; i < n; ++i) {
    report.profits[i] = player_profit(report.clearing, instance, current, i);
  }
  report.epsilon = audit_profile(instance, context, current, config.n_pts, 1, config.threads).epsilon;
  return report;
}

void write_trace_csv(std::ostream& out, const EquilibriumReport& report) {
  out << "cycle,player,m,a\n";
  const auto precision = out.precision(17);
  for (std::size_t k = 0; k < report.trace.size(); ++k) {
    for (std::size_t i = 0; i < report.trace[k].size(); ++i) {
      out << k << ',' << i << ',' << report.trace[k][i].m << ',' << report.trace[k][i].a << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace spotgame

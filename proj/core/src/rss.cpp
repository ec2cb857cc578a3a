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


#include "spotgame/rss.hpp"

#include "spotgame/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spotgame {

const char* to_string(RssFlag flag) {
  switch (flag) {
    case RssFlag::kSegment:
      return "segment";
    case RssFlag::kDegenerate:
      return "degenerate";
    case RssFlag::kEmpty:
      return "empty";
  }
  return "?";
}

Eigen::VectorXd worst_case_price(const MarketInstance& instance) {
  const ClearingResult res = clear_market(instance, worst_case_profile(instance));
  if (!res.optimal()) {
    throw NumericalError("worst-case clearing failed: " + res.diagnostic);
  }
  return res.v;
}

RssContext build_rss_context(const MarketInstance& instance) {
  RssContext ctx;
  ctx.v_wcp = worst_case_price(instance);
  for (const Player& p : instance.players) {
    ctx.costs.push_back({p.c, p.b});
    ctx.zones.push_back(p.zone);
    const double v = ctx.v_wcp[p.zone];
    RssFlag flag = RssFlag::kSegment;
    if (std::isnan(v)) {
      flag = RssFlag::kEmpty;
    } else if (std::abs(v - p.b) <= 1e-9 * std::max(1.0, std::abs(p.b))) {
      flag = RssFlag::kDegenerate;
    } else if (v < p.b) {
      flag = RssFlag::kEmpty;
    }
    ctx.flags.push_back(flag);
  }
  return ctx;
}

double intercept_for_slope(const RssContext& context, int player, double m) {
  const Cost& cost = context.costs.at(static_cast<std::size_t>(player));
  if (context.flag(player) == RssFlag::kEmpty) {
    throw std::logic_error("player " + std::to_string(player) +
                           " has an empty strategy segment; use fallback_strategy");
  }
  const double slack = 1e-12 * cost.c;
  if (m < 0.5 * cost.c - slack || m > cost.c + slack) {
    throw std::domain_error("slope " + std::to_string(m) + " outside [c/2, c] for player " +
                            std::to_string(player));
  }
  if (context.flag(player) == RssFlag::kDegenerate) return cost.b;
  // Written around b so that m = c returns b exactly.
  const double v = context.v_of(player);
  return cost.b + (v - cost.b) * (1.0 - m / cost.c);
}

Strategy fallback_strategy(const RssContext& context, int player) {
  if (context.flag(player) != RssFlag::kEmpty) {
    throw std::logic_error("fallback_strategy called for player " + std::to_string(player) +
                           " whose segment is not empty");
  }
  const Cost& cost = context.costs.at(static_cast<std::size_t>(player));
  return {cost.c, cost.b};
}

double grid_slope(double c, int l, int n_pts) {
  if (n_pts < 2 || l < 0 || l >= n_pts) throw std::invalid_argument("grid_slope: bad index");
  return 0.5 * c + 0.5 * c * static_cast<double>(l) / static_cast<double>(n_pts - 1);
}

namespace {

struct CurveEval {
  double g = 0.0;  // d profit / d a
  ActiveSetSolution sol;
};

CurveEval curve_derivative(SimpleMarket& market, int player, double a) {
  const auto p = static_cast<std::size_t>(player);
  market.strategies[p].a = a;
  CurveEval out;
  out.sol = clear_simplified(market);
  const double m = market.strategies[p].m;
  double inv_sum = 1.0 / m;
  for (std::size_t j = 0; j < market.strategies.size(); ++j) {
    if (j != p && out.sol.active[j]) inv_sum += 1.0 / market.strategies[j].m;
  }
  const double k2 = (inv_sum - 1.0 / m) / (m * inv_sum);
  const double k = 2.0 * m - market.costs[p].c;
  const double x = out.sol.x[player];
  out.g = (k * x + a - market.costs[p].b) * (-k2) + x;
  return out;
}

}  // namespace

std::optional<ExactCurvePoint> exact_wcp_curve(const std::vector<Cost>& costs, int player,
                                               double m, double demand) {
  const int n = static_cast<int>(costs.size());
  if (player < 0 || player >= n) throw std::invalid_argument("exact_wcp_curve: bad player");
  if (n < 2) return std::nullopt;  // a monopolist faces no competing price

  // Price the opponents reach on their own: the largest intercept at which
  // the player is still (just) dispatched.
  SimpleMarket others;
  others.demand = demand;
  for (int j = 0; j < n; ++j) {
    if (j == player) continue;
    others.strategies.push_back({0.5 * costs[static_cast<std::size_t>(j)].c,
                                 costs[static_cast<std::size_t>(j)].b});
    others.costs.push_back(costs[static_cast<std::size_t>(j)]);
  }
  const double v_minus = clear_simplified(others).v;
  const double b = costs[static_cast<std::size_t>(player)].b;
  if (!(v_minus > b)) return std::nullopt;

  SimpleMarket market;
  market.demand = demand;
  market.costs = costs;
  for (int j = 0; j < n; ++j) {
    const Cost& c = costs[static_cast<std::size_t>(j)];
    market.strategies.push_back({j == player ? m : 0.5 * c.c, c.b});
  }

  double lo = b;
  double hi = v_minus;
  if (!(curve_derivative(market, player, lo).g > 0.0)) return std::nullopt;
  ExactCurvePoint out;
  const double tol = 1e-14 * std::max(1.0, std::abs(hi));
  while (hi - lo > tol && out.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (curve_derivative(market, player, mid).g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++out.iterations;
  }
  const CurveEval at = curve_derivative(market, player, 0.5 * (lo + hi));
  out.a = 0.5 * (lo + hi);
  out.x = at.sol.x[player];
  out.v = at.sol.v;
  return out;
}

}  // namespace spotgame

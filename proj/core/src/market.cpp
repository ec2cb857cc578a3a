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

#include "spotgame/market.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spotgame {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* what, Index i) {
  std::ostringstream os;
  os << what << " " << i;
  return os.str();
}

// Rows of the clearing problem that come from zone boxes, in build order.
struct ZoneBoxRow {
  int zone;
  bool upper;
};

std::vector<ZoneBoxRow> zone_box_rows(const NetworkPolytope& net) {
  std::vector<ZoneBoxRow> out;
  for (Index z = 0; z < net.zone_hi.size(); ++z) {
    if (std::isfinite(net.zone_hi[z])) out.push_back({static_cast<int>(z), true});
  }
  for (Index z = 0; z < net.zone_lo.size(); ++z) {
    if (std::isfinite(net.zone_lo[z])) out.push_back({static_cast<int>(z), false});
  }
  return out;
}

}  // namespace

NetworkPolytope NetworkPolytope::unconstrained(int num_zones) {
  NetworkPolytope net;
  net.rows.resize(0, num_zones);
  net.rhs.resize(0);
  return net;
}

void NetworkPolytope::validate(int num_zones) const {
  if (rows.cols() != num_zones && rows.rows() > 0) {
    throw std::invalid_argument("network rows must have one column per zone");
  }
  if (rows.rows() != rhs.size()) {
    throw std::invalid_argument("network rows and rhs differ in length");
  }
  if (!rows.allFinite() || !rhs.allFinite()) {
    throw std::invalid_argument("network rows must be finite");
  }
  const bool has_box = zone_lo.size() > 0 || zone_hi.size() > 0;
  if (has_box && (zone_lo.size() != num_zones || zone_hi.size() != num_zones)) {
    throw std::invalid_argument("zone boxes must have one entry per zone");
  }
  for (Index z = 0; z < zone_lo.size(); ++z) {
    if (std::isnan(zone_lo[z]) || std::isnan(zone_hi[z]) || zone_lo[z] > zone_hi[z]) {
      throw std::invalid_argument(fmt("invalid zone box for zone", z));
    }
  }
}

MatrixXd MarketInstance::zone_map() const {
  MatrixXd E = MatrixXd::Zero(num_zones(), num_players());
  for (int i = 0; i < num_players(); ++i) E(players[i].zone, i) = 1.0;
  return E;
}

void MarketInstance::validate() const {
  if (players.empty()) throw std::invalid_argument("market has no players");
  if (num_zones() == 0) throw std::invalid_argument("market has no zones");
  if (!zonal_demand.allFinite() || !(total_demand() > 0.0)) {
    throw std::invalid_argument("total demand must be positive and finite");
  }
  for (int i = 0; i < num_players(); ++i) {
    const Player& p = players[i];
    if (p.zone < 0 || p.zone >= num_zones()) {
      throw std::invalid_argument(fmt("player has invalid zone:", i));
    }
    if (!(p.c > 0.0) || !std::isfinite(p.c)) {
      throw std::invalid_argument(fmt("player cost slope must be > 0:", i));
    }
    if (!(p.b >= 0.0) || !std::isfinite(p.b)) {
      throw std::invalid_argument(fmt("player cost intercept must be >= 0:", i));
    }
    if (!(p.capacity >= 0.0) || std::isnan(p.capacity)) {
      throw std::invalid_argument(fmt("player capacity must be >= 0:", i));
    }
  }
  network.validate(num_zones());
}

StrategyProfile truthful_profile(const MarketInstance& instance) {
  StrategyProfile out;
  out.reserve(instance.players.size());
  for (const Player& p : instance.players) out.push_back({p.c, p.b});
  return out;
}

StrategyProfile worst_case_profile(const MarketInstance& instance) {
  StrategyProfile out;
  out.reserve(instance.players.size());
  for (const Player& p : instance.players) out.push_back({0.5 * p.c, p.b});
  return out;
}

UndefinedPrice::UndefinedPrice(int zone)
    : std::runtime_error(fmt("undefined price: no active producer in zone", zone)),
      zone_(zone) {}

double activity_threshold(const MarketInstance& instance) {
  return 1e-7 * instance.total_demand();
}

Cqp build_swm(const MarketInstance& instance, const StrategyProfile& strategies) {
  instance.validate();
  const int n = instance.num_players();
  if (static_cast<int>(strategies.size()) != n) {
    throw std::invalid_argument("strategy profile does not match player count");
  }
  VectorXd m(n), a(n), lo = VectorXd::Zero(n), hi(n);
  for (int i = 0; i < n; ++i) {
    if (!(strategies[i].m > 0.0) || !std::isfinite(strategies[i].m)) {
      throw std::invalid_argument(fmt("strategy slope must be > 0 for player", i));
    }
    if (!std::isfinite(strategies[i].a)) {
      throw std::invalid_argument(fmt("strategy intercept must be finite for player", i));
    }
    m[i] = strategies[i].m;
    a[i] = strategies[i].a;
    hi[i] = instance.players[i].capacity;
  }

  Cqp qp(m, a);
  qp.set_bounds(lo, hi);
  qp.set_equality(VectorXd::Ones(n), instance.total_demand());

  const NetworkPolytope& net = instance.network;
  const MatrixXd E = instance.zone_map();
  const std::vector<ZoneBoxRow> boxes = zone_box_rows(net);
  const Index rows = net.rows.rows() + static_cast<Index>(boxes.size());
  if (rows > 0) {
    MatrixXd A(rows, n);
    VectorXd rhs(rows);
    if (net.rows.rows() > 0) {
      A.topRows(net.rows.rows()) = net.rows * E;
      rhs.head(net.rows.rows()) = net.rhs;
    }
    Index r = net.rows.rows();
    for (const ZoneBoxRow& box : boxes) {
      if (box.upper) {
        A.row(r) = E.row(box.zone);
        rhs[r] = net.zone_hi[box.zone];
      } else {
        A.row(r) = -E.row(box.zone);
        rhs[r] = -net.zone_lo[box.zone];
      }
      ++r;
    }
    qp.set_inequalities(std::move(A), std::move(rhs));
  }
  return qp;
}

std::string swm_constraint_label(const MarketInstance& instance, const ConstraintRef& ref) {
  std::ostringstream os;
  switch (ref.kind) {
    case ConstraintKind::kEquality:
      os << "demand balance (total demand " << instance.total_demand() << ")";
      break;
    case ConstraintKind::kLower:
      os << "non-negative production of player " << ref.index;
      break;
    case ConstraintKind::kUpper:
      os << "capacity of player " << ref.index << " ("
         << instance.players[static_cast<std::size_t>(ref.index)].capacity << ")";
      break;
    case ConstraintKind::kRow: {
      const Index network_rows = instance.network.rows.rows();
      if (ref.index < network_rows) {
        os << "network row " << ref.index;
      } else {
        const auto boxes = zone_box_rows(instance.network);
        const ZoneBoxRow& box = boxes[static_cast<std::size_t>(ref.index - network_rows)];
        os << (box.upper ? "upper" : "lower") << " zone box of zone " << box.zone;
      }
      break;
    }
  }
  return os.str();
}

ClearingResult clear_market(const MarketInstance& instance, const StrategyProfile& strategies,
                            const CqpOptions& options) {
  const Cqp qp = build_swm(instance, strategies);
  const CqpSolution sol = solve_cqp(qp, options);

  ClearingResult out;
  out.status = sol.status;
  out.kkt_residual = sol.kkt_residual;
  out.activity_eps = activity_threshold(instance);
  const int zones = instance.num_zones();
  out.price_setter.assign(static_cast<std::size_t>(zones), -1);
  out.v = VectorXd::Constant(zones, kNaN);

  if (sol.status != CqpStatus::kOptimal) {
    out.x = sol.x;
    out.y = instance.zone_map() * sol.x;
    std::ostringstream os;
    os << "clearing " << to_string(sol.status);
    if (sol.infeasible_constraint) {
      os << ": " << swm_constraint_label(instance, *sol.infeasible_constraint)
         << " violated by " << sol.infeasibility << " and cannot be restored given {";
      bool first = true;
      for (const ConstraintRef& ref : sol.active_set) {
        os << (first ? "" : "; ") << swm_constraint_label(instance, ref);
        first = false;
      }
      os << "}";
    }
    out.diagnostic = os.str();
    return out;
  }

  out.x = sol.x;
  out.y = instance.zone_map() * sol.x;
  out.welfare = -qp.objective(sol.x);
  std::vector<double> best(static_cast<std::size_t>(zones), -kInf);
  for (int i = 0; i < instance.num_players(); ++i) {
    if (!(out.x[i] > out.activity_eps)) continue;
    const auto z = static_cast<std::size_t>(instance.players[i].zone);
    const double ask = strategies[i].ask(out.x[i]);
    if (ask > best[z]) {
      best[z] = ask;
      out.price_setter[z] = i;
    }
  }
  for (int z = 0; z < zones; ++z) {
    if (out.price_setter[static_cast<std::size_t>(z)] >= 0) out.v[z] = best[static_cast<std::size_t>(z)];
  }
  return out;
}

double zonal_price(const ClearingResult& result, const MarketInstance& instance,
                   const StrategyProfile& strategies, int zone) {
  if (!result.optimal()) throw std::invalid_argument("zonal_price needs an optimal clearing");
  if (zone < 0 || zone >= instance.num_zones()) throw std::invalid_argument("zone out of range");
  double price = -kInf;
  bool any = false;
  for (int i = 0; i < instance.num_players(); ++i) {
    if (instance.players[i].zone != zone || !result.active(i)) continue;
    price = std::max(price, strategies[i].ask(result.x[i]));
    any = true;
  }
  if (!any) throw UndefinedPrice(zone);
  return price;
}

double player_profit(const ClearingResult& result, const MarketInstance& instance,
                     const StrategyProfile& /*strategies*/, int player) {
  if (!result.optimal()) throw std::invalid_argument("player_profit needs an optimal clearing");
  if (player < 0 || player >= instance.num_players()) {
    throw std::invalid_argument("player out of range");
  }
  if (!result.active(player)) return 0.0;
  const Player& p = instance.players[static_cast<std::size_t>(player)];
  const double x = result.x[player];
  const double v = result.v[p.zone];
  return v * x - 0.5 * p.c * x * x - p.b * x;
}

NetworkPolytope assemble_polytope(const MatrixXd& ptdf, const VectorXd& r, const VectorXd& R,
                                  const VectorXd& zonal_demand, double delta_max) {
  const Index lines = ptdf.rows();
  if (ptdf.cols() != zonal_demand.size() || r.size() != lines || R.size() != lines) {
    throw std::invalid_argument("assemble_polytope: dimension mismatch");
  }
  if (!(delta_max > 0.0 && delta_max < 1.0)) {
    throw std::invalid_argument("assemble_polytope: delta_max must lie in (0, 1)");
  }
  for (Index k = 0; k < lines; ++k) {
    if (r[k] > R[k]) throw std::invalid_argument(fmt("assemble_polytope: r > R on line", k));
  }
  NetworkPolytope net;
  const VectorXd shift = ptdf * zonal_demand;
  net.rows.resize(2 * lines, ptdf.cols());
  net.rows.topRows(lines) = -ptdf;
  net.rows.bottomRows(lines) = ptdf;
  net.rhs.resize(2 * lines);
  net.rhs.head(lines) = -r - shift;
  net.rhs.tail(lines) = R + shift;
  net.zone_lo = (1.0 - delta_max) * zonal_demand;
  net.zone_hi = (1.0 + delta_max) * zonal_demand;
  return net;
}

}  // namespace spotgame

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

#include "spotgame/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spotgame {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void SimpleMarket::validate() const {
  if (strategies.empty()) throw std::invalid_argument("simple market has no players");
  if (!costs.empty() && costs.size() != strategies.size()) {
    throw std::invalid_argument("simple market: costs and strategies differ in length");
  }
  if (!(demand > 0.0)) throw std::invalid_argument("simple market: demand must be > 0");
  for (const Strategy& s : strategies) {
    if (!(s.m > 0.0)) throw std::invalid_argument("simple market: slopes must be > 0");
  }
  for (const Cost& c : costs) {
    if (!(c.c > 0.0)) throw std::invalid_argument("simple market: cost slopes must be > 0");
  }
}

VectorXd closed_form_allocation(const StrategyProfile& strategies, const std::vector<bool>& active,
                                double demand) {
  const auto n = static_cast<Index>(strategies.size());
  double inv_sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    if (active[static_cast<std::size_t>(j)]) inv_sum += 1.0 / strategies[j].m;
  }
  VectorXd x = VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    double spread = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j == i || !active[static_cast<std::size_t>(j)]) continue;
      spread += (strategies[j].a - strategies[i].a) / strategies[j].m;
    }
    x[i] = (demand + spread) / (strategies[i].m * inv_sum);
  }
  return x;
}

VectorXd allocation_by_elimination(const StrategyProfile& strategies, double demand) {
  const auto n = static_cast<Index>(strategies.size());
  VectorXd x(n);
  if (n == 1) {
    x[0] = demand;
    return x;
  }
  const Index last = n - 1;
  const double m_n = strategies[last].m;
  const double a_n = strategies[last].a;
  // (diag(m_hat) + m_n e e') x_hat = (m_n d + a_n) e - a_hat
  VectorXd dinv(last), rhs(last);
  for (Index i = 0; i < last; ++i) {
    dinv[i] = 1.0 / strategies[i].m;
    rhs[i] = m_n * demand + a_n - strategies[i].a;
  }
  const VectorXd y = dinv.cwiseProduct(rhs);
  const double denom = 1.0 + m_n * dinv.sum();
  const VectorXd x_hat = y - dinv * (m_n * y.sum() / denom);
  x.head(last) = x_hat;
  x[last] = demand - x_hat.sum();
  return x;
}

ActiveSetSolution clear_simplified(const SimpleMarket& market) {
  market.validate();
  const int n = market.size();
  ActiveSetSolution sol;
  sol.active.assign(static_cast<std::size_t>(n), true);
  while (true) {
    ++sol.rounds;
    sol.x = closed_form_allocation(market.strategies, sol.active, market.demand);
    bool dropped = false;
    for (int i = 0; i < n; ++i) {
      if (sol.active[static_cast<std::size_t>(i)] && sol.x[i] <= 0.0) {
        sol.active[static_cast<std::size_t>(i)] = false;
        dropped = true;
      }
    }
    if (!dropped) break;
  }
  for (int i = 0; i < n; ++i) {
    if (!sol.active[static_cast<std::size_t>(i)]) sol.x[i] = 0.0;
  }
  // Every active ask equals v; report the one of the first active player.
  for (int i = 0; i < n; ++i) {
    if (sol.active[static_cast<std::size_t>(i)]) {
      sol.v = market.strategies[static_cast<std::size_t>(i)].ask(sol.x[i]);
      break;
    }
  }
  return sol;
}

double simple_profit(const SimpleMarket& market, const ActiveSetSolution& solution, int player) {
  const Cost& cost = market.costs.at(static_cast<std::size_t>(player));
  const double x = solution.x[player];
  if (!solution.active[static_cast<std::size_t>(player)]) return 0.0;
  return solution.v * x - 0.5 * cost.c * x * x - cost.b * x;
}

EquilibriumCoefficients equilibrium_coefficients(const std::vector<Cost>& costs,
                                                 const VectorXd& m, double demand) {
  const auto n = static_cast<Index>(costs.size());
  if (m.size() != n) throw std::invalid_argument("equilibrium_coefficients: size mismatch");
  const double inv_sum = m.cwiseInverse().sum();
  EquilibriumCoefficients out;
  out.k.resize(n);
  out.K2.resize(n);
  out.theta.resize(n);
  out.K1.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double others = inv_sum - 1.0 / m[i];
    out.k[i] = 2.0 * m[i] - costs[static_cast<std::size_t>(i)].c;
    out.K2[i] = others / (m[i] * inv_sum);
    out.K1[i] = demand / (m[i] * inv_sum);
    const double w = 1.0 - out.k[i] * out.K2[i];
    out.theta[i] = w == 0.0 ? std::numeric_limits<double>::infinity()
                            : (2.0 - out.k[i] * out.K2[i]) / w;
  }
  return out;
}

namespace {

// First-order conditions as  (diag(D) - w v') a = r  with v = 1/m. Each row
// is the stationarity condition of one player multiplied by m_i sum 1/m.
struct APlusSystem {
  VectorXd diag;
  VectorXd w;
  VectorXd v;
  VectorXd rhs;

  MatrixXd dense() const { return MatrixXd(diag.asDiagonal()) - w * v.transpose(); }
};

APlusSystem a_plus_system(const std::vector<Cost>& costs, const VectorXd& m, double demand,
                          const EquilibriumCoefficients& coeff) {
  const Index n = m.size();
  const double inv_sum = m.cwiseInverse().sum();
  APlusSystem sys;
  sys.diag.resize(n);
  sys.w.resize(n);
  sys.rhs.resize(n);
  sys.v = m.cwiseInverse();
  for (Index i = 0; i < n; ++i) {
    const double others = inv_sum - 1.0 / m[i];
    const double kk = coeff.k[i] * coeff.K2[i];
    sys.w[i] = 1.0 - kk;
    sys.diag[i] = (2.0 - kk) * others + sys.w[i] / m[i];
    sys.rhs[i] = sys.w[i] * demand + others * costs[static_cast<std::size_t>(i)].b;
  }
  return sys;
}

VectorXd solve_sherman_morrison(const APlusSystem& sys) {
  // (D + u v')^{-1} r = D^{-1} r - D^{-1} u (v' D^{-1} r) / (1 + v' D^{-1} u), u = -w
  const VectorXd dinv = sys.diag.cwiseInverse();
  const VectorXd y = dinv.cwiseProduct(sys.rhs);
  const VectorXd q = -dinv.cwiseProduct(sys.w);
  const double denom = 1.0 + sys.v.dot(q);
  return y - q * (sys.v.dot(y) / denom);
}

}  // namespace

APlusSolution solve_a_plus(const std::vector<Cost>& costs, const VectorXd& m_plus, double demand,
                           LinearMethod method) {
  const auto n = static_cast<Index>(costs.size());
  if (n == 0 || m_plus.size() != n) throw std::invalid_argument("solve_a_plus: size mismatch");
  if (!(demand > 0.0)) throw std::invalid_argument("solve_a_plus: demand must be > 0");
  for (Index i = 0; i < n; ++i) {
    const double c = costs[static_cast<std::size_t>(i)].c;
    if (!(c > 0.0)) throw std::invalid_argument("solve_a_plus: cost slopes must be > 0");
    if (m_plus[i] < 0.5 * c * (1.0 - 1e-12)) {
      throw std::invalid_argument("solve_a_plus: requires m_plus >= c / 2");
    }
  }

  APlusSolution out;
  out.coefficients = equilibrium_coefficients(costs, m_plus, demand);
  const APlusSystem sys = a_plus_system(costs, m_plus, demand, out.coefficients);
  const MatrixXd A = sys.dense();
  Eigen::FullPivLU<MatrixXd> lu(A);
  const VectorXd dense = lu.solve(sys.rhs);

  bool sm_usable = (sys.diag.array().abs() > 1e-14 * (1.0 + sys.diag.cwiseAbs().maxCoeff())).all();
  VectorXd sm = dense;
  if (sm_usable) {
    sm = solve_sherman_morrison(sys);
    sm_usable = sm.allFinite();
  }
  const double scale = std::max(1.0, dense.lpNorm<Eigen::Infinity>());
  out.method_gap = sm_usable ? (sm - dense).lpNorm<Eigen::Infinity>() / scale : 0.0;
  out.ill_conditioned = !lu.isInvertible() || lu.rcond() < 1e-12 || out.method_gap > 1e-8 ||
                        !sm_usable;
  out.a = (method == LinearMethod::kShermanMorrison && sm_usable) ? sm : dense;
  return out;
}

LocalEquilibriumReport verify_local_equilibrium(const std::vector<Cost>& costs,
                                                const VectorXd& m_plus, const VectorXd& a_plus,
                                                double demand, double stationarity_tol) {
  const auto n = static_cast<Index>(costs.size());
  if (m_plus.size() != n || a_plus.size() != n) {
    throw std::invalid_argument("verify_local_equilibrium: size mismatch");
  }
  SimpleMarket market;
  market.costs = costs;
  market.demand = demand;
  for (Index i = 0; i < n; ++i) market.strategies.push_back({m_plus[i], a_plus[i]});
  const ActiveSetSolution clearing = clear_simplified(market);

  LocalEquilibriumReport report;
  report.active_set_ok = std::all_of(clearing.active.begin(), clearing.active.end(),
                                     [](bool b) { return b; });
  const EquilibriumCoefficients coeff = equilibrium_coefficients(costs, m_plus, demand);
  const double tol = stationarity_tol * std::max(1.0, std::abs(clearing.v));

  report.stationary = true;
  report.negative_trace = true;
  report.zero_determinant = true;
  report.max_trace = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const Cost& cost = costs[static_cast<std::size_t>(i)];
    PlayerCurvature pc;
    pc.x = clearing.x[i];
    const double dx_da = -coeff.K2[i];
    const double k = coeff.k[i];
    pc.dpi_da = (k * pc.x + a_plus[i] - cost.b) * dx_da + pc.x;
    pc.dpi_dm = pc.x * pc.dpi_da;
    pc.d2pi_da2 = 2.0 * dx_da + k * dx_da * dx_da;
    pc.d2pi_dm2 = 2.0 * pc.x * dx_da * pc.dpi_da + pc.x * pc.x * pc.d2pi_da2;
    pc.d2pi_dmda = pc.dpi_da * dx_da + pc.x * pc.d2pi_da2;
    pc.trace = pc.d2pi_da2 + pc.d2pi_dm2;
    pc.det = pc.d2pi_dm2 * pc.d2pi_da2 - pc.d2pi_dmda * pc.d2pi_dmda;

    if (std::abs(pc.dpi_da) > tol || std::abs(pc.dpi_dm) > tol) report.stationary = false;
    if (!(pc.trace < 0.0)) report.negative_trace = false;
    if (std::abs(pc.det) > 1e-6 * std::max(1.0, pc.trace * pc.trace)) {
      report.zero_determinant = false;
    }
    report.max_trace = std::max(report.max_trace, pc.trace);
    report.max_abs_det = std::max(report.max_abs_det, std::abs(pc.det));
    report.players.push_back(pc);
  }
  return report;
}

Histogram make_histogram(const std::vector<double>& samples, int bins) {
  Histogram h;
  if (samples.empty() || bins <= 0) return h;
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    // Degenerate sample: one bin centred on the value.
    h.edges = {lo - 0.5, lo + 0.5};
    h.counts = {static_cast<std::int64_t>(samples.size())};
    return h;
  }
  const double width = (hi - lo) / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + b * width;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double s : samples) {
    int b = static_cast<int>((s - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

PriceRatioResult price_ratio_experiment(int n_samples, int n_players, double demand,
                                        Range c_range, Range b_range, std::uint64_t seed,
                                        int bins) {
  if (n_samples <= 0 || n_players <= 0) {
    throw std::invalid_argument("price_ratio_experiment: counts must be positive");
  }
  if (!(c_range.lo > 0.0) || c_range.hi < c_range.lo || b_range.lo < 0.0 ||
      b_range.hi < b_range.lo) {
    throw std::invalid_argument("price_ratio_experiment: invalid ranges");
  }
  std::mt19937_64 rng(seed);
  auto draw = [&rng](Range r) {
    if (r.hi == r.lo) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
  };

  PriceRatioResult out;
  out.ratios.reserve(static_cast<std::size_t>(n_samples));
  std::vector<Cost> costs(static_cast<std::size_t>(n_players));
  for (int s = 0; s < n_samples; ++s) {
    for (Cost& c : costs) c.c = draw(c_range);
    for (Cost& c : costs) c.b = draw(b_range);
    SimpleMarket market;
    market.costs = costs;
    market.demand = demand;
    VectorXd m(n_players);
    for (int i = 0; i < n_players; ++i) {
      market.strategies.push_back({costs[static_cast<std::size_t>(i)].c,
                                   costs[static_cast<std::size_t>(i)].b});
      m[i] = costs[static_cast<std::size_t>(i)].c;
    }
    const double v0 = clear_simplified(market).v;
    const APlusSolution eq = solve_a_plus(costs, m, demand);
    for (int i = 0; i < n_players; ++i) market.strategies[static_cast<std::size_t>(i)].a = eq.a[i];
    const ActiveSetSolution strategic = clear_simplified(market);
    if (std::find(strategic.active.begin(), strategic.active.end(), false) !=
        strategic.active.end()) {
      ++out.active_set_violations;
    }
    out.ratios.push_back(strategic.v / v0);
  }
  out.mean = std::accumulate(out.ratios.begin(), out.ratios.end(), 0.0) /
             static_cast<double>(out.ratios.size());
  out.fraction_above_one =
      static_cast<double>(std::count_if(out.ratios.begin(), out.ratios.end(),
                                        [](double r) { return r > 1.0; })) /
      static_cast<double>(out.ratios.size());
  out.histogram = make_histogram(out.ratios, bins);
  return out;
}

ProfileGrid profit_landscape(const std::vector<Cost>& costs, double demand, int player,
                             const std::vector<double>& m_grid,
                             const std::vector<double>& a_grid) {
  const auto n = static_cast<Index>(costs.size());
  if (player < 0 || player >= n) throw std::invalid_argument("profit_landscape: bad player");
  VectorXd m(n);
  for (Index i = 0; i < n; ++i) m[i] = costs[static_cast<std::size_t>(i)].c;
  const VectorXd a = solve_a_plus(costs, m, demand).a;

  SimpleMarket market;
  market.costs = costs;
  market.demand = demand;
  for (Index i = 0; i < n; ++i) market.strategies.push_back({m[i], a[i]});

  ProfileGrid grid;
  grid.m = m_grid;
  grid.a = a_grid;
  grid.profit.resize(static_cast<Index>(m_grid.size()), static_cast<Index>(a_grid.size()));
  for (std::size_t r = 0; r < m_grid.size(); ++r) {
    for (std::size_t c = 0; c < a_grid.size(); ++c) {
      market.strategies[static_cast<std::size_t>(player)] = {m_grid[r], a_grid[c]};
      grid.profit(static_cast<Index>(r), static_cast<Index>(c)) =
          simple_profit(market, clear_simplified(market), player);
    }
  }
  return grid;
}

PriceGrowthSeries price_growth_experiment(const std::vector<Cost>& costs, double demand,
                                          const std::vector<double>& k_grid, double f_m,
                                          const std::optional<MarketInstance>& constrained) {
  const auto n = static_cast<Index>(costs.size());
  if (constrained && constrained->num_players() != n) {
    throw std::invalid_argument("price_growth_experiment: constrained instance size mismatch");
  }
  if (f_m < 0.0 || f_m >= 1.0) throw std::invalid_argument("price_growth_experiment: bad f_m");
  PriceGrowthSeries out;
  for (double k : k_grid) {
    if (k < 1.0) throw std::invalid_argument("price_growth_experiment: k must be >= 1");
    VectorXd m(n);
    for (Index i = 0; i < n; ++i) m[i] = k * costs[static_cast<std::size_t>(i)].c;
    const VectorXd a = solve_a_plus(costs, m, demand).a;

    SimpleMarket market;
    market.costs = costs;
    market.demand = demand;
    for (Index i = 0; i < n; ++i) market.strategies.push_back({m[i], a[i]});
    out.k.push_back(k);
    out.unperturbed.push_back(clear_simplified(market).v);

    SimpleMarket perturbed = market;
    for (Index i = 1; i < n; ++i) {
      perturbed.strategies[static_cast<std::size_t>(i)].m *= (1.0 - f_m);
      perturbed.strategies[static_cast<std::size_t>(i)].a *= (1.0 - f_m);
    }
    out.perturbed.push_back(clear_simplified(perturbed).v);

    if (constrained) {
      const ClearingResult res = clear_market(*constrained, market.strategies);
      double num = 0.0;
      double den = 0.0;
      if (res.optimal()) {
        for (int z = 0; z < constrained->num_zones(); ++z) {
          if (!res.priced(z)) continue;
          num += constrained->zonal_demand[z] * res.v[z];
          den += constrained->zonal_demand[z];
        }
      }
      out.constrained.push_back(den > 0.0 ? num / den
                                          : std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_fit_r2: need two or more aligned points");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) return 1.0;
  if (sxx == 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

}  // namespace spotgame

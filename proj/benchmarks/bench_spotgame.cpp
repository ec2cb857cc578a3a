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
#include "spotgame/dataset.hpp"
#include "spotgame/market.hpp"
#include "spotgame/nash.hpp"
#include "spotgame/qp.hpp"
#include "spotgame/rss.hpp"
#include "spotgame/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <vector>

namespace spotgame {
namespace {

const std::filesystem::path kFixture = std::filesystem::path(SPOTGAME_DATA_DIR) / "fixture";

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Market-shaped QP: n producers, one balance row, capacities, and `rows`
// random flow limits that the unconstrained optimum violates.
Cqp market_qp(std::mt19937_64& rng, int n, int rows) {
  Eigen::VectorXd h(n), g(n);
  for (int i = 0; i < n; ++i) {
    h[i] = uniform(rng, 0.5, 5.0);
    g[i] = uniform(rng, 0.0, 10.0);
  }
  Cqp qp(h, g);
  qp.set_bounds(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, 2.0 * n / 3.0));
  qp.set_equality(Eigen::VectorXd::Ones(n), static_cast<double>(n) / 2.0);
  Eigen::MatrixXd a(rows, n);
  Eigen::VectorXd r(rows);
  for (int k = 0; k < rows; ++k) {
    for (int i = 0; i < n; ++i) a(k, i) = uniform(rng, -1.0, 1.0);
    r[k] = uniform(rng, 0.05, 0.5) * n;
  }
  qp.set_inequalities(a, r);
  return qp;
}

const HourlyDataset& fixture() {
  static const HourlyDataset ds = [] {
    DatasetPaths p;
    p.players = kFixture / "players.csv";
    p.demand = kFixture / "demand.csv";
    p.fuel = kFixture / "fuel.csv";
    p.capacity = kFixture / "capacity.csv";
    p.network = kFixture / "network.csv";
    return load_dataset(p);
  }();
  return ds;
}

void BM_SolveCqp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<Cqp> problems;
  for (int i = 0; i < 32; ++i) problems.push_back(market_qp(rng, n, n / 4));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cqp(problems[i++ % problems.size()]));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveCqp)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_ClearFixtureHour(benchmark::State& state) {
  const HourlyDataset& ds = fixture();
  const MarketInstance inst = ds.instance(static_cast<int>(state.range(0)));
  const StrategyProfile truthful = truthful_profile(inst);
  for (auto _ : state) benchmark::DoNotOptimize(clear_market(inst, truthful));
}
BENCHMARK(BM_ClearFixtureHour)->Arg(0)->Arg(18);

void BM_ClearSimplified(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  SimpleMarket mk;
  mk.demand = 1.0;
  for (int i = 0; i < n; ++i) {
    mk.costs.push_back({uniform(rng, 1.0, 10.0), uniform(rng, 0.5, 2.0)});
    mk.strategies.push_back({mk.costs.back().c, mk.costs.back().b});
  }
  for (auto _ : state) benchmark::DoNotOptimize(clear_simplified(mk));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ClearSimplified)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_SolveAPlus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto method = state.range(1) == 0 ? LinearMethod::kDense : LinearMethod::kShermanMorrison;
  std::mt19937_64 rng(3);
  std::vector<Cost> costs;
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) {
    costs.push_back({uniform(rng, 1.0, 10.0), uniform(rng, 0.5, 2.0)});
    m[i] = costs.back().c;
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_a_plus(costs, m, 1.0, method));
  state.SetLabel(method == LinearMethod::kDense ? "dense" : "sherman-morrison");
}
BENCHMARK(BM_SolveAPlus)->ArgsProduct({{8, 64, 256}, {0, 1}});

void BM_BestResponse(benchmark::State& state) {
  const MarketInstance inst = fixture().instance(18);
  const RssContext ctx = build_rss_context(inst);
  const StrategyProfile start = truthful_start(ctx);
  const int n_pts = static_cast<int>(state.range(0));
  int player = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response(inst, ctx, start, player, n_pts));
    player = (player + 1) % inst.num_players();
  }
}
BENCHMARK(BM_BestResponse)->Arg(5)->Arg(11)->Arg(21);

void BM_FindEquilibriumFixtureHour(benchmark::State& state) {
  const MarketInstance inst = fixture().instance(18);
  const RssContext ctx = build_rss_context(inst);
  GridConfig cfg;
  cfg.n_pts = 11;
  cfg.schedule = state.range(0) == 0 ? Schedule::kJacobi : Schedule::kGaussSeidel;
  for (auto _ : state) benchmark::DoNotOptimize(find_equilibrium(inst, ctx, {}, cfg));
  state.SetLabel(to_string(cfg.schedule));
}
BENCHMARK(BM_FindEquilibriumFixtureHour)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace spotgame

// The distro benchmark_main archive is LTO bytecode tied to one compiler build.
BENCHMARK_MAIN();

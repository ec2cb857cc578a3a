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


// Command-line front end: spotgame <clear|nash|synthetic|calibrate|detect> [options]

#include "spotgame/errors.hpp"
#include "spotgame/run.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  std::optional<std::string> players, demand, fuel, capacity, network;
  std::optional<double> delta_max;

  std::optional<int> n_pts, max_cycles, presolve_n_pts;
  std::optional<double> delta_ne;
  std::optional<std::string> schedule;

  std::optional<int> figure, samples;

  std::optional<std::string> targets, gt_prices;
  std::optional<int> max_iterations;

  std::optional<std::string> tb, gt, target;
  std::optional<double> confidence;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

void add_data(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--players", o.players, "player table CSV");
  cmd->add_option("--demand", o.demand, "hourly zonal demand CSV");
  cmd->add_option("--fuel", o.fuel, "daily or hourly cost series CSV");
  cmd->add_option("--capacity", o.capacity, "hourly available capacity CSV");
  cmd->add_option("--network", o.network, "hourly PTDF and margin CSV");
  cmd->add_option("--delta-max", o.delta_max, "zonal net-position box half-width (fraction)");
}

template <typename T, typename U>
void apply(const std::optional<T>& v, U& target) {
  if (v) target = *v;
}

spotgame::RunConfig build_config(spotgame::Mode mode, const Overrides& o) {
  spotgame::RunConfig cfg =
      o.config.empty() ? spotgame::RunConfig{} : spotgame::RunConfig::from_file(o.config);
  cfg.mode = mode;
  apply(o.out, cfg.output_dir);
  apply(o.seed, cfg.seed);
  apply(o.threads, cfg.threads);
  apply(o.players, cfg.data.players);
  apply(o.demand, cfg.data.demand);
  apply(o.fuel, cfg.data.fuel);
  apply(o.capacity, cfg.data.capacity);
  apply(o.network, cfg.data.network);
  apply(o.delta_max, cfg.delta_max);
  apply(o.n_pts, cfg.grid.n_pts);
  apply(o.max_cycles, cfg.grid.max_cycles);
  apply(o.delta_ne, cfg.grid.tol_ne);
  if (o.schedule) {
    if (*o.schedule == "jacobi") {
      cfg.grid.schedule = spotgame::Schedule::kJacobi;
    } else if (*o.schedule == "gauss_seidel") {
      cfg.grid.schedule = spotgame::Schedule::kGaussSeidel;
    } else {
      throw spotgame::InputError("--schedule must be jacobi or gauss_seidel");
    }
  }
  if (o.presolve_n_pts) {
    spotgame::PresolveConfig pre = cfg.grid.presolve.value_or(spotgame::PresolveConfig{});
    pre.n_pts = *o.presolve_n_pts;
    cfg.grid.presolve = pre;
  }
  apply(o.figure, cfg.synthetic.figure);
  apply(o.samples, cfg.synthetic.samples);
  apply(o.targets, cfg.calibrate.targets);
  apply(o.gt_prices, cfg.calibrate.gt_prices);
  apply(o.max_iterations, cfg.calibrate.fit.max_iterations);
  apply(o.tb, cfg.detect.tb);
  apply(o.gt, cfg.detect.gt);
  apply(o.target, cfg.detect.target);
  apply(o.confidence, cfg.detect.confidence);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategic bidding and market clearing for zonal day-ahead power markets"};
  app.require_subcommand(1);
  Overrides o;

  auto* clear = app.add_subcommand("clear", "clear every hour under truthful bids");
  add_common(clear, o);
  add_data(clear, o);

  auto* nash = app.add_subcommand("nash", "grid-search equilibria for every hour");
  add_common(nash, o);
  add_data(nash, o);
  nash->add_option("--n-pts", o.n_pts, "grid points per player");
  nash->add_option("--max-cycles", o.max_cycles, "update cycle limit");
  nash->add_option("--delta-ne", o.delta_ne, "slope-change stopping tolerance (0: exact repeat)");
  nash->add_option("--schedule", o.schedule, "jacobi or gauss_seidel");
  nash->add_option("--presolve-n-pts", o.presolve_n_pts, "coarse grid used for warm starts");

  auto* synthetic = app.add_subcommand("synthetic", "single-zone experiments on random or example data");
  add_common(synthetic, o);
  synthetic->add_option("--figure", o.figure, "4: price ratios, 5: profit landscape, 6: price growth");
  synthetic->add_option("--samples", o.samples, "number of random markets (figure 4)");

  auto* calibrate = app.add_subcommand("calibrate", "fit per-zone cost scales to observed prices");
  add_common(calibrate, o);
  add_data(calibrate, o);
  calibrate->add_option("--targets", o.targets, "observed prices CSV");
  calibrate->add_option("--gt-prices", o.gt_prices, "strategic-model prices for the ratio step");
  calibrate->add_option("--max-iterations", o.max_iterations, "gradient descent iterations");

  auto* detect = app.add_subcommand("detect", "classify hours by truthful/strategic model errors");
  add_common(detect, o);
  detect->add_option("--tb", o.tb, "truthful-model prices CSV");
  detect->add_option("--gt", o.gt, "strategic-model prices CSV");
  detect->add_option("--target", o.target, "observed prices CSV");
  detect->add_option("--confidence", o.confidence, "two-sided interval mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    const spotgame::RunConfig cfg = build_config(spotgame::parse_mode(chosen->get_name()), o);
    const spotgame::RunResult result = spotgame::run(cfg);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& p : result.outputs) std::cout << "wrote " << p.string() << '\n';
    std::cout << result.summary << (result.partial ? " (partial)" : "") << '\n';
    return 0;
  } catch (const spotgame::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const spotgame::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

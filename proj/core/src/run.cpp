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


#include "spotgame/run.hpp"

#include "parallel.hpp"
#include "spotgame/csv.hpp"
#include "spotgame/detection.hpp"
#include "spotgame/errors.hpp"
#include "spotgame/rss.hpp"
#include "spotgame/synthetic.hpp"

#include "json.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace spotgame {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kClear:
      return "clear";
    case Mode::kNash:
      return "nash";
    case Mode::kSynthetic:
      return "synthetic";
    case Mode::kCalibrate:
      return "calibrate";
    case Mode::kDetect:
      return "detect";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::kClear, Mode::kNash, Mode::kSynthetic, Mode::kCalibrate, Mode::kDetect}) {
    if (text == to_string(m)) return m;
  }
  throw InputError("unknown mode '" + text + "'");
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InputError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw InputError("config: unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError("config: bad value for '" + where + "." + key + "': " + e.what());
  }
}

void read_path(const json& j, const char* key, fs::path& out, const fs::path& base,
               const std::string& where) {
  std::string s;
  read(j, key, s, where);
  if (s.empty()) return;
  fs::path p(s);
  out = (p.is_relative() && !base.empty()) ? base / p : p;
}

void read_range(const json& j, const char* key, Range& out, const std::string& where) {
  std::vector<double> v;
  read(j, key, v, where);
  if (!j.contains(key)) return;
  if (v.size() != 2) throw InputError("config: '" + where + "." + key + "' must be [lo, hi]");
  out = {v[0], v[1]};
}

std::string path_text(const fs::path& p) { return p.generic_string(); }

}  // namespace

RunConfig RunConfig::from_json(const std::string& text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  check_keys(root, {"mode", "data", "nash", "synthetic", "calibrate", "detect", "seed", "threads",
                    "output_dir"},
             "config");
  std::string mode;
  read(root, "mode", mode, "config");
  if (!mode.empty()) cfg.mode = parse_mode(mode);
  if (root.contains("seed") && !root["seed"].is_number_unsigned()) {
    throw InputError("config: 'config.seed' must be a non-negative integer");
  }
  read(root, "seed", cfg.seed, "config");
  read(root, "threads", cfg.threads, "config");
  if (cfg.threads < 1) throw InputError("config: 'config.threads' must be at least 1");
  read_path(root, "output_dir", cfg.output_dir, base_dir, "config");

  if (root.contains("data")) {
    const json& d = root["data"];
    check_keys(d, {"players", "demand", "fuel", "capacity", "network", "delta_max"}, "data");
    read_path(d, "players", cfg.data.players, base_dir, "data");
    read_path(d, "demand", cfg.data.demand, base_dir, "data");
    read_path(d, "fuel", cfg.data.fuel, base_dir, "data");
    read_path(d, "capacity", cfg.data.capacity, base_dir, "data");
    read_path(d, "network", cfg.data.network, base_dir, "data");
    read(d, "delta_max", cfg.delta_max, "data");
  }
  if (root.contains("nash")) {
    const json& n = root["nash"];
    check_keys(n, {"n_pts", "max_cycles", "delta_ne", "schedule", "presolve"}, "nash");
    read(n, "n_pts", cfg.grid.n_pts, "nash");
    read(n, "max_cycles", cfg.grid.max_cycles, "nash");
    read(n, "delta_ne", cfg.grid.tol_ne, "nash");
    std::string schedule;
    read(n, "schedule", schedule, "nash");
    if (schedule == "gauss_seidel") {
      cfg.grid.schedule = Schedule::kGaussSeidel;
    } else if (schedule == "jacobi" || schedule.empty()) {
      cfg.grid.schedule = Schedule::kJacobi;
    } else {
      throw InputError("config: nash.schedule must be 'jacobi' or 'gauss_seidel'");
    }
    if (n.contains("presolve") && !n["presolve"].is_null()) {
      const json& p = n["presolve"];
      check_keys(p, {"n_pts", "max_cycles"}, "nash.presolve");
      PresolveConfig pre;
      read(p, "n_pts", pre.n_pts, "nash.presolve");
      read(p, "max_cycles", pre.max_cycles, "nash.presolve");
      cfg.grid.presolve = pre;
    }
  }
  if (root.contains("synthetic")) {
    const json& s = root["synthetic"];
    check_keys(s, {"figure", "samples", "players", "demand", "example_demand", "c_range",
                   "b_range", "bins", "m_range", "a_range", "landscape_points", "k_max", "k_points", "f_m"},
               "synthetic");
    SyntheticConfig& sc = cfg.synthetic;
    read(s, "figure", sc.figure, "synthetic");
    read(s, "samples", sc.samples, "synthetic");
    read(s, "players", sc.players, "synthetic");
    read(s, "demand", sc.demand, "synthetic");
    read(s, "example_demand", sc.example_demand, "synthetic");
    read_range(s, "c_range", sc.c_range, "synthetic");
    read_range(s, "b_range", sc.b_range, "synthetic");
    read(s, "bins", sc.bins, "synthetic");
    read_range(s, "m_range", sc.m_range, "synthetic");
    read_range(s, "a_range", sc.a_range, "synthetic");
    read(s, "landscape_points", sc.landscape_points, "synthetic");
    read(s, "k_max", sc.k_max, "synthetic");
    read(s, "k_points", sc.k_points, "synthetic");
    read(s, "f_m", sc.f_m, "synthetic");
  }
  if (root.contains("calibrate")) {
    const json& c = root["calibrate"];
    check_keys(c, {"targets", "gt_prices", "gt_hours", "max_iterations", "gradient_tol",
                   "initial_step", "scale_floor"},
               "calibrate");
    read_path(c, "targets", cfg.calibrate.targets, base_dir, "calibrate");
    read_path(c, "gt_prices", cfg.calibrate.gt_prices, base_dir, "calibrate");
    read(c, "gt_hours", cfg.calibrate.gt_hours, "calibrate");
    read(c, "max_iterations", cfg.calibrate.fit.max_iterations, "calibrate");
    read(c, "gradient_tol", cfg.calibrate.fit.gradient_tol, "calibrate");
    read(c, "initial_step", cfg.calibrate.fit.initial_step, "calibrate");
    read(c, "scale_floor", cfg.calibrate.fit.scale_floor, "calibrate");
  }
  if (root.contains("detect")) {
    const json& d = root["detect"];
    check_keys(d, {"tb", "gt", "target", "confidence"}, "detect");
    read_path(d, "tb", cfg.detect.tb, base_dir, "detect");
    read_path(d, "gt", cfg.detect.gt, base_dir, "detect");
    read_path(d, "target", cfg.detect.target, base_dir, "detect");
    read(d, "confidence", cfg.detect.confidence, "detect");
  }
  return cfg;
}

RunConfig RunConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), path.parent_path());
}

std::string RunConfig::canonical_json() const {
  json j;
  j["mode"] = to_string(mode);
  j["seed"] = seed;
  j["data"] = {{"players", path_text(data.players)}, {"demand", path_text(data.demand)},
               {"fuel", path_text(data.fuel)},       {"capacity", path_text(data.capacity)},
               {"network", path_text(data.network)}, {"delta_max", delta_max}};
  j["nash"] = {{"n_pts", grid.n_pts},
               {"max_cycles", grid.max_cycles},
               {"delta_ne", grid.tol_ne},
               {"schedule", to_string(grid.schedule)},
               {"presolve", grid.presolve ? json{{"n_pts", grid.presolve->n_pts},
                                                 {"max_cycles", grid.presolve->max_cycles}}
                                          : json(nullptr)}};
  const SyntheticConfig& s = synthetic;
  j["synthetic"] = {{"figure", s.figure},
                    {"samples", s.samples},
                    {"players", s.players},
                    {"demand", s.demand},
                    {"example_demand", s.example_demand},
                    {"c_range", {s.c_range.lo, s.c_range.hi}},
                    {"b_range", {s.b_range.lo, s.b_range.hi}},
                    {"bins", s.bins},
                    {"m_range", {s.m_range.lo, s.m_range.hi}},
                    {"a_range", {s.a_range.lo, s.a_range.hi}},
                    {"landscape_points", s.landscape_points},
                    {"k_max", s.k_max},
                    {"k_points", s.k_points},
                    {"f_m", s.f_m}};
  j["calibrate"] = {{"targets", path_text(calibrate.targets)},
                    {"gt_prices", path_text(calibrate.gt_prices)},
                    {"gt_hours", calibrate.gt_hours},
                    {"max_iterations", calibrate.fit.max_iterations},
                    {"gradient_tol", calibrate.fit.gradient_tol},
                    {"initial_step", calibrate.fit.initial_step},
                    {"scale_floor", calibrate.fit.scale_floor}};
  j["detect"] = {{"tb", path_text(detect.tb)},
                 {"gt", path_text(detect.gt)},
                 {"target", path_text(detect.target)},
                 {"confidence", detect.confidence}};
  return j.dump();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_json()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------
// Modes

namespace {

struct Writer {
  const RunConfig& config;
  RunResult& result;

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = config.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    write_provenance(out, {{"config_hash", config.hash()},
                           {"seed", std::to_string(config.seed)},
                           {"mode", to_string(config.mode)},
                           {"status", result.partial ? "partial" : "complete"}});
    body(out);
    if (!out) throw InputError("write failed for " + path.string());
    result.outputs.push_back(path);
  }
};

std::string num(double x) { return format_number(x); }

void require(const fs::path& p, const char* what) {
  if (p.empty()) throw InputError(std::string("missing input: ") + what);
}

HourlyDataset load_data(const RunConfig& cfg) {
  require(cfg.data.players, "players table");
  require(cfg.data.demand, "demand table");
  return load_dataset(cfg.data, cfg.delta_max);
}

// Reorders the columns of `table` to `zones` and checks the hours match.
Eigen::MatrixXd align_prices(const PriceTable& table, const std::vector<std::int64_t>& hours,
                             const std::vector<std::string>& zones, const std::string& what) {
  if (table.hours != hours) {
    throw InputError(what + ": hours do not match the reference series (" +
                     std::to_string(table.hours.size()) + " vs " + std::to_string(hours.size()) +
                     " rows)");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(hours.size()), static_cast<Eigen::Index>(zones.size()));
  for (std::size_t z = 0; z < zones.size(); ++z) {
    const auto it = std::find(table.zones.begin(), table.zones.end(), zones[z]);
    if (it == table.zones.end()) throw InputError(what + ": missing zone column '" + zones[z] + "'");
    out.col(static_cast<Eigen::Index>(z)) =
        table.values.col(static_cast<Eigen::Index>(it - table.zones.begin()));
  }
  return out;
}

void write_prices(Writer& w, const std::string& name, const HourlyDataset& ds,
                  const Eigen::MatrixXd& prices) {
  w.write(name, [&](std::ostream& out) {
    write_price_table(out, PriceTable{ds.hours, ds.zones, prices});
  });
}

void run_clear(const RunConfig& cfg, RunResult& result) {
  const HourlyDataset ds = load_data(cfg);
  const int hours = ds.num_hours();
  std::vector<ClearingResult> cleared(static_cast<std::size_t>(hours));
  detail::parallel_for(cleared.size(), cfg.threads, [&](std::size_t t) {
    const MarketInstance inst = ds.instance(static_cast<int>(t));
    cleared[t] = clear_market(inst, truthful_profile(inst));
  });
  Eigen::MatrixXd prices(hours, ds.num_zones());
  int failed = 0;
  for (int t = 0; t < hours; ++t) {
    const ClearingResult& res = cleared[static_cast<std::size_t>(t)];
    if (!res.optimal()) {
      prices.row(t).setConstant(std::numeric_limits<double>::quiet_NaN());
      result.warnings.push_back(format_iso_hour(ds.hours[static_cast<std::size_t>(t)]) +
                                ": " + res.diagnostic);
      ++failed;
    } else {
      prices.row(t) = res.v.transpose();
    }
  }
  result.partial = failed > 0;
  Writer w{cfg, result};
  write_prices(w, "prices_tb.csv", ds, prices);
  w.write("dispatch_tb.csv", [&](std::ostream& out) {
    out << "hour,player,zone,x,price_setter\n";
    for (int t = 0; t < hours; ++t) {
      const ClearingResult& res = cleared[static_cast<std::size_t>(t)];
      if (!res.optimal()) continue;
      for (std::size_t i = 0; i < ds.players.size(); ++i) {
        const int z = ds.players[i].zone;
        out << format_iso_hour(ds.hours[static_cast<std::size_t>(t)]) << ',' << ds.players[i].name
            << ',' << ds.zones[static_cast<std::size_t>(z)] << ','
            << num(res.x[static_cast<Eigen::Index>(i)]) << ','
            << (res.price_setter[static_cast<std::size_t>(z)] == static_cast<int>(i) ? 1 : 0)
            << '\n';
      }
    }
  });
  result.summary = "cleared " + std::to_string(hours - failed) + "/" + std::to_string(hours) +
                   " hours";
}

struct NashHour {
  bool ok = false;
  std::string error;
  RssContext context;
  EquilibriumReport report;
};

void run_nash(const RunConfig& cfg, RunResult& result) {
  const HourlyDataset ds = load_data(cfg);
  const int hours = ds.num_hours();
  GridConfig grid = cfg.grid;
  grid.validate();
  grid.threads = 1;  // parallelism goes over hours
  std::vector<NashHour> out(static_cast<std::size_t>(hours));
  detail::parallel_for(out.size(), cfg.threads, [&](std::size_t t) {
    NashHour& h = out[t];
    try {
      const MarketInstance inst = ds.instance(static_cast<int>(t));
      h.context = build_rss_context(inst);
      h.report = find_equilibrium(inst, h.context, {}, grid);
      h.ok = true;
    } catch (const NumericalError& e) {
      h.error = e.what();
    }
  });

  Eigen::MatrixXd prices(hours, ds.num_zones());
  int failed = 0;
  int converged = 0;
  for (int t = 0; t < hours; ++t) {
    const NashHour& h = out[static_cast<std::size_t>(t)];
    if (!h.ok) {
      prices.row(t).setConstant(std::numeric_limits<double>::quiet_NaN());
      result.warnings.push_back(format_iso_hour(ds.hours[static_cast<std::size_t>(t)]) + ": " + h.error);
      ++failed;
      continue;
    }
    prices.row(t) = h.report.clearing.v.transpose();
    if (h.report.converged) ++converged;
  }
  result.partial = failed > 0;
  Writer w{cfg, result};
  write_prices(w, "prices_gt.csv", ds, prices);
  w.write("equilibrium.csv", [&](std::ostream& os) {
    os << "hour,player,zone,segment,m,a,x,profit\n";
    for (int t = 0; t < hours; ++t) {
      const NashHour& h = out[static_cast<std::size_t>(t)];
      if (!h.ok) continue;
      for (std::size_t i = 0; i < ds.players.size(); ++i) {
        const Strategy& s = h.report.strategies[i];
        os << format_iso_hour(ds.hours[static_cast<std::size_t>(t)]) << ',' << ds.players[i].name
           << ',' << ds.zones[static_cast<std::size_t>(ds.players[i].zone)] << ','
           << to_string(h.context.flags[i]) << ',' << num(s.m) << ',' << num(s.a) << ','
           << num(h.report.clearing.x[static_cast<Eigen::Index>(i)]) << ','
           << num(h.report.profits[static_cast<Eigen::Index>(i)]) << '\n';
      }
    }
  });
  w.write("nash_summary.csv", [&](std::ostream& os) {
    os << "hour,converged,cycles,presolve_cycles,epsilon\n";
    for (int t = 0; t < hours; ++t) {
      const NashHour& h = out[static_cast<std::size_t>(t)];
      os << format_iso_hour(ds.hours[static_cast<std::size_t>(t)]) << ',';
      if (!h.ok) {
        os << ",,,\n";
        continue;
      }
      os << (h.report.converged ? 1 : 0) << ',' << h.report.cycles_used << ','
         << h.report.presolve_cycles << ',' << num(h.report.epsilon) << '\n';
    }
  });
  result.summary = "equilibria for " + std::to_string(hours - failed) + "/" +
                   std::to_string(hours) + " hours, " + std::to_string(converged) + " converged";
}

std::vector<double> even_grid(Range r, int points) {
  if (points < 2) throw InputError("grids need at least two points");
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(r.lo + (r.hi - r.lo) * static_cast<double>(i) / (points - 1));
  }
  return g;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = linear_fit_r2(x, y);
  return f;
}

void run_synthetic(const RunConfig& cfg, RunResult& result) {
  const SyntheticConfig& s = cfg.synthetic;
  Writer w{cfg, result};
  if (s.figure == 4) {
    const PriceRatioResult r = price_ratio_experiment(s.samples, s.players, s.demand, s.c_range,
                                                      s.b_range, cfg.seed, s.bins);
    w.write("price_ratio.csv", [&](std::ostream& os) {
      os << "sample,ratio\n";
      for (std::size_t i = 0; i < r.ratios.size(); ++i) os << i << ',' << num(r.ratios[i]) << '\n';
    });
    w.write("price_ratio_hist.csv", [&](std::ostream& os) {
      os << "bin_lo,bin_hi,count\n";
      for (std::size_t b = 0; b < r.histogram.counts.size(); ++b) {
        os << num(r.histogram.edges[b]) << ',' << num(r.histogram.edges[b + 1]) << ','
           << r.histogram.counts[b] << '\n';
      }
    });
    w.write("price_ratio_summary.csv", [&](std::ostream& os) {
      os << "statistic,value\n"
         << "samples," << r.ratios.size() << '\n'
         << "mean," << num(r.mean) << '\n'
         << "fraction_above_one," << num(r.fraction_above_one) << '\n'
         << "active_set_violations," << r.active_set_violations << '\n';
    });
    result.summary = "mean price ratio " + num(r.mean) + ", share above one " +
                     num(r.fraction_above_one);
  } else if (s.figure == 5) {
    const std::vector<double> m = even_grid(s.m_range, s.landscape_points);
    const std::vector<double> a = even_grid(s.a_range, s.landscape_points);
    const ProfileGrid g = profit_landscape(six_player_costs(), s.example_demand, 0, m, a);
    w.write("profit_landscape.csv", [&](std::ostream& os) {
      os << "m,a,profit\n";
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
          os << num(m[i]) << ',' << num(a[j]) << ','
             << num(g.profit(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
        }
      }
    });
    result.summary = "profit landscape on " + std::to_string(m.size()) + "x" +
                     std::to_string(a.size()) + " grid, max " + num(g.profit.maxCoeff());
  } else if (s.figure == 6) {
    const std::vector<double> k = even_grid({1.0, s.k_max}, s.k_points);
    const PriceGrowthSeries g = price_growth_experiment(six_player_costs(), s.example_demand, k,
                                                        s.f_m, three_zone_instance(s.example_demand));
    w.write("price_growth.csv", [&](std::ostream& os) {
      os << "k,unperturbed,perturbed,constrained\n";
      for (std::size_t i = 0; i < g.k.size(); ++i) {
        os << num(g.k[i]) << ',' << num(g.unperturbed[i]) << ',' << num(g.perturbed[i]) << ','
           << num(g.constrained[i]) << '\n';
      }
    });
    const LineFit fu = fit_line(g.k, g.unperturbed);
    const LineFit fp = fit_line(g.k, g.perturbed);
    const LineFit fc = fit_line(g.k, g.constrained);
    w.write("price_growth_fit.csv", [&](std::ostream& os) {
      os << "series,slope,intercept,r2\n";
      os << "unperturbed," << num(fu.slope) << ',' << num(fu.intercept) << ',' << num(fu.r2) << '\n';
      os << "perturbed," << num(fp.slope) << ',' << num(fp.intercept) << ',' << num(fp.r2) << '\n';
      os << "constrained," << num(fc.slope) << ',' << num(fc.intercept) << ',' << num(fc.r2) << '\n';
    });
    result.summary = "price growth R^2: unperturbed " + num(fu.r2) + ", perturbed " +
                     num(fp.r2) + ", constrained " + num(fc.r2);
  } else {
    throw InputError("synthetic: figure must be 4, 5 or 6");
  }
}

void run_calibrate(const RunConfig& cfg, RunResult& result) {
  const HourlyDataset ds = load_data(cfg);
  require(cfg.calibrate.targets, "target prices");
  CalibrationProblem problem;
  for (int t = 0; t < ds.num_hours(); ++t) problem.hours.push_back(ds.instance(t));
  problem.targets = align_prices(read_price_table(cfg.calibrate.targets), ds.hours, ds.zones,
                                 cfg.calibrate.targets.string());
  problem.initial = Scales::ones(ds.num_zones());
  FitOptions fit = cfg.calibrate.fit;
  fit.threads = cfg.threads;
  const FitResult r = fit_tb_scales(problem, fit);
  if (!r.converged) result.warnings.push_back("calibration: " + r.diagnostic);

  std::optional<Scales> gt;
  if (!cfg.calibrate.gt_prices.empty()) {
    const Eigen::MatrixXd gt_prices = align_prices(read_price_table(cfg.calibrate.gt_prices),
                                                   ds.hours, ds.zones,
                                                   cfg.calibrate.gt_prices.string());
    gt = gt_ratio_adjust(gt_prices, problem.targets, cfg.calibrate.gt_hours, r.scales);
  }

  Writer w{cfg, result};
  w.write("scales.csv", [&](std::ostream& os) {
    os << "zone,s_c,s_b" << (gt ? ",s_c_gt,s_b_gt" : "") << '\n';
    for (int z = 0; z < ds.num_zones(); ++z) {
      os << ds.zones[static_cast<std::size_t>(z)] << ',' << num(r.scales.c[z]) << ','
         << num(r.scales.b[z]);
      if (gt) os << ',' << num(gt->c[z]) << ',' << num(gt->b[z]);
      os << '\n';
    }
  });
  w.write("calibration_trace.csv", [&](std::ostream& os) {
    os << "iteration,objective,gradient_norm,step";
    for (const std::string& z : ds.zones) os << ",s_c_" << z << ",s_b_" << z;
    os << '\n';
    for (const FitIterate& it : r.trace) {
      os << it.iteration << ',' << num(it.objective) << ',' << num(it.gradient_norm) << ','
         << num(it.step);
      for (int z = 0; z < ds.num_zones(); ++z) {
        os << ',' << num(it.scales.c[z]) << ',' << num(it.scales.b[z]);
      }
      os << '\n';
    }
  });
  result.summary = "objective " + num(r.trace.front().objective) + " -> " + num(r.objective) +
                   " in " + std::to_string(r.iterations) + " iterations";
}

void run_detect(const RunConfig& cfg, RunResult& result) {
  require(cfg.detect.target, "target prices");
  require(cfg.detect.tb, "truthful-model prices");
  require(cfg.detect.gt, "strategic-model prices");
  const PriceTable target = read_price_table(cfg.detect.target);
  const Eigen::MatrixXd tb = align_prices(read_price_table(cfg.detect.tb), target.hours,
                                          target.zones, cfg.detect.tb.string());
  const Eigen::MatrixXd gt = align_prices(read_price_table(cfg.detect.gt), target.hours,
                                          target.zones, cfg.detect.gt.string());
  if (target.hours.empty()) throw InputError("detect: no hours");
  const std::int64_t h0 = target.hours.front();
  const int first_hod = static_cast<int>(((h0 % 24) + 24) % 24);
  const StateSeries states = run_tdsd(tb, gt, target.values, cfg.detect.confidence, first_hod);

  Writer w{cfg, result};
  w.write("states.csv", [&](std::ostream& os) {
    os << "hour";
    for (const std::string& z : target.zones) os << ',' << z;
    os << ",aggregate\n";
    for (std::size_t t = 0; t < target.hours.size(); ++t) {
      os << format_iso_hour(target.hours[t]);
      for (const StateLabel& l : states.zonal[t]) os << ',' << to_string(l.state);
      os << ',' << to_string(states.aggregate[t]) << '\n';
    }
  });
  w.write("regions.csv", [&](std::ostream& os) {
    os << "hour";
    for (const std::string& z : target.zones) os << ',' << z;
    os << '\n';
    for (std::size_t t = 0; t < target.hours.size(); ++t) {
      os << format_iso_hour(target.hours[t]);
      for (const StateLabel& l : states.zonal[t]) os << ",R" << l.region;
      os << '\n';
    }
  });
  w.write("hour_of_day.csv", [&](std::ostream& os) {
    os << "hour_of_day,S0,TB,GT,EA,OA\n";
    for (std::size_t h = 0; h < states.hour_of_day.size(); ++h) {
      os << h;
      for (int c : states.hour_of_day[h]) os << ',' << c;
      os << '\n';
    }
  });
  w.write("null_models.csv", [&](std::ostream& os) {
    os << "zone,model,mean,std,ci_lo,ci_hi\n";
    for (std::size_t z = 0; z < target.zones.size(); ++z) {
      for (const auto& [name, m] : {std::pair{"TB", states.null_tb[z]}, std::pair{"GT", states.null_gt[z]}}) {
        os << target.zones[z] << ',' << name << ',' << num(m.mean) << ',' << num(m.std) << ','
           << num(m.ci_lo) << ',' << num(m.ci_hi) << '\n';
      }
    }
  });
  const auto null_hours = std::count(states.aggregate.begin(), states.aggregate.end(), State::kNull);
  result.summary = std::to_string(null_hours) + "/" + std::to_string(states.aggregate.size()) +
                   " hours in the null state";
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw InputError("cannot create output directory " + config.output_dir.string());
  try {
    switch (config.mode) {
      case Mode::kClear:
        run_clear(config, result);
        break;
      case Mode::kNash:
        run_nash(config, result);
        break;
      case Mode::kSynthetic:
        run_synthetic(config, result);
        break;
      case Mode::kCalibrate:
        run_calibrate(config, result);
        break;
      case Mode::kDetect:
        run_detect(config, result);
        break;
    }
  } catch (const std::invalid_argument& e) {
    // Validation failures inside the numerical modules stem from the inputs.
    throw InputError(std::string(to_string(config.mode)) + ": " + e.what());
  }
  return result;
}

}  // namespace spotgame

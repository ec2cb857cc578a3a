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


#include "spotgame/dataset.hpp"

#include "spotgame/csv.hpp"
#include "spotgame/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spotgame {

namespace {

constexpr const char* kUsdPerTon = "_usd_per_ton";

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void load_demand(const std::filesystem::path& path, HourlyDataset& ds) {
  const CsvTable csv = read_csv(path);
  if (csv.header.size() < 2 || csv.header.front() != "hour") {
    throw InputError(csv.source + ": demand table needs an 'hour' column followed by zones");
  }
  if (csv.rows.empty()) throw InputError(csv.source + ": no hours");
  ds.zones.assign(csv.header.begin() + 1, csv.header.end());
  ds.demand.resize(static_cast<Eigen::Index>(csv.rows.size()), ds.num_zones());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::int64_t h = parse_iso_hour(csv.rows[r][0], csv.where(r));
    if (!ds.hours.empty()) {
      const std::int64_t prev = ds.hours.back();
      if (h <= prev) {
        throw InputError(csv.where(r) + ": timestamps not increasing (" + format_iso_hour(h) +
                         " after " + format_iso_hour(prev) + ")");
      }
      if (h != prev + 1) {
        std::string gap = format_iso_hour(prev + 1);
        if (h - prev > 2) gap += " .. " + format_iso_hour(h - 1);
        throw InputError(csv.where(r) + ": missing hour(s) " + gap);
      }
    }
    ds.hours.push_back(h);
    for (int z = 0; z < ds.num_zones(); ++z) {
      const double d = parse_number(csv.rows[r][static_cast<std::size_t>(z) + 1], csv.where(r));
      if (d <= 0.0) throw InputError(csv.where(r) + ": demand must be positive");
      ds.demand(static_cast<Eigen::Index>(r), z) = d;
    }
  }
}

void load_players(const std::filesystem::path& path, const std::vector<TypeParams>& types,
                  HourlyDataset& ds) {
  const CsvTable csv = read_csv(path);
  const int c_name = csv.column("player");
  const int c_zone = csv.column("zone");
  const int c_type = csv.column("type");
  const int c_cap = csv.column("capacity");
  const int c_n = csv.has_column("n_theta") ? csv.column("n_theta") : -1;
  const int c_f = csv.has_column("f_theta") ? csv.column("f_theta") : -1;
  const int c_k = csv.has_column("k_source") ? csv.column("k_source") : -1;
  if (csv.rows.empty()) throw InputError(csv.source + ": no players");
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    PlayerSpec p;
    p.name = row[static_cast<std::size_t>(c_name)];
    for (const PlayerSpec& q : ds.players) {
      if (q.name == p.name) throw InputError(csv.where(r) + ": duplicate player '" + p.name + "'");
    }
    const auto zit = std::find(ds.zones.begin(), ds.zones.end(), row[static_cast<std::size_t>(c_zone)]);
    if (zit == ds.zones.end()) {
      throw InputError(csv.where(r) + ": zone '" + row[static_cast<std::size_t>(c_zone)] +
                       "' does not appear in the demand table");
    }
    p.zone = static_cast<int>(zit - ds.zones.begin());
    try {
      p.params = find_type(types, row[static_cast<std::size_t>(c_type)]);
    } catch (const InputError& e) {
      throw InputError(csv.where(r) + ": " + e.what());
    }
    if (c_n >= 0 && !row[static_cast<std::size_t>(c_n)].empty()) {
      p.params.n_theta = parse_number(row[static_cast<std::size_t>(c_n)], csv.where(r));
    }
    if (c_f >= 0 && !row[static_cast<std::size_t>(c_f)].empty()) {
      p.params.f_theta = parse_number(row[static_cast<std::size_t>(c_f)], csv.where(r));
    }
    if (c_k >= 0 && !row[static_cast<std::size_t>(c_k)].empty()) {
      const std::string& k = row[static_cast<std::size_t>(c_k)];
      const bool numeric = k.find_first_not_of("0123456789.+-eE") == std::string::npos;
      if (numeric) {
        p.params.k_constant = parse_number(k, csv.where(r));
        p.params.k_series.clear();
      } else {
        p.params.k_constant.reset();
        p.params.k_series = ends_with(k, kUsdPerTon) ? k.substr(0, k.size() - 12) : k;
      }
    }
    try {
      p.params.validate();
    } catch (const InputError& e) {
      throw InputError(csv.where(r) + ": " + e.what());
    }
    if (p.params.k_constant && *p.params.k_constant < 0.0) {
      throw InputError(csv.where(r) + ": negative production cost");
    }
    p.installed = parse_number(row[static_cast<std::size_t>(c_cap)], csv.where(r));
    if (p.installed <= 0.0) throw InputError(csv.where(r) + ": capacity must be positive");
    ds.players.push_back(std::move(p));
  }
}

void load_fuel(const std::filesystem::path& path, HourlyDataset& ds) {
  const CsvTable csv = read_csv(path);
  const bool daily = csv.header.front() == "date";
  if (!daily && csv.header.front() != "hour") {
    throw InputError(csv.source + ": first column must be 'date' (daily) or 'hour'");
  }
  // Key each row by day or hour, then fill the dataset hours.
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::int64_t key = daily ? parse_iso_date(csv.rows[r][0], csv.where(r))
                                   : parse_iso_hour(csv.rows[r][0], csv.where(r));
    if (!index.empty() && key <= index.rbegin()->first) {
      throw InputError(csv.where(r) + ": timestamps not increasing");
    }
    index[key] = r;
  }
  for (std::size_t c = 1; c < csv.header.size(); ++c) {
    std::string name = csv.header[c];
    const bool usd_per_ton = ends_with(name, kUsdPerTon);
    if (usd_per_ton) name = name.substr(0, name.size() - 12);
    Eigen::VectorXd values(ds.num_hours());
    for (int t = 0; t < ds.num_hours(); ++t) {
      const std::int64_t h = ds.hours[static_cast<std::size_t>(t)];
      const std::int64_t key = daily ? (h >= 0 ? h / 24 : (h - 23) / 24) : h;
      const auto it = index.find(key);
      if (it == index.end()) {
        throw InputError(csv.source + ": series '" + csv.header[c] + "' has no value for " +
                         format_iso_hour(h));
      }
      double v = parse_number(csv.rows[it->second][c], csv.where(it->second));
      if (v < 0.0) throw InputError(csv.where(it->second) + ": negative price in '" + csv.header[c] + "'");
      if (usd_per_ton) v = coal_k_from_usd_per_ton(v);
      values[t] = v;
    }
    ds.series[name] = values;
  }
}

void load_capacity(const std::filesystem::path& path, HourlyDataset& ds) {
  const CsvTable csv = read_csv(path);
  if (csv.header.front() != "hour") throw InputError(csv.source + ": first column must be 'hour'");
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    index[parse_iso_hour(csv.rows[r][0], csv.where(r))] = r;
  }
  for (std::size_t c = 1; c < csv.header.size(); ++c) {
    const auto pit = std::find_if(ds.players.begin(), ds.players.end(),
                                  [&](const PlayerSpec& p) { return p.name == csv.header[c]; });
    if (pit == ds.players.end()) {
      throw InputError(csv.source + ": column '" + csv.header[c] + "' is not a player");
    }
    const auto i = static_cast<Eigen::Index>(pit - ds.players.begin());
    for (int t = 0; t < ds.num_hours(); ++t) {
      const auto it = index.find(ds.hours[static_cast<std::size_t>(t)]);
      if (it == index.end()) {
        throw InputError(csv.source + ": no row for " + format_iso_hour(ds.hours[static_cast<std::size_t>(t)]));
      }
      const double q = parse_number(csv.rows[it->second][c], csv.where(it->second));
      if (q < 0.0) throw InputError(csv.where(it->second) + ": negative capacity");
      ds.available(t, i) = q;
    }
  }
}

void load_network(const std::filesystem::path& path, HourlyDataset& ds) {
  const CsvTable csv = read_csv(path);
  const int c_hour = csv.column("hour");
  const int c_r = csv.column("r");
  const int c_R = csv.column("R");
  csv.column("line");
  std::vector<int> zone_cols;
  for (const std::string& z : ds.zones) zone_cols.push_back(csv.column(z));

  std::vector<std::vector<std::size_t>> rows_of(static_cast<std::size_t>(ds.num_hours()));
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::int64_t h = parse_iso_hour(csv.rows[r][static_cast<std::size_t>(c_hour)], csv.where(r));
    const std::int64_t t = h - ds.hours.front();
    if (t < 0 || t >= ds.num_hours()) {
      throw InputError(csv.where(r) + ": hour " + format_iso_hour(h) + " outside the demand horizon");
    }
    rows_of[static_cast<std::size_t>(t)].push_back(r);
  }
  ds.network.resize(static_cast<std::size_t>(ds.num_hours()));
  for (int t = 0; t < ds.num_hours(); ++t) {
    const auto& rows = rows_of[static_cast<std::size_t>(t)];
    HourNetwork& net = ds.network[static_cast<std::size_t>(t)];
    const auto lines = static_cast<Eigen::Index>(rows.size());
    net.ptdf.resize(lines, ds.num_zones());
    net.r.resize(lines);
    net.R.resize(lines);
    for (Eigen::Index l = 0; l < lines; ++l) {
      const std::size_t r = rows[static_cast<std::size_t>(l)];
      for (int z = 0; z < ds.num_zones(); ++z) {
        net.ptdf(l, z) = parse_number(csv.rows[r][static_cast<std::size_t>(zone_cols[static_cast<std::size_t>(z)])], csv.where(r));
      }
      net.r[l] = parse_number(csv.rows[r][static_cast<std::size_t>(c_r)], csv.where(r));
      net.R[l] = parse_number(csv.rows[r][static_cast<std::size_t>(c_R)], csv.where(r));
      if (net.r[l] > net.R[l]) throw InputError(csv.where(r) + ": r exceeds R");
    }
  }
}

}  // namespace

double HourlyDataset::k_at(int player, int t) const {
  const PlayerSpec& p = players.at(static_cast<std::size_t>(player));
  if (p.params.k_constant) return *p.params.k_constant;
  const auto it = series.find(p.params.k_series);
  if (it == series.end()) {
    throw InputError("player " + p.name + ": no cost series '" + p.params.k_series + "'");
  }
  return it->second[t];
}

std::vector<Player> HourlyDataset::players_at(int t) const {
  std::vector<Player> out;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const PlayerSpec& spec = players[i];
    const double q = available(t, static_cast<Eigen::Index>(i));
    // A unit with nothing available keeps the cost curve of its installed size.
    const Cost cost = cost_from_k(k_at(static_cast<int>(i), t), spec.params.n_theta,
                                  spec.params.f_theta, q > 0.0 ? q : spec.installed);
    out.push_back({static_cast<int>(i), spec.zone, cost.c, cost.b, q});
  }
  return out;
}

MarketInstance HourlyDataset::instance(int t) const {
  if (t < 0 || t >= num_hours()) throw std::out_of_range("dataset hour out of range");
  MarketInstance inst;
  inst.players = players_at(t);
  inst.zonal_demand = demand.row(t).transpose();
  if (network.empty()) {
    inst.network = NetworkPolytope::unconstrained(num_zones());
  } else {
    const HourNetwork& net = network[static_cast<std::size_t>(t)];
    inst.network = assemble_polytope(net.ptdf, net.r, net.R, inst.zonal_demand, delta_max);
  }
  return inst;
}

HourlyDataset load_dataset(const DatasetPaths& paths, double delta_max,
                           const std::vector<TypeParams>& types) {
  if (!(delta_max > 0.0 && delta_max < 1.0)) throw InputError("delta_max must lie in (0, 1)");
  HourlyDataset ds;
  ds.delta_max = delta_max;
  load_demand(paths.demand, ds);
  load_players(paths.players, types, ds);
  ds.available.resize(ds.num_hours(), static_cast<Eigen::Index>(ds.players.size()));
  for (std::size_t i = 0; i < ds.players.size(); ++i) {
    ds.available.col(static_cast<Eigen::Index>(i)).setConstant(ds.players[i].installed);
  }
  if (!paths.fuel.empty()) load_fuel(paths.fuel, ds);
  if (!paths.capacity.empty()) load_capacity(paths.capacity, ds);
  if (!paths.network.empty()) load_network(paths.network, ds);

  for (const PlayerSpec& p : ds.players) {
    if (!p.params.k_constant && !ds.series.count(p.params.k_series)) {
      throw InputError("player " + p.name + " needs cost series '" + p.params.k_series +
                       "', which the fuel table does not provide");
    }
  }
  return ds;
}

}  // namespace spotgame

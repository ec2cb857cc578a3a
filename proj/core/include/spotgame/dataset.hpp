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

#include "spotgame/cost_model.hpp"
#include "spotgame/market.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace spotgame {

struct DatasetPaths {
  std::filesystem::path players;   // player,zone,type,n_theta,f_theta,k_source,capacity
  std::filesystem::path demand;    // hour,<zone>...
  std::filesystem::path fuel;      // date|hour,<series>...   (optional)
  std::filesystem::path capacity;  // hour,<player>...        (optional)
  std::filesystem::path network;   // hour,line,<zone>...,r,R (optional)
};

struct PlayerSpec {
  std::string name;
  int zone = 0;
  TypeParams params;
  double installed = 0.0;  // MW
};

struct HourNetwork {
  Eigen::MatrixXd ptdf;  // lines x zones
  Eigen::VectorXd r;     // lower flow margins
  Eigen::VectorXd R;     // upper flow margins
};

struct HourlyDataset {
  std::vector<std::string> zones;
  std::vector<std::int64_t> hours;  // contiguous, hours since epoch
  Eigen::MatrixXd demand;           // hours x zones, MWh
  std::vector<PlayerSpec> players;
  std::map<std::string, Eigen::VectorXd> series;  // per-hour k series, EUR/MWh
  Eigen::MatrixXd available;                      // hours x players, MW
  std::vector<HourNetwork> network;               // empty without a network file
  double delta_max = 0.5;

  int num_hours() const { return static_cast<int>(hours.size()); }
  int num_zones() const { return static_cast<int>(zones.size()); }

  double k_at(int player, int t) const;
  std::vector<Player> players_at(int t) const;
  MarketInstance instance(int t) const;
};

/// Reads and validates the input tables. Daily series (a 'date' column) are
/// repeated over the 24 hours of each day; columns named <x>_usd_per_ton are
/// converted to EUR/MWh and stored as <x>.
HourlyDataset load_dataset(const DatasetPaths& paths, double delta_max = 0.5,
                           const std::vector<TypeParams>& types = default_type_table());

}  // namespace spotgame

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


#include "spotgame/cost_model.hpp"

#include "spotgame/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace spotgame {

void TypeParams::validate() const {
  if (!(n_theta >= 0.0 && n_theta <= 1.0)) {
    throw InputError("type " + type + ": n_theta must lie in [0, 1]");
  }
  if (!(f_theta > 0.0 && f_theta < 1.0)) {
    throw InputError("type " + type + ": f_theta must lie in (0, 1)");
  }
  if (!k_constant && k_series.empty()) {
    throw InputError("type " + type + ": needs a constant k or a k series");
  }
}

std::vector<TypeParams> default_type_table() {
  return {
      {"gas", 0.2, 0.5, std::nullopt, "gas"},
      {"coal", 0.4, 0.5, std::nullopt, "coal"},
      {"nuclear", 0.8, 0.5, 13.8, ""},
      {"wind", 0.05, 0.5, 0.5, ""},
      {"solar", 0.05, 0.5, 0.5, ""},
      // Base-load electricity price as the opportunity cost of stored water.
      {"hydro_storage", 0.2, 0.5, std::nullopt, "hydro_storage"},
      {"hydro_ror", 0.1, 0.5, 8.45, ""},
  };
}

std::string canonical_type(const std::string& raw) {
  static const std::map<std::string, std::string> kMerge = {
      {"wind_onshore", "wind"},           {"wind_offshore", "wind"},
      {"hydro_pumped", "hydro_storage"},  {"hydro_reservoir", "hydro_storage"},
      {"hard_coal", "coal"},              {"lignite", "coal"},
      {"brown_coal", "coal"},
  };
  const auto it = kMerge.find(raw);
  return it == kMerge.end() ? raw : it->second;
}

const TypeParams& find_type(const std::vector<TypeParams>& table, const std::string& type) {
  const std::string key = canonical_type(type);
  for (const TypeParams& t : table) {
    if (t.type == key) return t;
  }
  throw InputError("unknown production type '" + type + "'");
}

Cost cost_from_k(double k, double n_theta, double f_theta, double capacity) {
  if (!(capacity > 0.0)) throw std::invalid_argument("cost_from_k: capacity must be > 0");
  if (!(n_theta >= 0.0 && n_theta <= 1.0) || !(f_theta > 0.0 && f_theta < 1.0)) {
    throw std::invalid_argument("cost_from_k: n_theta in [0,1] and f_theta in (0,1) required");
  }
  Cost out;
  out.b = k * (1.0 - n_theta * f_theta / (1.0 - f_theta));
  out.c = std::max(kMinCostSlope, n_theta * k / ((1.0 - f_theta) * capacity));
  if (out.b < 0.0) {
    throw std::invalid_argument("cost_from_k: negative intercept (k < 0 or n f / (1 - f) > 1)");
  }
  return out;
}

double coal_k_from_usd_per_ton(double usd_per_ton) { return usd_per_ton * 0.89 / (20.0 / 11.0); }

PlayerSelection select_players(const std::vector<TypeCapacity>& zone_capacities, double threshold,
                               int min_players) {
  PlayerSelection out;
  for (const TypeCapacity& tc : zone_capacities) {
    if (!(tc.capacity >= 0.0)) throw InputError("negative capacity for type " + tc.type);
  }
  if (zone_capacities.empty()) return out;

  std::vector<TypeCapacity> sorted = zone_capacities;
  std::stable_sort(sorted.begin(), sorted.end(), [](const TypeCapacity& l, const TypeCapacity& r) {
    return l.capacity > r.capacity;
  });
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0,
                                       [](double s, const TypeCapacity& t) { return s + t.capacity; });
  const int available = static_cast<int>(sorted.size());
  int n = 0;
  double covered = 0.0;
  while (n < available) {
    covered += sorted[static_cast<std::size_t>(n)].capacity;
    ++n;
    const double phi = total > 0.0 ? covered / total : 1.0;
    if (phi >= threshold && n >= min_players) break;
  }
  out.n_star = n;

  // Merge similar types; partners dropped by the threshold are folded into
  // the retained member of their group.
  std::vector<TypeCapacity> merged;
  for (int i = 0; i < n; ++i) {
    const std::string key = canonical_type(sorted[static_cast<std::size_t>(i)].type);
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const TypeCapacity& t) { return t.type == key; });
    if (it == merged.end()) {
      merged.push_back({key, sorted[static_cast<std::size_t>(i)].capacity});
    } else {
      it->capacity += sorted[static_cast<std::size_t>(i)].capacity;
    }
  }
  for (int i = n; i < available; ++i) {
    const std::string key = canonical_type(sorted[static_cast<std::size_t>(i)].type);
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const TypeCapacity& t) { return t.type == key; });
    if (it != merged.end()) it->capacity += sorted[static_cast<std::size_t>(i)].capacity;
  }
  out.retained = std::move(merged);
  const double kept = std::accumulate(out.retained.begin(), out.retained.end(), 0.0,
                                      [](double s, const TypeCapacity& t) { return s + t.capacity; });
  out.phi = total > 0.0 ? kept / total : 1.0;
  return out;
}

std::vector<Player> apply_scales(const std::vector<Player>& players, const Eigen::VectorXd& s_c,
                                 const Eigen::VectorXd& s_b) {
  if ((s_c.array() <= 0.0).any() || (s_b.array() <= 0.0).any() || !s_c.allFinite() ||
      !s_b.allFinite()) {
    throw std::invalid_argument("apply_scales: scales must be finite and > 0");
  }
  std::vector<Player> out = players;
  for (Player& p : out) {
    if (p.zone < 0 || p.zone >= s_c.size() || p.zone >= s_b.size()) {
      throw std::invalid_argument("apply_scales: player zone outside scale vectors");
    }
    p.c *= s_c[p.zone];
    p.b *= s_b[p.zone];
  }
  return out;
}

}  // namespace spotgame

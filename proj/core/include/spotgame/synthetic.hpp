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

#include "spotgame/analytic.hpp"
#include "spotgame/market.hpp"

#include <vector>

namespace spotgame {

/// Six producers used for the profit-landscape and price-growth experiments.
std::vector<Cost> six_player_costs();

/// The six producers split into three zones of two consecutive players, with
/// capacities and a three-line network. `demand` is the total over zones.
MarketInstance three_zone_instance(double demand = 1.0);

/// Four producers in two zones joined by one capacity-limited line.
MarketInstance four_player_two_zone_instance();

}  // namespace spotgame

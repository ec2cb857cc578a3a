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


#include "spotgame/synthetic.hpp"

namespace spotgame {

std::vector<Cost> six_player_costs() {
  return {{2.65, 0.5}, {1.5, 2.0}, {2.0, 1.0}, {1.8, 1.1}, {2.2, 0.6}, {2.1, 1.0}};
}

MarketInstance three_zone_instance(double demand) {
  const std::vector<Cost> costs = six_player_costs();
  MarketInstance inst;
  for (int i = 0; i < 6; ++i) {
    const Cost& c = costs[static_cast<std::size_t>(i)];
    inst.players.push_back({i, i / 2, c.c, c.b, 0.2 * demand});
  }
  inst.zonal_demand = Eigen::Vector3d(0.3, 0.3, 0.4) * demand;
  // Triangle of equal lines, last zone as reference: flow = PTDF * (y - d).
  Eigen::MatrixXd ptdf(3, 3);
  ptdf << 1.0 / 3.0, -1.0 / 3.0, 0.0,
          2.0 / 3.0, 1.0 / 3.0, 0.0,
          1.0 / 3.0, 2.0 / 3.0, 0.0;
  // Tight enough that both line and capacity limits bind along m = k c.
  const Eigen::VectorXd margin = Eigen::VectorXd::Constant(3, 0.02 * demand);
  inst.network = assemble_polytope(ptdf, -margin, margin, inst.zonal_demand, 0.5);
  return inst;
}

MarketInstance four_player_two_zone_instance() {
  // The line binds and the zones price apart. At the grid equilibrium the
  // first and last producers bid their flattest safe slope while the other
  // two stay truthful.
  MarketInstance inst;
  inst.players = {
      {0, 0, 2.71, 0.58, 0.24},
      {1, 0, 1.61, 0.61, 0.43},
      {2, 1, 2.62, 0.58, 0.81},
      {3, 1, 2.66, 0.78, 0.45},
  };
  inst.zonal_demand = Eigen::Vector2d(0.73, 0.94);
  Eigen::MatrixXd ptdf(1, 2);
  ptdf << 1.0, 0.0;  // the line carries the first zone's net export
  inst.network = assemble_polytope(ptdf, Eigen::VectorXd::Constant(1, -0.25),
                                   Eigen::VectorXd::Constant(1, 0.25), inst.zonal_demand, 0.5);
  return inst;
}

}  // namespace spotgame

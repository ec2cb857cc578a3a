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
#include "support/generators.hpp"

#include <gtest/gtest.h>

namespace spotgame {
namespace {

using Eigen::VectorXd;

TEST(CostFromK, NuclearExample) {
  const Cost c = cost_from_k(13.8, 0.8, 0.5, 10.0);
  EXPECT_NEAR(c.b, 2.76, 1e-12);
  EXPECT_NEAR(c.c, 2.208, 1e-12);
}

TEST(CostFromK, FlatCostIsClamped) {
  const Cost c = cost_from_k(40.0, 0.0, 0.5, 100.0);
  EXPECT_EQ(c.b, 40.0);
  EXPECT_EQ(c.c, kMinCostSlope);
}

TEST(CostFromK, AnchorPoints) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double k = testing::uniform(rng, 1.0, 100.0);
    const double n = testing::uniform(rng, 0.01, 1.0);
    const double f = testing::uniform(rng, 0.05, 0.5);
    const double q = testing::uniform(rng, 10.0, 5000.0);
    const Cost c = cost_from_k(k, n, f, q);
    if (c.c == kMinCostSlope) continue;
    EXPECT_NEAR(c.c * f * q + c.b, k, 1e-11 * k);
    EXPECT_NEAR(c.c * q + c.b, (1.0 + n) * k, 1e-11 * k);
    EXPECT_GE(c.b, 0.0);
  }
}

TEST(CostFromK, Errors) {
  EXPECT_THROW(cost_from_k(10.0, 0.5, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(cost_from_k(10.0, 1.5, 0.5, 10.0), std::invalid_argument);
  EXPECT_THROW(cost_from_k(10.0, 0.5, 1.0, 10.0), std::invalid_argument);
  // f = 0.8 with n = 0.5 pushes b below zero.
  EXPECT_THROW(cost_from_k(10.0, 0.5, 0.8, 10.0), std::invalid_argument);
}

TEST(CoalConversion, UsdPerTonToEurPerMwh) {
  EXPECT_NEAR(coal_k_from_usd_per_ton(100.0), 100.0 * 0.89 * 11.0 / 20.0, 1e-12);
}

TEST(TypeTable, DefaultsAreValidAndFindable) {
  const std::vector<TypeParams> table = default_type_table();
  for (const TypeParams& t : table) EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(find_type(table, "nuclear").k_constant.value(), 13.8);
  EXPECT_EQ(find_type(table, "wind_offshore").type, "wind");
  EXPECT_EQ(find_type(table, "lignite").type, "coal");
  EXPECT_THROW(find_type(table, "fusion"), InputError);
}

TEST(CanonicalType, MergeMap) {
  EXPECT_EQ(canonical_type("wind_onshore"), "wind");
  EXPECT_EQ(canonical_type("hydro_pumped"), "hydro_storage");
  EXPECT_EQ(canonical_type("hydro_reservoir"), "hydro_storage");
  EXPECT_EQ(canonical_type("hard_coal"), "coal");
  EXPECT_EQ(canonical_type("brown_coal"), "coal");
  EXPECT_EQ(canonical_type("gas"), "gas");
  EXPECT_EQ(canonical_type("biomass"), "biomass");
}

std::vector<TypeCapacity> caps(const std::vector<double>& mw) {
  std::vector<TypeCapacity> out;
  for (std::size_t i = 0; i < mw.size(); ++i) out.push_back({"t" + std::to_string(i), mw[i]});
  return out;
}

TEST(SelectPlayers, UniformCapacities) {
  const PlayerSelection s = select_players(caps(std::vector<double>(10, 1.0)), 0.88, 5);
  EXPECT_EQ(s.n_star, 9);
  EXPECT_NEAR(s.phi, 0.9, 1e-12);
  EXPECT_EQ(s.retained.size(), 9u);
}

TEST(SelectPlayers, MinimumCountBinds) {
  const PlayerSelection s = select_players(caps({50, 30, 10, 5, 3, 2}), 0.88, 5);
  EXPECT_EQ(s.n_star, 5);
  EXPECT_NEAR(s.phi, 0.98, 1e-12);
}

TEST(SelectPlayers, ZeroThresholdGivesFloor) {
  EXPECT_EQ(select_players(caps({50, 30, 10, 5, 3, 2}), 0.0, 5).n_star, 5);
  EXPECT_EQ(select_players(caps({50, 30}), 0.0, 5).n_star, 2);
}

TEST(SelectPlayers, EmptyZone) {
  const PlayerSelection s = select_players({}, 0.88, 5);
  EXPECT_TRUE(s.retained.empty());
  EXPECT_EQ(s.n_star, 0);
}

TEST(SelectPlayers, MergesAndFoldsDroppedPartners) {
  const std::vector<TypeCapacity> zone = {
      {"gas", 400}, {"wind_onshore", 300}, {"nuclear", 250}, {"lignite", 200},
      {"solar", 100}, {"hard_coal", 50}, {"wind_offshore", 20}, {"oil", 10},
  };
  const PlayerSelection s = select_players(zone, 0.88, 5);
  // Cumulative 400, 700, 950, 1150, 1250 of 1330 -> 0.94 at n = 5.
  EXPECT_EQ(s.n_star, 5);
  ASSERT_EQ(s.retained.size(), 5u);
  auto cap_of = [&](const std::string& t) {
    for (const TypeCapacity& r : s.retained) {
      if (r.type == t) return r.capacity;
    }
    return -1.0;
  };
  EXPECT_EQ(cap_of("wind"), 320.0);
  EXPECT_EQ(cap_of("coal"), 250.0);
  EXPECT_EQ(cap_of("oil"), -1.0);
  EXPECT_NEAR(s.phi, 1320.0 / 1330.0, 1e-12);
}

TEST(SelectPlayers, ThresholdMonotone) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> mw;
    const int n = testing::uniform_int(rng, 1, 12);
    for (int i = 0; i < n; ++i) mw.push_back(testing::uniform(rng, 0.0, 100.0));
    int prev = 0;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
      const int ns = select_players(caps(mw), t, 3).n_star;
      EXPECT_GE(ns, prev);
      prev = ns;
    }
  }
}

TEST(SelectPlayers, RejectsNegativeCapacity) {
  EXPECT_THROW(select_players(caps({1.0, -1.0}), 0.88, 5), InputError);
}

TEST(ApplyScales, IdentityAndLocality) {
  const std::vector<Player> players = {{0, 0, 2.0, 1.0, 5.0}, {1, 1, 3.0, 4.0, 6.0}};
  const std::vector<Player> same = apply_scales(players, VectorXd::Ones(2), VectorXd::Ones(2));
  EXPECT_EQ(same[0].c, 2.0);
  EXPECT_EQ(same[1].b, 4.0);
  const std::vector<Player> scaled =
      apply_scales(players, Eigen::Vector2d(2.0, 1.0), Eigen::Vector2d(1.0, 0.5));
  EXPECT_EQ(scaled[0].c, 4.0);
  EXPECT_EQ(scaled[0].b, 1.0);
  EXPECT_EQ(scaled[1].c, 3.0);
  EXPECT_EQ(scaled[1].b, 2.0);
  EXPECT_EQ(scaled[1].capacity, 6.0);
  EXPECT_THROW(apply_scales(players, Eigen::Vector2d(0.0, 1.0), VectorXd::Ones(2)),
               std::invalid_argument);
}

TEST(ApplyScales, ReclearMatchesManualFolding) {
  testing::Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    MarketInstance inst = testing::random_instance(rng, 6, 3);
    const int z = inst.num_zones();
    VectorXd sc(z), sb(z);
    for (int k = 0; k < z; ++k) {
      sc[k] = testing::uniform(rng, 0.5, 2.0);
      sb[k] = testing::uniform(rng, 0.5, 2.0);
    }
    MarketInstance scaled = inst;
    scaled.players = apply_scales(inst.players, sc, sb);
    StrategyProfile manual;
    for (const Player& p : inst.players) manual.push_back({sc[p.zone] * p.c, sb[p.zone] * p.b});
    const ClearingResult a = clear_market(scaled, truthful_profile(scaled));
    const ClearingResult b = clear_market(inst, manual);
    ASSERT_EQ(a.optimal(), b.optimal());
    if (!a.optimal()) continue;
    for (int k = 0; k < z; ++k) {
      if (std::isnan(a.v[k])) {
        EXPECT_TRUE(std::isnan(b.v[k]));
      } else {
        EXPECT_EQ(a.v[k], b.v[k]);
      }
    }
  }
}

}  // namespace
}  // namespace spotgame

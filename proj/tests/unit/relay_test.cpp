// Copyright 2026 The ehopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ehopt/errors.hpp"
#include "ehopt/oracle.hpp"
#include "ehopt/relay.hpp"
#include "test_util.hpp"

namespace ehopt {
namespace {

using testing::grid_rates;
using testing::pick;

RelayScenario one_block(double es, double er, Traffic traffic = Traffic::kDelayConstrained,
                        Sharing sharing = NoSharing{}) {
  return {EhProfile(1, {es}), EhProfile(1, {er}), 1.0, 1.0, traffic, sharing};
}

TEST(RelayDelayConstrained, BalancedHops) {
  const auto sol = solve_relay_delay_constrained(one_block(2.0, 2.0));
  EXPECT_NEAR(sol.throughput, 1.584962500721156, 1e-12);
}

TEST(RelayDelayConstrained, NoRelayEnergy) {
  const auto sol = solve_relay_delay_constrained(one_block(2.0, 0.0));
  EXPECT_EQ(sol.throughput, 0.0);
}

TEST(RelayDelayConstrained, WeakerHopLimits) {
  const auto sol = solve_relay_delay_constrained(one_block(3.0, 5.0));
  EXPECT_NEAR(sol.throughput, 2.0, 1e-12);
  EXPECT_NEAR(sol.relay_schedule.powers[0], 3.0, 1e-12);
  EXPECT_TRUE(check_relay_feasible(one_block(3.0, 5.0), sol));
}

TEST(RelayDelayConstrained, GainsScaleHops) {
  RelayScenario sc = one_block(1.0, 1.0);
  sc.g_sr = 3.0;
  sc.g_rd = 1.0;
  const auto sol = solve_relay_delay_constrained(sc);
  EXPECT_NEAR(sol.throughput, 1.0, 1e-12);
  EXPECT_NEAR(sol.source_schedule.powers[0], 1.0 / 3.0, 1e-12);
}

TEST(RelayDelayTolerant, BufferingHelps) {
  const RelayScenario c{EhProfile(1, {2.0, 0.0}), EhProfile(1, {0.0, 10.0}), 1.0, 1.0,
                        Traffic::kDelayConstrained, NoSharing{}};
  RelayScenario t = c;
  t.traffic = Traffic::kDelayTolerant;
  const auto a = solve_relay_delay_constrained(c);
  const auto b = solve_relay_delay_tolerant(t);
  EXPECT_NEAR(a.throughput, std::log2(3.0), 1e-12);
  EXPECT_NEAR(b.throughput, 2.0, 1e-9);
  EXPECT_TRUE(check_relay_feasible(t, b));
}

TEST(RelayDelayTolerant, SourceCanStoreEnergy) {
  // Opposite harvest timing: the source may hold its energy until the relay
  // has some, so both traffic models reach log2(3).
  const RelayScenario c{EhProfile(1, {2.0, 0.0}), EhProfile(1, {0.0, 2.0}), 1.0, 1.0,
                        Traffic::kDelayConstrained, NoSharing{}};
  RelayScenario t = c;
  t.traffic = Traffic::kDelayTolerant;
  EXPECT_NEAR(solve_relay_delay_constrained(c).throughput, std::log2(3.0), 1e-12);
  EXPECT_NEAR(solve_relay_delay_tolerant(t).throughput, std::log2(3.0), 1e-9);
  EXPECT_NEAR(relay_grid_oracle(c).throughput, std::log2(3.0), 1e-9);
  EXPECT_NEAR(relay_grid_oracle(t).throughput, std::log2(3.0), 1e-9);
}

TEST(RelayDelayTolerant, NeverWorseThanConstrained) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = pick(rng, 1, 5), n = pick(rng, 1, 3);
    RelayScenario sc{EhProfile(n, grid_rates(rng, m, 200)), EhProfile(n, grid_rates(rng, m, 200)),
                     0.2 + 0.1 * static_cast<double>(pick(rng, 0, 20)),
                     0.2 + 0.1 * static_cast<double>(pick(rng, 0, 20)), Traffic::kDelayConstrained,
                     NoSharing{}};
    const auto a = solve_relay_delay_constrained(sc);
    EXPECT_TRUE(check_relay_feasible(sc, a));
    sc.traffic = Traffic::kDelayTolerant;
    const auto b = solve_relay_delay_tolerant(sc);
    EXPECT_TRUE(check_relay_feasible(sc, b));
    EXPECT_GE(b.throughput, a.throughput - 1e-9);
  }
}

TEST(RelaySharing, SplitsSourceEnergy) {
  const auto sc = one_block(4.0, 0.0, Traffic::kDelayConstrained, OneWaySharing{1.0});
  const auto sol = solve_relay_energy_sharing(sc);
  EXPECT_NEAR(sol.throughput, 1.584962500721156, 1e-6);
  EXPECT_NEAR(sol.transfers[0], 2.0, 1e-5);
  EXPECT_TRUE(check_relay_feasible(sc, sol, 1e-7));
}

TEST(RelaySharing, ForbiddenTransfersMatchConstrained) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = pick(rng, 1, 4);
    const RelayScenario sc{EhProfile(1, grid_rates(rng, m, 200)), EhProfile(1, grid_rates(rng, m, 200)),
                           1.0, 1.5, Traffic::kDelayConstrained, OneWaySharing{0.7}};
    const auto a = solve_relay_energy_sharing(sc, true);
    const auto b = solve_relay_delay_constrained(sc);
    EXPECT_NEAR(a.throughput, b.throughput, 1e-12);
  }
}

TEST(RelaySharing, MonotoneInEfficiency) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = pick(rng, 1, 4);
    const auto es = grid_rates(rng, m, 300), er = grid_rates(rng, m, 100);
    double prev = solve_relay_delay_constrained(
                      {EhProfile(1, es), EhProfile(1, er), 1.0, 1.0, Traffic::kDelayConstrained, NoSharing{}})
                      .throughput;
    for (double alpha : {0.2, 0.5, 0.8, 1.0}) {
      const RelayScenario sc{EhProfile(1, es), EhProfile(1, er), 1.0, 1.0,
                             Traffic::kDelayConstrained, OneWaySharing{alpha}};
      const auto sol = solve_relay_energy_sharing(sc);
      EXPECT_TRUE(check_relay_feasible(sc, sol, 1e-7));
      EXPECT_GE(sol.throughput, prev - 1e-6) << alpha;
      prev = sol.throughput;
    }
  }
}

TEST(RelaySharing, RequiresDelayConstrainedTraffic) {
  const auto sc = one_block(1.0, 1.0, Traffic::kDelayTolerant, OneWaySharing{0.5});
  EXPECT_THROW(solve_relay(sc), ConfigError);
}

TEST(Relay, RejectsMismatchedProfiles) {
  const RelayScenario sc{EhProfile(1, {1.0}), EhProfile(1, {1.0, 1.0}), 1.0, 1.0,
                         Traffic::kDelayConstrained, NoSharing{}};
  EXPECT_THROW(solve_relay(sc), ShapeError);
}

TEST(Relay, MatchesSearchOracle) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    const auto m = pick(rng, 1, 3);
    RelayScenario sc{EhProfile(1, grid_rates(rng, m, 200)), EhProfile(1, grid_rates(rng, m, 200)),
                     0.5 + 0.25 * static_cast<double>(pick(rng, 0, 6)), 1.0,
                     trial % 3 == 1 ? Traffic::kDelayTolerant : Traffic::kDelayConstrained,
                     trial % 3 == 2 ? Sharing{OneWaySharing{0.6}} : Sharing{NoSharing{}}};
    const auto sol = solve_relay(sc);
    const auto orc = relay_grid_oracle(sc);
    EXPECT_NEAR(sol.throughput, orc.throughput, 1e-3) << trial;
  }
}

}  // namespace
}  // namespace ehopt

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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ehopt/errors.hpp"
#include "ehopt/offline.hpp"
#include "ehopt/oracle.hpp"
#include "ehopt/staircase.hpp"
#include "test_util.hpp"

namespace ehopt {
namespace {

using testing::grid_rates;
using testing::pick;
using testing::random_gains;

TEST(Waterfill, TwoBlocks) {
  const std::vector<double> g = {1.0, 4.0};
  const auto w = waterfill(1.0, g);
  EXPECT_NEAR(w.powers[0], 0.125, 1e-14);
  EXPECT_NEAR(w.powers[1], 0.875, 1e-14);
  EXPECT_NEAR(w.level, 1.125, 1e-14);
}

TEST(Waterfill, ShutsOffWeakBlock) {
  const std::vector<double> g = {0.1, 4.0};
  const auto p = waterfill_budget(1.0, g);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
}

TEST(Waterfill, ZeroGainGetsNothing) {
  const std::vector<double> g = {0.0, 2.0, 0.0};
  const auto p = waterfill_budget(3.0, g);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_NEAR(p[1], 3.0, 1e-14);
}

TEST(Waterfill, SpendsBudgetExactly) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = pick(rng, 1, 12);
    std::vector<double> g(n);
    for (auto& x : g) x = std::uniform_real_distribution<double>(0.01, 5.0)(rng);
    const double budget = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
    const auto w = waterfill(budget, g);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += w.powers[i];
      if (budget > 0.0) {
        EXPECT_NEAR(w.powers[i], std::max(0.0, w.level - 1.0 / g[i]), 1e-12);
      }
    }
    EXPECT_NEAR(total, budget, 1e-12 * (1.0 + budget));
  }
}

TEST(Staircase, LevelsNonDecreasing) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = pick(rng, 1, 16);
    std::vector<double> g(n), caps(n);
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = std::uniform_real_distribution<double>(0.05, 4.0)(rng);
      h += std::uniform_real_distribution<double>(0.0, 2.0)(rng);
      caps[i] = h;
    }
    const auto s = staircase_waterfill(g, caps);
    double prev = 0.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cum += s.powers[i];
      EXPECT_LE(cum, caps[i] + 1e-9);
      if (std::isfinite(s.levels[i])) {
        EXPECT_GE(s.levels[i], prev - 1e-9);
        prev = s.levels[i];
        EXPECT_NEAR(s.powers[i], std::max(0.0, s.levels[i] - 1.0 / g[i]), 1e-9);
      }
    }
    EXPECT_NEAR(cum, caps.back(), 1e-9 * (1.0 + caps.back()));
    // Each epoch ends where the harvest constraint is tight.
    double c = 0.0;
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i) {
      c += s.powers[i];
      if (e < s.epoch_ends.size() && s.epoch_ends[e] == i) {
        EXPECT_NEAR(c, caps[i], 1e-9 * (1.0 + caps[i]));
        ++e;
      }
    }
  }
}

TEST(Staircase, FlatChannelBecomesPiecewiseConstant) {
  // Harvest arrives unevenly: the taut string through the cumulative harvest.
  const std::vector<double> caps = {0.0, 4.0, 4.0, 5.0, 9.0};
  std::vector<std::size_t> ends;
  const auto x = equalize_cumulative(caps, &ends);
  const std::vector<double> want = {0.0, 5.0 / 3.0, 5.0 / 3.0, 5.0 / 3.0, 4.0};
  ASSERT_EQ(x.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(x[i], want[i], 1e-14) << i;
  EXPECT_EQ(ends, (std::vector<std::size_t>{0, 3, 4}));
  EXPECT_LT(equalization_residual(x, caps), 1e-12);
}

TEST(ThroughputCase1, EqualSplit) {
  const EhProfile p(2, {2.0});
  const auto sol = solve_throughput_case1(p, ChannelTrace::constant(p, 1.0));
  EXPECT_NEAR(sol.schedule.powers[0], 2.0, 1e-12);
  EXPECT_NEAR(sol.schedule.powers[1], 2.0, 1e-12);
  EXPECT_NEAR(sol.utility, 3.1699250014423124, 1e-12);
}

TEST(ThroughputCase1, CausalityBinds) {
  const EhProfile p(1, {1.0, 3.0});
  const auto sol = solve_throughput_case1(p, ChannelTrace::constant(p, 1.0));
  EXPECT_NEAR(sol.schedule.powers[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.schedule.powers[1], 3.0, 1e-12);
  EXPECT_NEAR(sol.utility, 3.0, 1e-12);
}

TEST(ThroughputCase1, ZeroEnergy) {
  const EhProfile p(3, {0.0, 0.0});
  const auto sol = solve_throughput_case1(p, ChannelTrace::constant(p, 1.0));
  EXPECT_EQ(sol.utility, 0.0);
  EXPECT_EQ(sol.schedule.total(), 0.0);
}

TEST(ThroughputCase1, ShapeMismatch) {
  const EhProfile p(2, {1.0});
  EXPECT_THROW(solve_throughput_case1(p, ChannelTrace(BlockGrid(1, 3, 1.0))), ShapeError);
}

TEST(ThroughputCase1, FeasibleWithSmallKkt) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = pick(rng, 1, 6), n = pick(rng, 1, 6);
    const EhProfile p(n, grid_rates(rng, m, 300));
    const ChannelTrace h(random_gains(rng, m, n, 0.01, 5.0));
    const auto sol = solve_throughput_case1(p, h);
    EXPECT_TRUE(check_feasible(sol.schedule, p));
    EXPECT_LT(sol.kkt_residual, 1e-6);
    EXPECT_NEAR(sol.utility, evaluate_utility(sol.schedule, h, Throughput{}), 1e-9);
  }
}

TEST(ThroughputCase1, MatchesGridOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const auto m = pick(rng, 1, 2), n = pick(rng, 1, 2);
    const EhProfile p(n, grid_rates(rng, m, 100));
    const ChannelTrace h(random_gains(rng, m, n, 0.1, 3.0));
    const auto sol = solve_throughput_case1(p, h);
    const auto orc = brute_force_offline(p, h, Throughput{}, {.step = 0.01});
    EXPECT_GE(sol.utility, orc.utility - 1e-9);
    EXPECT_LE(sol.utility - orc.utility, 0.05);
  }
}

TEST(ThroughputCase1, MonotoneInHarvest) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = pick(rng, 1, 5), n = pick(rng, 1, 4);
    auto rates = grid_rates(rng, m, 200);
    const ChannelTrace h(random_gains(rng, m, n, 0.1, 3.0));
    const double base = solve_throughput_case1(EhProfile(n, rates), h).utility;
    rates[pick(rng, 0, m - 1)] += 0.5;
    EXPECT_GE(solve_throughput_case1(EhProfile(n, rates), h).utility, base - 1e-12);
  }
}

TEST(ErgodicCase4, ConstantHarvest) {
  const EhProfile p(3, {1.0, 1.0});
  const auto sol = solve_ergodic_case4(p, Rayleigh{1.0});
  for (double x : sol.eh_block_powers) EXPECT_NEAR(x, 1.0, 1e-12);
  EXPECT_NEAR(sol.utility, 6.0 * 0.86034738227088595, 1e-9);
}

TEST(ErgodicCase4, SavingForLaterDoesNotHelp) {
  // Energy arriving late cannot be moved earlier; early energy is spread forward.
  const EhProfile p(1, {2.0, 0.0});
  const auto sol = solve_ergodic_case4(p, Rayleigh{1.0});
  EXPECT_NEAR(sol.eh_block_powers[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.eh_block_powers[1], 1.0, 1e-12);
  EXPECT_NEAR(sol.utility, 2.0 * 0.86034738227088595, 1e-9);
  EXPECT_LT(sol.kkt_residual, 1e-9);
}

TEST(ErgodicCase4, MatchesGridOracle) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = pick(rng, 1, 3);
    const EhProfile p(1, grid_rates(rng, m, 100));
    const ErgodicThroughput spec{Rayleigh{1.0}};
    const auto sol = solve_ergodic_case4(p, Rayleigh{1.0});
    const auto orc = brute_force_offline(p, spec, {.step = 0.01});
    EXPECT_GE(sol.utility, orc.utility - 1e-9);
    EXPECT_LE(sol.utility - orc.utility, 0.02);
  }
}

TEST(OutageCase4, SaveThenTransmit) {
  const EhProfile p(2, {0.3});
  const OutageFn q(Rayleigh{1.0}, 1.0);
  const auto sol = solve_outage_case4_noncausal(p, q);
  EXPECT_NEAR(sol.schedule.powers[0], 0.0, 1e-9);
  EXPECT_NEAR(sol.schedule.powers[1], 0.6, 1e-9);
  EXPECT_NEAR(sol.expected_outages, 1.811124397162438, 1e-9);
  EXPECT_LT(sol.expected_outages, 1.928652013305495);
  EXPECT_EQ(sol.saving_blocks, 1u);
}

TEST(OutageCase4, EqualSplitAboveCriticalPoint) {
  const EhProfile p(2, {2.0});
  const OutageFn q(Rayleigh{1.0}, 1.0);
  const auto sol = solve_outage_case4_noncausal(p, q);
  EXPECT_NEAR(sol.schedule.powers[0], 2.0, 1e-9);
  EXPECT_NEAR(sol.schedule.powers[1], 2.0, 1e-9);
  EXPECT_NEAR(sol.expected_outages, 2.0 * (1.0 - std::exp(-0.5)), 1e-9);
}

TEST(OutageCase4, PositivePowersAboveCriticalPoint) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = pick(rng, 1, 4), n = pick(rng, 1, 3);
    const EhProfile p(n, grid_rates(rng, m, 150));
    const OutageFn q(Rayleigh{1.0}, 1.0 + static_cast<double>(trial % 2));
    const auto sol = solve_outage_case4_noncausal(p, q);
    EXPECT_TRUE(check_feasible(sol.schedule, p));
    std::size_t below = 0;
    for (double x : sol.schedule.powers.flat()) below += x > 1e-9 && x < q.critical_point() - 1e-6;
    EXPECT_LE(below, 1u);
    const auto f = sol.schedule.powers.flat();
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
  }
}

TEST(OutageCase4, MatchesGridOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const auto m = pick(rng, 1, 2), n = pick(rng, 1, 2);
    const EhProfile p(n, grid_rates(rng, m, 100));
    const OutageFn q(Nakagami{2.0, 1.0}, 1.0);
    const auto sol = solve_outage_case4_noncausal(p, q);
    const auto orc = brute_force_offline(p, NonOutage{1.0, Nakagami{2.0, 1.0}}, {.step = 0.01});
    EXPECT_GE(sol.utility, orc.utility - 1e-9);
    EXPECT_LE(sol.utility - orc.utility, 0.02);
  }
}

TEST(OutageCase1, ServesEveryoneWhenAffordable) {
  const EhProfile p(1, {1.0, 1.0, 1.0});
  const auto sol = solve_outage_case1(p, ChannelTrace::constant(p, 1.0), 1.0);
  EXPECT_EQ(sol.outages, 0u);
  EXPECT_EQ(sol.served, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(OutageCase1, DropsCostlyEarlyBlock) {
  const EhProfile p(1, {1.0, 1.0, 1.0});
  const ChannelTrace h(testing::rows({{0.5}, {1.0}, {2.0}}));
  const auto sol = solve_outage_case1(p, h, 1.0);
  EXPECT_EQ(sol.outages, 1u);
  EXPECT_EQ(sol.served, (std::vector<std::size_t>{1, 2}));
  EXPECT_NEAR(sol.schedule.powers[1], 1.0, 1e-12);
  EXPECT_NEAR(sol.schedule.powers[2], 0.5, 1e-12);
}

TEST(OutageCase1, DeepFadeIsNeverServed) {
  const EhProfile p(2, {1.0});
  const ChannelTrace h(testing::rows({{0.0, 1.0}}));
  const auto sol = solve_outage_case1(p, h, 1.0);
  EXPECT_EQ(sol.outages, 1u);
  EXPECT_EQ(sol.served, std::vector<std::size_t>{1});
}

TEST(OutageCase1, AgreesWithSubsetEnumeration) {
  std::mt19937_64 rng(101);
  std::size_t agree = 0;
  constexpr int kTrials = 100;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto m = pick(rng, 1, 4), n = pick(rng, 1, 3);
    const EhProfile p(n, grid_rates(rng, m, 150));
    const ChannelTrace h(random_gains(rng, m, n, 0.05, 3.0));
    const auto sol = solve_outage_case1(p, h, 1.0);
    const auto orc = brute_force_serve_sets(p, h, 1.0);
    EXPECT_TRUE(check_feasible(sol.schedule, p));
    EXPECT_GE(sol.outages, orc.outages);
    agree += sol.outages == orc.outages;
  }
  EXPECT_GE(agree, kTrials * 8 / 10);
}

}  // namespace
}  // namespace ehopt

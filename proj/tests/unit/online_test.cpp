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
#include "ehopt/offline.hpp"
#include "ehopt/online.hpp"
#include "ehopt/oracle.hpp"
#include "test_util.hpp"

namespace ehopt {
namespace {

using testing::grid_rates;
using testing::pick;

DiscreteDistribution one_gain(double g) { return {{g}, {1.0}}; }

TEST(DpCase2, SingleBlockSpendsEverything) {
  StochasticModel m{1, 1, IidEh{{{1.0, 3.0}, {0.5, 0.5}}}, DiscreteDistribution{{0.5, 2.0}, {0.25, 0.75}}};
  const auto pol = solve_dp_case2(m, Throughput{}, {.grid_step = 0.5});
  double want = 0.0;
  for (double e : {1.0, 3.0}) {
    want += 0.5 * (0.25 * std::log2(1.0 + 0.5 * e) + 0.75 * std::log2(1.0 + 2.0 * e));
  }
  EXPECT_NEAR(pol.expected_value, want, 1e-14);
}

TEST(DpCase2, DegenerateMatchesOffline) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mm = pick(rng, 1, 3), n = pick(rng, 1, 3);
    const auto rates = grid_rates(rng, mm, 20);
    const double g = 0.5 + 0.25 * static_cast<double>(pick(rng, 0, 6));
    const EhProfile p(n, rates);
    const auto pol = solve_dp_case3(p, one_gain(g), Throughput{}, {.grid_step = 0.01});
    const auto off = solve_throughput_case1(p, ChannelTrace::constant(p, g));
    EXPECT_LE(pol.expected_value, off.utility + 1e-12);
    EXPECT_GE(pol.expected_value, off.utility - 0.01 * static_cast<double>(mm * n));
  }
}

TEST(DpCase3, EqualsPolicyEnumeration) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mm = pick(rng, 1, 2), n = pick(rng, 1, 2);
    const EhProfile p(n, grid_rates(rng, mm, 100));
    const DiscreteDistribution gains{{0.3, 1.7}, {0.4, 0.6}};
    const auto pol = solve_dp_case3(p, gains, Throughput{}, {.grid_points = 3});
    const PolicyProblem prob{make_eh_chain(p), n, gains, Throughput{}, pol.grid};
    EXPECT_NEAR(pol.expected_value, brute_force_policies(prob), 1e-12);
  }
}

TEST(DpCase2, MarkovEqualsPolicyEnumeration) {
  const MarkovEh eh{{0.0, 1.0}, {0.5, 0.5}, {{0.8, 0.2}, {0.3, 0.7}}};
  const DiscreteDistribution gains{{0.5, 2.0}, {0.5, 0.5}};
  for (const UtilitySpec& spec : {UtilitySpec{Throughput{}}, UtilitySpec{NonOutage{1.0, std::nullopt}}}) {
    const StochasticModel model{2, 1, eh, gains};
    const auto pol = solve_dp_case2(model, spec, {.grid_points = 3});
    const PolicyProblem prob{make_eh_chain(eh, 2), 1, gains, spec, pol.grid};
    EXPECT_NEAR(pol.expected_value, brute_force_policies(prob), 1e-12);
  }
}

TEST(DpCase2, BellmanResidualIsZero) {
  const StochasticModel model{2, 2, IidEh{{{0.5, 1.5}, {0.5, 0.5}}},
                              DiscreteDistribution{{0.25, 2.0}, {0.5, 0.5}}};
  const auto pol = solve_dp_case2(model, Throughput{}, {.grid_step = 0.05});
  for (std::size_t t = 0; t < pol.stages(); ++t) {
    for (std::size_t b = 0; b < pol.grid.levels; b += 7) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
          EXPECT_DOUBLE_EQ(pol.value(t, b, k, i), bellman_backup(pol, t, b, k, i));
        }
      }
    }
  }
}

TEST(DpCase2, FinerNestedGridNeverWorse) {
  const StochasticModel model{2, 2, IidEh{{{0.5, 1.5}, {0.5, 0.5}}},
                              DiscreteDistribution{{0.25, 2.0}, {0.5, 0.5}}};
  double prev = -1.0;
  for (double step : {0.5, 0.25, 0.05, 0.01}) {
    const double v = solve_dp_case2(model, Throughput{}, {.grid_step = step}).expected_value;
    EXPECT_GE(v, prev - 1e-12) << step;
    prev = v;
  }
}

TEST(DpCase2, MoreKnowledgeHelps) {
  // Knowing the harvest in advance is never worse on average.
  const IidEh eh{{{0.5, 1.5}, {0.5, 0.5}}};
  const DiscreteDistribution gains{{0.25, 2.0}, {0.5, 0.5}};
  const StochasticModel model{2, 2, eh, gains};
  const double causal = solve_dp_case2(model, Throughput{}, {.grid_step = 0.05}).expected_value;
  double informed = 0.0;
  for (double a : {0.5, 1.5}) {
    for (double b : {0.5, 1.5}) {
      informed += 0.25 * solve_dp_case3(EhProfile(2, {a, b}), gains, Throughput{}, {.grid_step = 0.05})
                             .expected_value;
    }
  }
  EXPECT_GE(informed, causal - 1e-12);
}

TEST(DpCase2, RolloutIsFeasible) {
  const StochasticModel model{3, 2, IidEh{{{0.0, 1.0, 2.0}, {0.3, 0.3, 0.4}}},
                              DiscreteDistribution{{0.1, 1.0, 3.0}, {0.2, 0.5, 0.3}}};
  const auto pol = solve_dp_case2(model, Throughput{}, {.grid_step = 0.1});
  const auto gen = make_generator(model, 8);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto s = generate_trace(gen, t);
    EXPECT_TRUE(check_feasible(rollout(pol, s), s.profile));
  }
}

TEST(DpCase2, RejectsContinuousChannel) {
  const StochasticModel model{1, 1, IidEh{{{1.0}, {1.0}}}, FadingModel{Rayleigh{1.0}}};
  EXPECT_THROW(solve_dp_case2(model, Throughput{}), ConfigError);
}

TEST(DpCase4, CausalMatchesNonCausalForKnownHarvest) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mm = pick(rng, 1, 3), n = pick(rng, 1, 2);
    const EhProfile p(n, grid_rates(rng, mm, 100));
    const OutageFn q(Rayleigh{1.0}, 1.0);
    const auto dp = solve_dp_outage_case4_causal(p, q, {.grid_step = 0.01});
    const auto nc = solve_outage_case4_noncausal(p, q);
    EXPECT_LE(dp.expected_value, nc.utility + 1e-9);
    EXPECT_GE(dp.expected_value, nc.utility - 0.01 * static_cast<double>(mm * n));
  }
}

TEST(DpCase4, UnknownHarvestCostsSomething) {
  const IidEh eh{{{0.1, 2.0}, {0.5, 0.5}}};
  const OutageFn q(Rayleigh{1.0}, 1.0);
  const auto causal = solve_dp_outage_case4_causal(EhProcess{eh}, 2, 2, q, {.grid_step = 0.05});
  double informed = 0.0;
  for (double a : {0.1, 2.0}) {
    for (double b : {0.1, 2.0}) {
      informed += 0.25 * solve_dp_outage_case4_causal(EhProfile(2, {a, b}), q, {.grid_step = 0.05})
                             .expected_value;
    }
  }
  EXPECT_LE(causal.expected_value, informed + 1e-12);
}

TEST(DpCase4, SortedActionsLoseNothing) {
  const OutageFn q(Rayleigh{1.0}, 1.0);
  const EhProfile p(3, {0.4, 1.1});
  const auto sorted = solve_dp_outage_case4_causal(p, q, {.grid_step = 0.05});
  const auto free = solve_dp_outage_case4_causal(p, q, {.grid_step = 0.05, .unrestricted_actions = true});
  EXPECT_NEAR(sorted.expected_value, free.expected_value, 1e-12);
}

TEST(Myopic, SpendsHarvest) {
  const EhProfile p(2, {1.0, 0.5});
  const auto s = myopic_schedule(p);
  EXPECT_EQ(s.powers.flat()[0], 1.0);
  EXPECT_EQ(s.powers.flat()[3], 0.5);
}

}  // namespace
}  // namespace ehopt

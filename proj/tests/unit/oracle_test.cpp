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

#include <gtest/gtest.h>

#include "ehopt/errors.hpp"
#include "ehopt/oracle.hpp"
#include "test_util.hpp"

namespace ehopt {
namespace {

TEST(GridOracle, FindsEqualSplit) {
  const EhProfile p(2, {2.0});
  const auto r = brute_force_offline(p, ChannelTrace::constant(p, 1.0), Throughput{}, {.step = 0.5});
  EXPECT_NEAR(r.utility, 3.1699250014423124, 1e-12);
  EXPECT_EQ(r.schedule.powers[0], 2.0);
  EXPECT_EQ(r.schedule.powers[1], 2.0);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(GridOracle, RespectsCausality) {
  const EhProfile p(1, {1.0, 3.0});
  const auto r = brute_force_offline(p, ChannelTrace::constant(p, 1.0), Throughput{}, {.step = 0.25});
  EXPECT_NEAR(r.utility, 3.0, 1e-12);
  EXPECT_TRUE(check_feasible(r.schedule, p));
}

TEST(GridOracle, OutageWithoutTrace) {
  const EhProfile p(2, {0.3});
  const auto r = brute_force_offline(p, NonOutage{1.0, Rayleigh{1.0}}, {.step = 0.1});
  EXPECT_NEAR(2.0 - r.utility, 1.811124397162438, 1e-12);
}

TEST(GridOracle, EvaluationGuard) {
  const EhProfile p(4, {10.0, 10.0});
  EXPECT_THROW(brute_force_offline(p, ChannelTrace::constant(p, 1.0), Throughput{},
                                   {.step = 1e-3, .max_evaluations = 1000}),
               SizeGuardError);
}

TEST(GridOracle, RejectsBadStep) {
  const EhProfile p(1, {1.0});
  EXPECT_THROW(brute_force_offline(p, ChannelTrace::constant(p, 1.0), Throughput{}, {.step = 0.0}),
               ConfigError);
}

TEST(GridOracle, NeedsTraceForThroughput) {
  EXPECT_THROW(brute_force_offline(EhProfile(1, {1.0}), Throughput{}, {}), ConfigError);
}

TEST(ServeSets, PicksCheapBlocks) {
  const EhProfile p(1, {1.0, 1.0, 1.0});
  const ChannelTrace h(testing::rows({{0.5}, {1.0}, {2.0}}));
  const auto r = brute_force_serve_sets(p, h, 1.0);
  EXPECT_EQ(r.outages, 1u);
  EXPECT_EQ(r.served, (std::vector<std::size_t>{1, 2}));
}

TEST(ServeSets, Guard) {
  const EhProfile p(23, {1.0});
  EXPECT_THROW(brute_force_serve_sets(p, ChannelTrace::constant(p, 1.0), 1.0), SizeGuardError);
}

TEST(PolicyEnumeration, SingleBlock) {
  const EhProfile p(1, {1.0});
  const PolicyProblem prob{make_eh_chain(p), 1, {{1.0, 3.0}, {0.5, 0.5}}, Throughput{},
                           Discretization::with_step(0.5, 1.0)};
  EXPECT_NEAR(brute_force_policies(prob), 0.5 * (1.0 + 2.0), 1e-15);
}

TEST(PolicyEnumeration, TwoBlocksByHand) {
  // Energy 1 arrives once; gains 1 or 3. Optimal: spend all on a strong
  // first block, otherwise split to hedge.
  const EhProfile p(1, {1.0, 0.0});
  const PolicyProblem prob{make_eh_chain(p), 1, {{1.0, 3.0}, {0.5, 0.5}}, Throughput{},
                           Discretization::with_step(0.5, 1.0)};
  const double l = std::log2(1.5), h = std::log2(2.5);
  // Strong first block: all now gives 2; half gives h + E[rate(0.5)] = h + 0.5 (l + h).
  const double strong = std::max(2.0, h + 0.5 * (l + h));
  // Weak first block: all now gives 1; half gives l + 0.5 (l + h); none gives 0.5 (1 + 2).
  const double weak = std::max({1.0, l + 0.5 * (l + h), 1.5});
  EXPECT_NEAR(brute_force_policies(prob), 0.5 * (strong + weak), 1e-15);
}

TEST(PolicyEnumeration, Guard) {
  const EhProfile p(3, {1.0, 1.0});
  const PolicyProblem prob{make_eh_chain(p), 3, {{1.0, 3.0}, {0.5, 0.5}}, Throughput{},
                           Discretization::with_step(0.1, 6.0)};
  EXPECT_THROW(brute_force_policies(prob, 1000), SizeGuardError);
}

TEST(RelayOracle, Guard) {
  const RelayScenario sc{EhProfile(9, {1.0}), EhProfile(9, {1.0}), 1.0, 1.0,
                         Traffic::kDelayConstrained, NoSharing{}};
  EXPECT_THROW(relay_grid_oracle(sc), SizeGuardError);
}

TEST(RelayOracle, OneBlock) {
  const RelayScenario sc{EhProfile(1, {2.0}), EhProfile(1, {2.0}), 1.0, 1.0,
                         Traffic::kDelayConstrained, NoSharing{}};
  EXPECT_NEAR(relay_grid_oracle(sc).throughput, std::log2(3.0), 1e-9);
}

}  // namespace
}  // namespace ehopt

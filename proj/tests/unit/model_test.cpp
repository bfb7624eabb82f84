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
#include "ehopt/model.hpp"
#include "test_util.hpp"

namespace ehopt {
namespace {

TEST(HarvestedBy, SingleBlock) {
  const EhProfile p(3, {2.0});
  EXPECT_DOUBLE_EQ(harvested_by(p, 0, 1), 4.0);
}

TEST(HarvestedBy, SecondEhBlock) {
  const EhProfile p(2, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(harvested_by(p, 1, 0), 5.0);
}

TEST(HarvestedBy, ZeroEnergy) {
  const EhProfile p(3, {0.0, 0.0});
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(harvested_by(p, m, n), 0.0);
  }
}

TEST(HarvestedBy, OutOfRange) {
  const EhProfile p(2, {1.0, 3.0});
  EXPECT_THROW(harvested_by(p, 2, 0), std::out_of_range);
  EXPECT_THROW(harvested_by(p, 0, 2), std::out_of_range);
}

TEST(HarvestedBy, NonDecreasing) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> rates(4);
    for (auto& e : rates) e = d(rng);
    const EhProfile p(3, rates);
    const auto h = p.cumulative_harvest();
    for (std::size_t t = 1; t < h.size(); ++t) EXPECT_GE(h[t], h[t - 1]);
    EXPECT_NEAR(h.back(), p.total_energy(), 1e-12);
  }
}

TEST(EhProfile, RejectsBadInput) {
  EXPECT_THROW(EhProfile(0, {1.0}), ConfigError);
  EXPECT_THROW(EhProfile(1, {}), ConfigError);
  EXPECT_THROW(EhProfile(1, {-1.0}), ConfigError);
}

TEST(CheckFeasible, SpendAsHarvested) {
  const EhProfile p(1, {1.0, 3.0});
  EXPECT_TRUE(check_feasible(PowerSchedule(testing::rows({{1.0}, {3.0}})), p));
}

TEST(CheckFeasible, EarlyOverdraw) {
  const EhProfile p(1, {1.0, 3.0});
  const PowerSchedule s(testing::rows({{2.0}, {2.0}}));
  EXPECT_FALSE(check_feasible(s, p));
  EXPECT_DOUBLE_EQ(max_violation(s, p), 1.0);
}

TEST(CheckFeasible, SavedEnergy) {
  EXPECT_TRUE(check_feasible(PowerSchedule(testing::rows({{2.0}, {2.0}})), EhProfile(1, {3.0, 1.0})));
}

TEST(CheckFeasible, Tolerance) {
  const EhProfile p(1, {1.0});
  const PowerSchedule s(testing::rows({{1.0 + 1e-10}}));
  EXPECT_TRUE(check_feasible(s, p));
  EXPECT_FALSE(check_feasible(s, p, 0.0));
}

TEST(CheckFeasible, ShapeMismatch) {
  EXPECT_THROW(check_feasible(PowerSchedule(testing::rows({{1.0, 1.0}})), EhProfile(1, {1.0})), ShapeError);
}

TEST(CheckFeasible, DownwardClosed) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const EhProfile p(2, {1.0, 0.5, 2.0});
  for (int trial = 0; trial < 100; ++trial) {
    BlockGrid g(3, 2);
    for (auto& v : g.flat()) v = 2.0 * u(rng);
    const PowerSchedule s(g);
    if (!check_feasible(s, p)) continue;
    BlockGrid smaller = g;
    for (auto& v : smaller.flat()) v *= u(rng);
    EXPECT_TRUE(check_feasible(PowerSchedule(smaller), p));
  }
}

TEST(EvaluateUtility, Throughput) {
  const PowerSchedule s(testing::rows({{1.0}, {3.0}}));
  const ChannelTrace h(testing::rows({{1.0}, {1.0}}));
  EXPECT_DOUBLE_EQ(evaluate_utility(s, h, Throughput{}), 3.0);
}

TEST(EvaluateUtility, ZeroPower) {
  const EhProfile p(2, {1.0, 2.0});
  EXPECT_EQ(evaluate_utility(PowerSchedule::zeros(p), ChannelTrace::constant(p, 2.0), Throughput{}), 0.0);
}

TEST(EvaluateUtility, NonOutageWithoutCsit) {
  const PowerSchedule s(testing::rows({{1.0}}));
  const double u = evaluate_utility(s, NonOutage{1.0, Rayleigh{1.0}});
  EXPECT_NEAR(u, 0.36787944117144233, 1e-12);
}

TEST(EvaluateUtility, MissingTrace) {
  const PowerSchedule s(testing::rows({{1.0}}));
  EXPECT_THROW(evaluate_utility(s, Throughput{}), ConfigError);
  EXPECT_THROW(evaluate_utility(s, NonOutage{1.0, std::nullopt}), ConfigError);
}

TEST(EvaluateUtility, ThroughputConcaveInEachBlock) {
  const ChannelTrace h(testing::rows({{0.7, 2.5}}));
  for (double p = 0.01; p < 20.0; p *= 1.3) {
    for (std::size_t b = 0; b < 2; ++b) {
      const double d = 1e-3;
      auto at = [&](double x) {
        BlockGrid g({{0.5, 0.5}});
        g[b] = x;
        return evaluate_utility(PowerSchedule(g), h, Throughput{});
      };
      EXPECT_LE(at(p + d) - 2.0 * at(p) + at(p - d), 1e-8);
      EXPECT_GE(at(p + d), at(p));
    }
  }
}

TEST(UtilitySpec, Validation) {
  EXPECT_THROW(validate(UtilitySpec{NonOutage{0.0, std::nullopt}}), ConfigError);
  EXPECT_THROW(validate(UtilitySpec{NonOutage{1.0, Rayleigh{-1.0}}}), ConfigError);
  EXPECT_NO_THROW(validate(UtilitySpec{ErgodicThroughput{Rayleigh{1.0}}}));
}

TEST(KnowledgeCase, Numbers) {
  EXPECT_EQ(KnowledgeCase(Csit::kNonCausal, Esit::kNonCausal).number(), 1);
  EXPECT_EQ(KnowledgeCase(Csit::kCausal, Esit::kCausal).number(), 2);
  EXPECT_EQ(KnowledgeCase(Csit::kCausal, Esit::kNonCausal).number(), 3);
  EXPECT_EQ(KnowledgeCase(Csit::kNone, Esit::kCausal).number(), 4);
  EXPECT_EQ(KnowledgeCase(Csit::kNone, Esit::kNonCausal).number(), 4);
  EXPECT_THROW(KnowledgeCase(Csit::kNonCausal, Esit::kCausal), ConfigError);
}

}  // namespace
}  // namespace ehopt

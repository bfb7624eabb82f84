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

#ifndef EHOPT_EXPERIMENT_HPP
#define EHOPT_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehopt/model.hpp"
#include "ehopt/online.hpp"
#include "ehopt/stochastic.hpp"

namespace ehopt {

enum class PolicyKind {
  kOfflineCase1,  // re-solved on every realized trace with full knowledge
  kDpCase3,       // DP knowing the realized harvest sequence in advance
  kDpCase2,       // DP with causal knowledge of both
  kMyopic,        // spend each block's harvest at once
};

std::string_view policy_name(PolicyKind kind);
/// Accepts "offline-case1", "dp-case3", "dp-case2", "myopic".
std::optional<PolicyKind> parse_policy(std::string_view name);

struct ExperimentScenario {
  StochasticModel model;
  UtilitySpec utility;
  DpOptions dp;
};

struct ExperimentReport {
  std::size_t scenario = 0;
  std::string policy;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string digest;
  std::vector<double> per_trial;
};

/// Stable 64-bit hash of the scenario, as 16 hex digits.
std::string scenario_digest(const ExperimentScenario& scenario);

/// Every policy sees the same trace in a given trial. Supported utilities:
/// Throughput and CSIT NonOutage (offline-case1 then uses the ordering
/// heuristic). DP policies need a discrete channel.
std::vector<ExperimentReport> run_experiment(std::span<const ExperimentScenario> scenarios,
                                             std::span<const PolicyKind> policies,
                                             std::size_t trials, std::uint64_t seed);

/// Mean and standard error of the per-trial difference a - b.
std::pair<double, double> paired_gap(const ExperimentReport& a, const ExperimentReport& b);

}  // namespace ehopt

#endif  // EHOPT_EXPERIMENT_HPP

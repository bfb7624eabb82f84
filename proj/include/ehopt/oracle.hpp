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

#ifndef EHOPT_ORACLE_HPP
#define EHOPT_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ehopt/model.hpp"
#include "ehopt/relay_model.hpp"
#include "ehopt/stochastic.hpp"

namespace ehopt {

// Exhaustive reference solvers. They depend on the domain model only and are
// deliberately slow; use them on desk-scale instances.

struct GridSpec {
  double step = 1e-3;
  std::uint64_t max_evaluations = 100'000'000;
};

struct OracleResult {
  PowerSchedule schedule;
  double utility = 0.0;
  std::uint64_t evaluations = 0;
};

/// Best schedule whose cumulative consumption lies on the grid {k * step}.
/// Every such schedule is searched; ties keep the lexicographically smallest
/// power sequence. Throws SizeGuardError past grid.max_evaluations.
OracleResult brute_force_offline(const EhProfile& profile, const ChannelTrace& trace,
                                 const UtilitySpec& spec, const GridSpec& grid);
/// Fading-only utilities (ErgodicThroughput, NonOutage with a fading model).
OracleResult brute_force_offline(const EhProfile& profile, const UtilitySpec& spec,
                                 const GridSpec& grid);

struct ServeSetResult {
  std::size_t outages = 0;
  std::vector<std::size_t> served;  // flat indices, increasing
};

/// Largest set of blocks servable at the minimum rate-meeting power; ties
/// keep the lexicographically earliest set. Horizon limited to 22 blocks.
ServeSetResult brute_force_serve_sets(const EhProfile& profile, const ChannelTrace& trace,
                                      double required_rate);

/// Discretized stochastic control problem shared with the DP solvers.
struct PolicyProblem {
  EhChain chain;
  std::size_t blocks_per_eh = 1;
  DiscreteDistribution gains;
  UtilitySpec utility;
  Discretization grid;
};

/// Optimal expected utility over every deterministic Markov policy on the
/// reachable states. Throws SizeGuardError past max_policies.
double brute_force_policies(const PolicyProblem& problem,
                            std::uint64_t max_policies = 1'000'000);

struct RelayOracleResult {
  double throughput = 0.0;
  std::vector<double> source_rates;
  std::vector<double> relay_rates;
};

/// Zooming grid over per-block hop rates (last block filled greedily), then a
/// pattern-search polish. Transfers, when allowed, are made only when the
/// relay would otherwise run short.
RelayOracleResult relay_grid_oracle(const RelayScenario& scenario, double final_step = 1e-4);

}  // namespace ehopt

#endif  // EHOPT_ORACLE_HPP

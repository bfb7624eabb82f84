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

#ifndef EHOPT_ONLINE_HPP
#define EHOPT_ONLINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ehopt/fading.hpp"
#include "ehopt/model.hpp"
#include "ehopt/stochastic.hpp"
#include "ehopt/trace.hpp"

namespace ehopt {

// Finite-horizon dynamic programs for causal information. Battery contents,
// actions and harvests live on one uniform energy grid; harvests are rounded
// down to it and the battery is clamped at its top.
//
// Information pattern: the EH rate of block m is revealed at its start, the
// channel gain of each communication block at that block's start.

struct DpOptions {
  /// Grid points over [0, largest possible total harvest].
  std::size_t grid_points = 201;
  /// Fixed grid step; overrides grid_points when set.
  std::optional<double> grid_step;
  /// Case 4 only: keep the raw within-block argmax instead of its sorted
  /// (non-decreasing) rearrangement.
  bool unrestricted_actions = false;
};

enum class DpStage {
  kBlock,    // one decision per communication block
  kEhBlock,  // one N-vector decision per EH block
};

struct DpPolicy {
  DpStage stage = DpStage::kBlock;
  EhChain chain;
  std::size_t blocks_per_eh = 1;
  Discretization grid;
  /// Observed gain grid; a single dummy point for EH-block policies.
  DiscreteDistribution gains;
  UtilitySpec utility;
  std::size_t max_eh_states = 1;
  double expected_value = 0.0;

  /// values[index(stage, battery, gain, eh)]. For EH-block policies the
  /// battery is the carry-in before the block's harvest.
  std::vector<double> values;
  /// Block policies: one entry per state. EH-block policies: N entries per state.
  std::vector<std::uint32_t> actions;

  std::size_t stages() const;
  std::size_t index(std::size_t stage, std::size_t battery, std::size_t gain, std::size_t eh) const;
  double value(std::size_t stage, std::size_t battery, std::size_t gain, std::size_t eh) const;
  /// Action in grid units (block policies).
  std::size_t action(std::size_t stage, std::size_t battery, std::size_t gain, std::size_t eh) const;
  /// Per-block actions in grid units (EH-block policies).
  std::span<const std::uint32_t> action_vector(std::size_t stage, std::size_t battery,
                                               std::size_t eh) const;
  /// Harvest of one communication block in grid units.
  std::size_t harvest_units(std::size_t eh_block, std::size_t eh_state) const;
};

/// Case 2: causal CSIT and ESIT. The channel must be a discrete distribution.
DpPolicy solve_dp_case2(const StochasticModel& model, const UtilitySpec& spec,
                        const DpOptions& options = {});

/// Case 3: causal CSIT, harvest sequence known in advance.
DpPolicy solve_dp_case3(const EhProfile& profile, const DiscreteDistribution& channel,
                        const UtilitySpec& spec, const DpOptions& options = {});

/// Case 4 outage minimization with causal ESIT: N-vector decisions per EH block.
DpPolicy solve_dp_outage_case4_causal(const EhProcess& eh, std::size_t num_eh_blocks,
                                      std::size_t blocks_per_eh, const OutageFn& ofn,
                                      const DpOptions& options = {});
/// Same with a harvest sequence known in advance.
DpPolicy solve_dp_outage_case4_causal(const EhProfile& profile, const OutageFn& ofn,
                                      const DpOptions& options = {});

/// Right-hand side of the Bellman equation at one block-policy state,
/// recomputed from the next stage's value table.
double bellman_backup(const DpPolicy& policy, std::size_t stage, std::size_t battery,
                      std::size_t gain, std::size_t eh);

/// Applies a policy along one realization. Block policies need discrete gain
/// indices in the sample.
PowerSchedule rollout(const DpPolicy& policy, const TraceSample& sample);

/// Spend each block's harvest immediately.
PowerSchedule myopic_schedule(const EhProfile& profile);

/// Realized utility of one block: log2(1 + gP), or the 0/1 rate indicator
/// for NonOutage (the fading model only describes what was unknown).
double realized_utility(const UtilitySpec& spec, double power, double gain);
double realized_utility(const UtilitySpec& spec, const PowerSchedule& schedule,
                        const ChannelTrace& trace);

struct TrajectoryLog {
  std::uint64_t trial = 0;
  EhProfile profile{1, {0.0}};
  ChannelTrace trace;
  PowerSchedule schedule;
};

struct SimulationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::vector<double> per_trial;
  std::size_t infeasible_rollouts = 0;
  TrajectoryLog first;
};

/// Monte Carlo rollouts; trial i uses RNG stream i of the generator's seed.
SimulationResult simulate_policy(const DpPolicy& policy, const TraceGenerator& generator,
                                 std::size_t trials);
SimulationResult simulate_policy(const DpPolicy& policy, const StochasticModel& model,
                                 std::size_t trials, std::uint64_t seed);

/// Mean and standard error (sample standard deviation over sqrt(n)).
std::pair<double, double> mean_and_stderr(std::span<const double> samples);

}  // namespace ehopt

#endif  // EHOPT_ONLINE_HPP

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

#ifndef EHOPT_OFFLINE_HPP
#define EHOPT_OFFLINE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ehopt/fading.hpp"
#include "ehopt/model.hpp"
#include "ehopt/staircase.hpp"

namespace ehopt {

// Solvers for non-causal energy information: the whole harvest sequence (and,
// for Case 1, the whole channel trace) is known before transmission starts.

struct WaterLevels {
  /// nu(n, m); +inf in trailing blocks where no positive gain remains.
  BlockGrid levels;
  /// Flat indices t at which an epoch ends; the cumulative constraint is tight
  /// there except possibly for a final epoch with no usable gain.
  std::vector<std::size_t> epoch_ends;
};

struct ThroughputSolution {
  PowerSchedule schedule;
  WaterLevels water;
  double utility = 0.0;
  double kkt_residual = 0.0;
};

/// Case 1 throughput maximization (staircase water-filling).
ThroughputSolution solve_throughput_case1(const EhProfile& profile, const ChannelTrace& trace);

/// KKT residual of a Case 1 schedule against its water levels.
double throughput_kkt_residual(const EhProfile& profile, const ChannelTrace& trace,
                               const PowerSchedule& schedule, const WaterLevels& water);

struct ErgodicSolution {
  std::vector<double> eh_block_powers;  // one constant power per EH block
  PowerSchedule schedule;
  double utility = 0.0;                 // N * sum_m ergodic_rate(P(m))
  double kkt_residual = 0.0;
};

/// Case 4 throughput with non-causal ESIT: constant power per EH block.
ErgodicSolution solve_ergodic_case4(const EhProfile& profile, const FadingModel& fading);

struct OutageSolution {
  PowerSchedule schedule;
  double expected_outages = 0.0;   // sum Q(P)
  double utility = 0.0;            // sum (1 - Q(P))
  std::size_t saving_blocks = 0;   // leading zero-power blocks
};

/// Case 4 outage minimization with non-causal ESIT. The result is
/// non-decreasing and starts with a zero-power (saving) phase.
OutageSolution solve_outage_case4_noncausal(const EhProfile& profile, const OutageFn& ofn);

struct ServeSolution {
  PowerSchedule schedule;
  std::size_t outages = 0;
  std::vector<std::size_t> served;  // flat indices, increasing
};

/// Case 1 outage heuristic: serve blocks in decreasing gain order at the
/// minimum power that meets the rate, skipping any that break feasibility.
ServeSolution solve_outage_case1(const EhProfile& profile, const ChannelTrace& trace,
                                 double required_rate);

}  // namespace ehopt

#endif  // EHOPT_OFFLINE_HPP

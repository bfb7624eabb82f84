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

#ifndef EHOPT_RELAY_MODEL_HPP
#define EHOPT_RELAY_MODEL_HPP

#include <variant>
#include <vector>

#include "ehopt/model.hpp"

namespace ehopt {

// Two-hop decode-and-forward relay over AWGN links. Source and relay harvest
// independently; the relay receives and transmits on orthogonal bands, so
// both hops can be active in the same block.

enum class Traffic { kDelayConstrained, kDelayTolerant };

struct NoSharing {};

/// Source may send energy to the relay; the relay receives efficiency * x.
struct OneWaySharing {
  double efficiency = 1.0;
};

using Sharing = std::variant<NoSharing, OneWaySharing>;

struct RelayScenario {
  EhProfile source;
  EhProfile relay;
  double g_sr = 1.0;
  double g_rd = 1.0;
  Traffic traffic = Traffic::kDelayConstrained;
  Sharing sharing = NoSharing{};
};

/// Throws ShapeError for mismatched profiles and ConfigError for bad gains or
/// an efficiency outside (0, 1].
void validate(const RelayScenario& scenario);

/// Efficiency of the scenario's sharing link, or 0 without sharing.
double sharing_efficiency(const RelayScenario& scenario);

struct RelaySolution {
  PowerSchedule source_schedule;
  PowerSchedule relay_schedule;
  BlockGrid transfers;           // energy sent source -> relay per block
  double throughput = 0.0;       // end-to-end bits over the horizon
  double kkt_residual = 0.0;
};

/// Per-block rates log2(1 + g P) on each hop.
std::vector<double> hop_rates(const PowerSchedule& schedule, double gain);

/// Both energy chains (with transfers) and, for delay-tolerant traffic, data
/// causality at the relay hold within `tol`.
bool check_relay_feasible(const RelayScenario& scenario, const RelaySolution& solution,
                          double tol = kDefaultFeasibilityTol);

}  // namespace ehopt

#endif  // EHOPT_RELAY_MODEL_HPP

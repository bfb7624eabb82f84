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

#ifndef EHOPT_SCENARIO_HPP
#define EHOPT_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehopt/errors.hpp"
#include "ehopt/fading.hpp"
#include "ehopt/model.hpp"
#include "ehopt/relay_model.hpp"
#include "ehopt/stochastic.hpp"

namespace ehopt {

/// Input error tied to a line of the scenario text (0 when unknown).
class ScenarioError : public ConfigError {
 public:
  ScenarioError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class UtilityKind { kThroughput, kOutage, kErgodic };

struct RelaySection {
  std::vector<double> relay_rates;
  double g_sr = 1.0;
  double g_rd = 1.0;
  Traffic traffic = Traffic::kDelayConstrained;
  std::optional<double> sharing_efficiency;
};

struct SolverSection {
  double tol = 1e-3;                 // allowed solver-vs-oracle delta
  std::size_t grid_points = 201;
  std::optional<double> grid_step;
  double oracle_step = 1e-3;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::vector<std::string> policies;
  bool unrestricted_actions = false;
};

struct Scenario {
  std::size_t num_eh_blocks = 1;
  std::size_t blocks_per_eh = 1;

  // Exactly one of rates / process.
  std::optional<std::vector<double>> eh_rates;
  std::optional<EhProcess> eh_process;

  // Exactly one channel description.
  std::optional<BlockGrid> trace;
  std::optional<double> constant_gain;
  std::optional<FadingModel> fading;
  std::optional<DiscreteDistribution> discrete_gains;

  UtilityKind utility = UtilityKind::kThroughput;
  double required_rate = 1.0;

  int knowledge_case = 1;
  Esit esit = Esit::kNonCausal;

  std::optional<RelaySection> relay;
  SolverSection solver;

  EhProfile profile() const;              // needs eh_rates
  ChannelTrace channel_trace() const;     // needs trace or constant_gain
  StochasticModel stochastic_model() const;
  UtilitySpec utility_spec() const;
  RelayScenario relay_scenario() const;   // needs relay and eh_rates
};

/// Parses and validates a scenario. Unknown keys and inconsistent sections
/// raise ScenarioError naming the offending line of `text`.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);

}  // namespace ehopt

#endif  // EHOPT_SCENARIO_HPP

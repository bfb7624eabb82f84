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

// ehopt: power allocation for energy-harvesting transmitters.
//
//   ehopt solve    --scenario s.json --out results/
//   ehopt compare  --scenario s.json --out results/ --trials 10000 --seed 7
//   ehopt oracle   --scenario s.json --out results/ --grid-step 0.001 --tol 1e-3
//   ehopt validate --scenario s.json
//
// EHOPT_WORKERS sets the number of worker threads.

#include <iostream>

#include <CLI11.hpp>

#include "ehopt/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Power allocation for energy-harvesting transmitters"};
  app.require_subcommand(1);
  ehopt::CommandOptions opts;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opts.scenario, "Scenario JSON file")->required();
    sub->add_option("--out", opts.out_dir, "Output directory");
  };

  auto* solve = app.add_subcommand("solve", "Solve a scenario and write schedule CSVs");
  common(solve);
  solve->add_option("--trials", opts.trials, "Simulation trials for online policies");
  solve->add_option("--seed", opts.seed, "Master seed");

  auto* compare = app.add_subcommand("compare", "Monte Carlo comparison of policies");
  common(compare);
  compare->add_option("--policies", opts.policies, "offline-case1 dp-case3 dp-case2 myopic");
  compare->add_option("--trials", opts.trials, "Number of trials");
  compare->add_option("--seed", opts.seed, "Master seed");

  auto* oracle = app.add_subcommand("oracle", "Check the solver against a brute-force oracle");
  common(oracle);
  oracle->add_option("--grid-step", opts.grid_step, "Oracle grid step");
  oracle->add_option("--tol", opts.tol, "Allowed solver-oracle delta");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", opts.scenario, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ehopt::kExitInputError;
  }

  if (solve->parsed()) return ehopt::cmd_solve(opts, std::cout, std::cerr);
  if (compare->parsed()) return ehopt::cmd_compare(opts, std::cout, std::cerr);
  if (oracle->parsed()) return ehopt::cmd_oracle(opts, std::cout, std::cerr);
  return ehopt::cmd_validate(opts, std::cout, std::cerr);
}

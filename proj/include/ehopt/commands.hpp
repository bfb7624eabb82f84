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

#ifndef EHOPT_COMMANDS_HPP
#define EHOPT_COMMANDS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ehopt {

enum ExitCode : int {
  kExitOk = 0,
  kExitOracleMismatch = 1,
  kExitInputError = 2,
  kExitResourceError = 3,  // size guard or infeasible request
};

struct CommandOptions {
  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_step;
  std::optional<double> tol;
  std::vector<std::string> policies;
};

/// Writes schedule.csv (or relay_schedule.csv), summary.csv, plot.csv and
/// timing.csv. No file is written unless the solve succeeds.
int cmd_solve(const CommandOptions& options, std::ostream& out, std::ostream& err);
/// Writes compare.csv, rows sorted by decreasing mean.
int cmd_compare(const CommandOptions& options, std::ostream& out, std::ostream& err);
/// Writes oracle.csv; returns kExitOracleMismatch when a delta exceeds the tolerance.
int cmd_oracle(const CommandOptions& options, std::ostream& out, std::ostream& err);
/// Parses and checks a scenario without solving it.
int cmd_validate(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ehopt

#endif  // EHOPT_COMMANDS_HPP

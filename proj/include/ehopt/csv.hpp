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

#ifndef EHOPT_CSV_HPP
#define EHOPT_CSV_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ehopt/model.hpp"

namespace ehopt {

using CsvRow = std::vector<std::string>;

/// Locale-independent, 12 significant digits.
std::string format_number(double value);
/// Parses a number written by format_number (or any plain decimal).
double parse_number(const std::string& text);

/// Header plus rows, comma separated, '\n' line ends. Fields must not contain
/// commas or newlines.
std::string write_csv(const CsvRow& header, const std::vector<CsvRow>& rows);
/// Inverse of write_csv; the first row is the header.
std::vector<CsvRow> read_csv(const std::string& text);

struct ScheduleRow {
  std::size_t m = 0;
  std::size_t n = 0;
  double gain = 0.0;
  double power = 0.0;
  double utility = 0.0;
  double cumulative_consumed = 0.0;
  double cumulative_harvested = 0.0;
};

/// One row per block. `gains` and `utilities` are flat, one entry per block.
std::vector<ScheduleRow> schedule_rows(const EhProfile& profile, const PowerSchedule& schedule,
                                       const std::vector<double>& gains,
                                       const std::vector<double>& utilities);
std::string schedule_csv(const std::vector<ScheduleRow>& rows);
/// Throws ConfigError on a malformed table.
std::vector<ScheduleRow> parse_schedule_csv(const std::string& text);
/// Rebuilds the power grid from parsed rows.
PowerSchedule schedule_from_rows(const std::vector<ScheduleRow>& rows);

}  // namespace ehopt

#endif  // EHOPT_CSV_HPP

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

#include "ehopt/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "ehopt/errors.hpp"

namespace ehopt {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // no "-0"
  return fmt::format("{:.12g}", value);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("not a number: '" + text + "'");
  return v;
}

std::string write_csv(const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::string out;
  auto append = [&](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  append(header);
  for (const auto& r : rows) append(r);
  return out;
}

std::vector<CsvRow> read_csv(const std::string& text) {
  std::vector<CsvRow> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    CsvRow row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ScheduleRow> schedule_rows(const EhProfile& profile, const PowerSchedule& schedule,
                                       const std::vector<double>& gains,
                                       const std::vector<double>& utilities) {
  const std::size_t horizon = profile.horizon();
  if (schedule.powers.size() != horizon || gains.size() != horizon || utilities.size() != horizon) {
    throw ShapeError("schedule columns do not match the horizon");
  }
  const auto harvested = profile.cumulative_harvest();
  std::vector<ScheduleRow> rows;
  double consumed = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    consumed += schedule.powers[t];
    rows.push_back({t / profile.blocks_per_eh(), t % profile.blocks_per_eh(), gains[t], schedule.powers[t],
                    utilities[t], consumed, harvested[t]});
  }
  return rows;
}

std::string schedule_csv(const std::vector<ScheduleRow>& rows) {
  std::vector<CsvRow> body;
  for (const auto& r : rows) {
    body.push_back({std::to_string(r.m), std::to_string(r.n), format_number(r.gain), format_number(r.power),
                    format_number(r.utility), format_number(r.cumulative_consumed),
                    format_number(r.cumulative_harvested)});
  }
  return write_csv({"m", "n", "gain", "power", "utility", "cumulative_consumed", "cumulative_harvested"},
                   body);
}

std::vector<ScheduleRow> parse_schedule_csv(const std::string& text) {
  const auto table = read_csv(text);
  const CsvRow header{"m", "n", "gain", "power", "utility", "cumulative_consumed", "cumulative_harvested"};
  if (table.empty() || table.front() != header) throw ConfigError("unexpected schedule header");
  std::vector<ScheduleRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != header.size()) throw ConfigError("schedule row " + std::to_string(i) + " has wrong width");
    ScheduleRow r;
    r.m = static_cast<std::size_t>(parse_number(f[0]));
    r.n = static_cast<std::size_t>(parse_number(f[1]));
    r.gain = parse_number(f[2]);
    r.power = parse_number(f[3]);
    r.utility = parse_number(f[4]);
    r.cumulative_consumed = parse_number(f[5]);
    r.cumulative_harvested = parse_number(f[6]);
    rows.push_back(r);
  }
  return rows;
}

PowerSchedule schedule_from_rows(const std::vector<ScheduleRow>& rows) {
  std::size_t num_m = 0, num_n = 0;
  for (const auto& r : rows) {
    num_m = std::max(num_m, r.m + 1);
    num_n = std::max(num_n, r.n + 1);
  }
  if (rows.size() != num_m * num_n) throw ShapeError("schedule rows do not form a full grid");
  BlockGrid grid(num_m, num_n);
  for (const auto& r : rows) grid.at(r.m, r.n) = r.power;
  return PowerSchedule(grid);
}

}  // namespace ehopt

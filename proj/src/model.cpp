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

#include "ehopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ehopt/errors.hpp"

namespace ehopt {

EhProfile::EhProfile(std::size_t blocks_per_eh, std::vector<double> rates)
    : blocks_per_eh_(blocks_per_eh), rates_(std::move(rates)) {
  if (blocks_per_eh_ == 0) throw ConfigError("blocks per EH block must be at least 1");
  if (rates_.empty()) throw ConfigError("at least one EH block is required");
  for (double e : rates_) {
    if (!std::isfinite(e) || e < 0.0) {
      throw ConfigError("EH rates must be finite and non-negative");
    }
  }
}

double EhProfile::harvested_by(std::size_t m, std::size_t n) const {
  if (m >= rates_.size() || n >= blocks_per_eh_) {
    throw std::out_of_range("harvested_by: block index out of range");
  }
  double prior = 0.0;
  for (std::size_t j = 0; j < m; ++j) prior += rates_[j];
  return static_cast<double>(blocks_per_eh_) * prior + static_cast<double>(n + 1) * rates_[m];
}

double EhProfile::harvested_through(std::size_t t) const {
  return harvested_by(t / blocks_per_eh_, t % blocks_per_eh_);
}

double EhProfile::total_energy() const {
  return static_cast<double>(blocks_per_eh_) * std::accumulate(rates_.begin(), rates_.end(), 0.0);
}

std::vector<double> EhProfile::cumulative_harvest() const {
  std::vector<double> out(horizon());
  double prior = 0.0;
  for (std::size_t m = 0; m < rates_.size(); ++m) {
    for (std::size_t n = 0; n < blocks_per_eh_; ++n) {
      out[m * blocks_per_eh_ + n] = prior + static_cast<double>(n + 1) * rates_[m];
    }
    prior += static_cast<double>(blocks_per_eh_) * rates_[m];
  }
  return out;
}

BlockGrid::BlockGrid(std::size_t num_eh_blocks, std::size_t blocks_per_eh, double fill)
    : rows_(num_eh_blocks), cols_(blocks_per_eh), values_(num_eh_blocks * blocks_per_eh, fill) {}

BlockGrid::BlockGrid(const std::vector<std::vector<double>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged block grid");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

double& BlockGrid::at(std::size_t m, std::size_t n) {
  if (m >= rows_ || n >= cols_) throw std::out_of_range("block grid index out of range");
  return values_[m * cols_ + n];
}

double BlockGrid::at(std::size_t m, std::size_t n) const {
  if (m >= rows_ || n >= cols_) throw std::out_of_range("block grid index out of range");
  return values_[m * cols_ + n];
}

ChannelTrace::ChannelTrace(BlockGrid g) : gains(std::move(g)) {
  for (double h : gains.flat()) {
    if (!std::isfinite(h) || h < 0.0) throw ConfigError("channel gains must be finite and >= 0");
  }
}

ChannelTrace ChannelTrace::constant(const EhProfile& profile, double gain) {
  return ChannelTrace(BlockGrid(profile.num_eh_blocks(), profile.blocks_per_eh(), gain));
}

PowerSchedule::PowerSchedule(BlockGrid p) : powers(std::move(p)) {
  for (double v : powers.flat()) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("powers must be finite and >= 0");
  }
}

PowerSchedule PowerSchedule::zeros(const EhProfile& profile) {
  return PowerSchedule(BlockGrid(profile.num_eh_blocks(), profile.blocks_per_eh()));
}

double PowerSchedule::total() const {
  const auto f = powers.flat();
  return std::accumulate(f.begin(), f.end(), 0.0);
}

std::vector<double> PowerSchedule::cumulative() const {
  std::vector<double> out(powers.size());
  const auto f = powers.flat();
  std::partial_sum(f.begin(), f.end(), out.begin());
  return out;
}

void validate(const UtilitySpec& spec) {
  if (const auto* no = std::get_if<NonOutage>(&spec)) {
    if (!(no->required_rate > 0.0) || !std::isfinite(no->required_rate)) {
      throw ConfigError("non-outage utility needs a positive required rate");
    }
    if (no->fading) ehopt::validate(*no->fading);
  } else if (const auto* er = std::get_if<ErgodicThroughput>(&spec)) {
    ehopt::validate(er->fading);
  }
}

bool needs_trace(const UtilitySpec& spec) {
  if (std::holds_alternative<Throughput>(spec)) return true;
  if (const auto* no = std::get_if<NonOutage>(&spec)) return !no->fading.has_value();
  return false;
}

double block_utility(const UtilitySpec& spec, double power, double gain) {
  if (std::holds_alternative<Throughput>(spec)) return std::log2(1.0 + gain * power);
  if (const auto* no = std::get_if<NonOutage>(&spec)) {
    if (no->fading) return 1.0 - outage_probability(*no->fading, no->required_rate, power);
    return std::log2(1.0 + gain * power) >= no->required_rate - kRateTolerance ? 1.0 : 0.0;
  }
  return ergodic_rate(std::get<ErgodicThroughput>(spec).fading, power);
}

KnowledgeCase::KnowledgeCase(Csit csit, Esit esit) : csit_(csit), esit_(esit) {
  if (csit == Csit::kNonCausal && esit == Esit::kCausal) {
    throw ConfigError("non-causal CSIT with causal ESIT is not one of the supported cases");
  }
}

int KnowledgeCase::number() const {
  switch (csit_) {
    case Csit::kNonCausal:
      return 1;
    case Csit::kCausal:
      return esit_ == Esit::kCausal ? 2 : 3;
    case Csit::kNone:
      return 4;
  }
  return 0;
}

double max_violation(const PowerSchedule& schedule, const EhProfile& profile) {
  if (!schedule.powers.same_shape(profile)) {
    throw ShapeError("schedule is " + std::to_string(schedule.powers.num_eh_blocks()) + "x" +
                     std::to_string(schedule.powers.blocks_per_eh()) + ", profile is " +
                     std::to_string(profile.num_eh_blocks()) + "x" +
                     std::to_string(profile.blocks_per_eh()));
  }
  const auto harvest = profile.cumulative_harvest();
  double consumed = 0.0;
  double worst = 0.0;
  for (std::size_t t = 0; t < harvest.size(); ++t) {
    consumed += schedule.powers[t];
    worst = std::max(worst, consumed - harvest[t]);
  }
  return worst;
}

bool check_feasible(const PowerSchedule& schedule, const EhProfile& profile, double tol) {
  return max_violation(schedule, profile) <= tol;
}

double evaluate_utility(const PowerSchedule& schedule, const ChannelTrace& trace,
                        const UtilitySpec& spec) {
  validate(spec);
  if (trace.gains.num_eh_blocks() != schedule.powers.num_eh_blocks() ||
      trace.gains.blocks_per_eh() != schedule.powers.blocks_per_eh()) {
    throw ShapeError("trace and schedule dimensions differ");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < schedule.powers.size(); ++t) {
    total += block_utility(spec, schedule.powers[t], trace.gains[t]);
  }
  return total;
}

double evaluate_utility(const PowerSchedule& schedule, const UtilitySpec& spec) {
  validate(spec);
  if (needs_trace(spec)) throw ConfigError("this utility needs a channel trace");
  double total = 0.0;
  for (double p : schedule.powers.flat()) total += block_utility(spec, p, 0.0);
  return total;
}

}  // namespace ehopt

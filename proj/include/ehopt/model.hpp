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

#ifndef EHOPT_MODEL_HPP
#define EHOPT_MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ehopt/fading.hpp"

namespace ehopt {

// Time is organized as M energy-harvesting (EH) blocks, each split into N
// communication blocks of unit duration, so power and per-block energy are
// numerically identical. Indices are zero-based: (m, n) is communication
// block n of EH block m, and t = m * N + n is the flat time index.

/// Harvesting rates of the M EH blocks, E(m) energy per communication block.
class EhProfile {
 public:
  EhProfile(std::size_t blocks_per_eh, std::vector<double> rates);

  std::size_t num_eh_blocks() const { return rates_.size(); }
  std::size_t blocks_per_eh() const { return blocks_per_eh_; }
  std::size_t horizon() const { return rates_.size() * blocks_per_eh_; }

  double rate(std::size_t m) const { return rates_.at(m); }
  std::span<const double> rates() const { return rates_; }
  /// Rate in force during flat block t.
  double rate_at(std::size_t t) const { return rates_.at(t / blocks_per_eh_); }

  /// N * sum_{j<m} E(j) + (n + 1) * E(m): energy available by the end of (m, n).
  double harvested_by(std::size_t m, std::size_t n) const;
  /// Same quantity by flat index.
  double harvested_through(std::size_t t) const;
  double total_energy() const;

  /// Cumulative harvest for every flat block.
  std::vector<double> cumulative_harvest() const;

 private:
  std::size_t blocks_per_eh_;
  std::vector<double> rates_;
};

/// Free-function spelling of EhProfile::harvested_by.
inline double harvested_by(const EhProfile& profile, std::size_t m, std::size_t n) {
  return profile.harvested_by(m, n);
}

/// Row-major M x N grid of reals, one per communication block.
class BlockGrid {
 public:
  BlockGrid() = default;
  BlockGrid(std::size_t num_eh_blocks, std::size_t blocks_per_eh, double fill = 0.0);
  /// rows[m][n]; all rows must have the same length.
  explicit BlockGrid(const std::vector<std::vector<double>>& rows);

  std::size_t num_eh_blocks() const { return rows_; }
  std::size_t blocks_per_eh() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& at(std::size_t m, std::size_t n);
  double at(std::size_t m, std::size_t n) const;
  double& operator[](std::size_t t) { return values_[t]; }
  double operator[](std::size_t t) const { return values_[t]; }

  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }

  bool same_shape(const EhProfile& profile) const {
    return rows_ == profile.num_eh_blocks() && cols_ == profile.blocks_per_eh();
  }

  friend bool operator==(const BlockGrid&, const BlockGrid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Realized channel power gains h(n, m) >= 0.
struct ChannelTrace {
  BlockGrid gains;

  ChannelTrace() = default;
  explicit ChannelTrace(BlockGrid g);
  /// Same gain in every block.
  static ChannelTrace constant(const EhProfile& profile, double gain);
};

/// Power P(n, m) >= 0 allocated to every communication block.
struct PowerSchedule {
  BlockGrid powers;

  PowerSchedule() = default;
  explicit PowerSchedule(BlockGrid p);
  static PowerSchedule zeros(const EhProfile& profile);

  double total() const;
  std::vector<double> cumulative() const;
};

struct Throughput {};

/// Per-block non-outage probability at a required rate. Without a fading model
/// the transmitter knows the gain and the utility is a 0/1 indicator.
struct NonOutage {
  double required_rate = 1.0;
  std::optional<FadingModel> fading;
};

/// Expected log2(1 + hP) over a fading model, for blocks without CSIT.
struct ErgodicThroughput {
  FadingModel fading;
};

using UtilitySpec = std::variant<Throughput, NonOutage, ErgodicThroughput>;

void validate(const UtilitySpec& spec);

/// True when the utility needs a realized channel trace.
bool needs_trace(const UtilitySpec& spec);

/// Utility of one block given its power and (when relevant) realized gain.
double block_utility(const UtilitySpec& spec, double power, double gain);

/// Rate tolerance used when deciding whether a block meets its required rate.
inline constexpr double kRateTolerance = 1e-9;

enum class Csit { kNonCausal, kCausal, kNone };
enum class Esit { kNonCausal, kCausal };

/// Which channel and energy information the transmitter has.
class KnowledgeCase {
 public:
  /// Throws ConfigError for non-causal CSIT with causal ESIT.
  KnowledgeCase(Csit csit, Esit esit);

  Csit csit() const { return csit_; }
  Esit esit() const { return esit_; }
  /// 1: both non-causal; 2: both causal; 3: causal CSIT, non-causal ESIT;
  /// 4: no CSIT.
  int number() const;

 private:
  Csit csit_;
  Esit esit_;
};

inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// Whether cumulative consumption stays within cumulative harvest at every
/// block, up to `tol`. Throws ShapeError on mismatched dimensions.
bool check_feasible(const PowerSchedule& schedule, const EhProfile& profile,
                    double tol = kDefaultFeasibilityTol);

/// Largest cumulative overdraw, max_t (consumed_t - harvested_t), floored at 0.
double max_violation(const PowerSchedule& schedule, const EhProfile& profile);

/// Sum of block utilities. The trace overload is required for Throughput and
/// CSIT-aware NonOutage; the other overload serves the fading-based variants.
double evaluate_utility(const PowerSchedule& schedule, const ChannelTrace& trace,
                        const UtilitySpec& spec);
double evaluate_utility(const PowerSchedule& schedule, const UtilitySpec& spec);

}  // namespace ehopt

#endif  // EHOPT_MODEL_HPP

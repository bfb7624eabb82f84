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

#include "ehopt/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ehopt/errors.hpp"

namespace ehopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

bool no_greater(double candidate, double best) {
  if (std::isinf(best)) return true;
  return candidate <= best + kTieTolerance * std::max(1.0, std::abs(best));
}

}  // namespace

Waterfill waterfill(double budget, std::span<const double> gains) {
  Waterfill out{std::vector<double>(gains.size(), 0.0), kInf};
  if (std::isnan(budget) || budget < 0.0) throw ConfigError("water-filling budget must be >= 0");

  std::vector<double> floors;  // 1/g for positive gains
  floors.reserve(gains.size());
  for (double g : gains) {
    if (g < 0.0) throw ConfigError("gains must be non-negative");
    if (g > 0.0) floors.push_back(1.0 / g);
  }
  if (floors.empty()) return out;
  std::sort(floors.begin(), floors.end());

  double prefix = 0.0;
  double level = floors.front() + budget;
  for (std::size_t k = 1; k <= floors.size(); ++k) {
    prefix += floors[k - 1];
    level = (budget + prefix) / static_cast<double>(k);
    if (k == floors.size() || level <= floors[k]) break;
  }
  out.level = level;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] > 0.0) out.powers[i] = std::max(0.0, level - 1.0 / gains[i]);
  }
  return out;
}

std::vector<double> waterfill_budget(double budget, std::span<const double> gains) {
  return waterfill(budget, gains).powers;
}

Staircase staircase_waterfill(std::span<const double> gains, std::span<const double> caps) {
  if (gains.size() != caps.size()) throw ShapeError("gains and caps differ in length");
  const std::size_t horizon = gains.size();
  Staircase out{std::vector<double>(horizon, 0.0), std::vector<double>(horizon, kInf), {}};

  std::size_t start = 0;
  double used = 0.0;
  while (start < horizon) {
    double best_level = kInf;
    std::size_t best_end = horizon - 1;
    for (std::size_t end = start; end < horizon; ++end) {
      const double budget = std::max(0.0, caps[end] - used);
      const double level = waterfill(budget, gains.subspan(start, end - start + 1)).level;
      if (std::isinf(level)) continue;
      if (no_greater(level, best_level)) {
        best_level = level;
        best_end = end;
      }
    }
    if (std::isinf(best_level)) {
      // Nothing left can carry power.
      out.epoch_ends.push_back(horizon - 1);
      break;
    }
    const double budget = std::max(0.0, caps[best_end] - used);
    const auto fill = waterfill(budget, gains.subspan(start, best_end - start + 1));
    for (std::size_t t = start; t <= best_end; ++t) {
      out.powers[t] = fill.powers[t - start];
      out.levels[t] = fill.level;
    }
    used = std::max(used, caps[best_end]);
    out.epoch_ends.push_back(best_end);
    start = best_end + 1;
  }
  return out;
}

std::vector<double> equalize_cumulative(std::span<const double> caps,
                                        std::vector<std::size_t>* epoch_ends) {
  const std::size_t horizon = caps.size();
  std::vector<double> x(horizon, 0.0);
  if (epoch_ends != nullptr) epoch_ends->clear();
  std::size_t start = 0;
  double used = 0.0;
  while (start < horizon) {
    double best = kInf;
    std::size_t best_end = start;
    for (std::size_t end = start; end < horizon; ++end) {
      const double avg = (caps[end] - used) / static_cast<double>(end - start + 1);
      if (no_greater(avg, best)) {
        best = avg;
        best_end = end;
      }
    }
    const double level = std::max(0.0, best);
    for (std::size_t t = start; t <= best_end; ++t) x[t] = level;
    used += level * static_cast<double>(best_end - start + 1);
    if (epoch_ends != nullptr) epoch_ends->push_back(best_end);
    start = best_end + 1;
  }
  return x;
}

double equalization_residual(std::span<const double> x, std::span<const double> caps,
                             double tol) {
  if (x.size() != caps.size()) throw ShapeError("allocation and caps differ in length");
  double residual = 0.0;
  double consumed = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    consumed += x[t];
    const double slack = caps[t] - consumed;
    residual = std::max(residual, -slack);
    if (t + 1 < x.size()) {
      residual = std::max(residual, x[t] - x[t + 1]);
      if (x[t + 1] > x[t] + tol) residual = std::max(residual, slack);
    } else {
      residual = std::max(residual, slack);
    }
  }
  return residual;
}

}  // namespace ehopt

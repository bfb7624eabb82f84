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

#include "ehopt/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ehopt/errors.hpp"

namespace ehopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shape(const EhProfile& profile, const ChannelTrace& trace) {
  if (!trace.gains.same_shape(profile)) throw ShapeError("channel trace does not match the profile");
  for (double g : trace.gains.flat()) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("channel gains must be finite and >= 0");
  }
}

PowerSchedule to_schedule(const EhProfile& profile, std::span<const double> flat) {
  PowerSchedule out = PowerSchedule::zeros(profile);
  std::copy(flat.begin(), flat.end(), out.powers.flat().begin());
  return out;
}

// Minimizes sum Q(p) over schedules of the form
//   zeros on [0, s), spend-as-harvested on [s, u), one free block u,
//   then blocks u+1.. all at or above P_c (Q convex there).
// Some optimal non-decreasing schedule has this shape; the free block absorbs
// the single power that may sit strictly between 0 and P_c.
class SaveThenTransmit {
 public:
  SaveThenTransmit(const OutageFn& ofn, std::vector<double> harvest)
      : q_(ofn), pc_(ofn.critical_point()), harvest_(std::move(harvest)) {}

  std::vector<double> solve() const {
    const std::size_t horizon = harvest_.size();
    std::vector<double> best(horizon, 0.0);
    double best_cost = static_cast<double>(horizon);
    std::vector<double> trial(horizon, 0.0);

    auto consider = [&](double cost) {
      if (cost < best_cost - 1e-15) {
        best_cost = cost;
        best = trial;
      }
    };

    // Saving prefix followed by the convex tail.
    for (std::size_t s = 0; s < horizon; ++s) {
      std::fill(trial.begin(), trial.end(), 0.0);
      const double tail = tail_cost(s, 0.0, &trial);
      if (std::isfinite(tail)) consider(static_cast<double>(s) + tail);
    }
    if (!(pc_ > 0.0)) return best;

    for (std::size_t s = 0; s < horizon; ++s) {
      double run_cost = 0.0;
      for (std::size_t u = s; u < horizon; ++u) {
        if (u > s) run_cost += q_(run_power(s, u - 1));
        const double before = u > s ? harvest_[u - 1] : 0.0;
        double upper = std::min(pc_, harvest_[u] - before);
        for (std::size_t k = u + 1; k < horizon; ++k) {
          upper = std::min(upper, harvest_[k] - before - static_cast<double>(k - u) * pc_);
        }
        if (upper < 0.0) continue;
        const double fixed = static_cast<double>(s) + run_cost;
        auto phi = [&](double x) { return fixed + q_(x) + tail_cost(u + 1, before + x, nullptr); };
        const double x = minimize(phi, upper);

        std::fill(trial.begin(), trial.end(), 0.0);
        for (std::size_t t = s; t < u; ++t) trial[t] = run_power(s, t);
        trial[u] = x;
        const double tail = tail_cost(u + 1, before + x, &trial);
        if (std::isfinite(tail)) consider(fixed + q_(x) + tail);
      }
    }
    return best;
  }

 private:
  double run_power(std::size_t s, std::size_t t) const {
    return t == s ? harvest_[s] : harvest_[t] - harvest_[t - 1];
  }

  // Blocks [start, T) at P_c + equalized extra; +inf when P_c is unaffordable.
  double tail_cost(std::size_t start, double consumed, std::vector<double>* out) const {
    const std::size_t horizon = harvest_.size();
    if (start >= horizon) return 0.0;
    std::vector<double> caps(horizon - start);
    for (std::size_t k = 0; k < caps.size(); ++k) {
      caps[k] = harvest_[start + k] - consumed - static_cast<double>(k + 1) * pc_;
      if (caps[k] < -1e-12 * std::max(1.0, harvest_.back())) return kInf;
      caps[k] = std::max(0.0, caps[k]);
    }
    const auto extra = equalize_cumulative(caps);
    double cost = 0.0;
    for (std::size_t k = 0; k < extra.size(); ++k) {
      const double p = pc_ + extra[k];
      cost += q_(p);
      if (out != nullptr) (*out)[start + k] = p;
    }
    return cost;
  }

  template <typename F>
  static double minimize(F&& f, double upper) {
    if (!(upper > 0.0)) return 0.0;
    constexpr int kScan = 64;
    double best_x = 0.0;
    double best_f = f(0.0);
    int best_i = 0;
    for (int i = 1; i <= kScan; ++i) {
      const double x = upper * i / kScan;
      const double v = f(x);
      if (v < best_f) {
        best_f = v;
        best_x = x;
        best_i = i;
      }
    }
    double lo = upper * std::max(0, best_i - 1) / kScan;
    double hi = upper * std::min(kScan, best_i + 1) / kScan;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double fa = f(a);
    double fb = f(b);
    for (int it = 0; it < 60 && hi - lo > 1e-13 * std::max(1.0, upper); ++it) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - ratio * (hi - lo);
        fa = f(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + ratio * (hi - lo);
        fb = f(b);
      }
    }
    const double x = fa <= fb ? a : b;
    return std::min(fa, fb) < best_f ? x : best_x;
  }

  const OutageFn& q_;
  double pc_;
  std::vector<double> harvest_;
};

}  // namespace

ThroughputSolution solve_throughput_case1(const EhProfile& profile, const ChannelTrace& trace) {
  require_shape(profile, trace);
  const auto caps = profile.cumulative_harvest();
  const auto stairs = staircase_waterfill(trace.gains.flat(), caps);

  ThroughputSolution out;
  out.schedule = to_schedule(profile, stairs.powers);
  out.water.levels = BlockGrid(profile.num_eh_blocks(), profile.blocks_per_eh());
  std::copy(stairs.levels.begin(), stairs.levels.end(), out.water.levels.flat().begin());
  out.water.epoch_ends = stairs.epoch_ends;
  out.utility = evaluate_utility(out.schedule, trace, Throughput{});
  out.kkt_residual = throughput_kkt_residual(profile, trace, out.schedule, out.water);
  return out;
}

double throughput_kkt_residual(const EhProfile& profile, const ChannelTrace& trace,
                               const PowerSchedule& schedule, const WaterLevels& water) {
  const auto gains = trace.gains.flat();
  const auto powers = schedule.powers.flat();
  const auto levels = water.levels.flat();
  const auto caps = profile.cumulative_harvest();
  double residual = 0.0;
  double consumed = 0.0;
  for (std::size_t t = 0; t < powers.size(); ++t) {
    consumed += powers[t];
    const double slack = caps[t] - consumed;
    residual = std::max(residual, -slack);
    residual = std::max(residual, -powers[t]);
    if (gains[t] <= 0.0) {
      residual = std::max(residual, powers[t]);
      continue;
    }
    if (!std::isfinite(levels[t])) continue;
    const double floor = 1.0 / gains[t];
    if (powers[t] > 0.0) {
      residual = std::max(residual, std::abs(powers[t] + floor - levels[t]));
    } else {
      residual = std::max(residual, levels[t] - floor);
    }
    const bool last = t + 1 == powers.size();
    if (!last && std::isfinite(levels[t + 1])) {
      residual = std::max(residual, levels[t] - levels[t + 1]);
      if (levels[t + 1] > levels[t] + 1e-9) residual = std::max(residual, slack);
    } else {
      // Final usable epoch: unspent energy could still raise the level.
      residual = std::max(residual, slack);
    }
  }
  return residual;
}

ErgodicSolution solve_ergodic_case4(const EhProfile& profile, const FadingModel& fading) {
  validate(fading);
  std::vector<double> caps(profile.num_eh_blocks());
  double running = 0.0;
  for (std::size_t m = 0; m < caps.size(); ++m) {
    running += profile.rate(m);
    caps[m] = running;
  }
  ErgodicSolution out;
  out.eh_block_powers = equalize_cumulative(caps);
  out.schedule = PowerSchedule::zeros(profile);
  const std::size_t n_blocks = profile.blocks_per_eh();
  for (std::size_t m = 0; m < caps.size(); ++m) {
    for (std::size_t n = 0; n < n_blocks; ++n) out.schedule.powers.at(m, n) = out.eh_block_powers[m];
    out.utility += static_cast<double>(n_blocks) * ergodic_rate(fading, out.eh_block_powers[m]);
  }
  out.kkt_residual = equalization_residual(out.eh_block_powers, caps);
  return out;
}

OutageSolution solve_outage_case4_noncausal(const EhProfile& profile, const OutageFn& ofn) {
  const auto harvest = profile.cumulative_harvest();
  std::vector<double> powers;
  if (ofn.critical_point() > 0.0) {
    powers = SaveThenTransmit(ofn, harvest).solve();
  } else {
    powers = equalize_cumulative(harvest);
  }
  std::sort(powers.begin(), powers.end());

  OutageSolution out;
  out.schedule = to_schedule(profile, powers);
  for (double p : powers) out.expected_outages += ofn(p);
  out.utility = static_cast<double>(powers.size()) - out.expected_outages;
  out.saving_blocks = static_cast<std::size_t>(
      std::find_if(powers.begin(), powers.end(), [](double p) { return p > 0.0; }) - powers.begin());
  return out;
}

ServeSolution solve_outage_case1(const EhProfile& profile, const ChannelTrace& trace,
                                 double required_rate) {
  require_shape(profile, trace);
  if (!(required_rate > 0.0) || !std::isfinite(required_rate)) {
    throw ConfigError("required rate must be positive and finite");
  }
  const auto gains = trace.gains.flat();
  const double threshold = std::exp2(required_rate) - 1.0;

  std::vector<std::size_t> order(gains.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

  ServeSolution out;
  out.schedule = PowerSchedule::zeros(profile);
  auto powers = out.schedule.powers.flat();
  for (std::size_t t : order) {
    if (gains[t] <= 0.0) continue;
    powers[t] = threshold / gains[t];
    if (check_feasible(out.schedule, profile)) {
      out.served.push_back(t);
    } else {
      powers[t] = 0.0;
    }
  }
  std::sort(out.served.begin(), out.served.end());
  out.outages = gains.size() - out.served.size();
  return out;
}

}  // namespace ehopt

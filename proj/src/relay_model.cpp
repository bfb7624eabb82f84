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

#include "ehopt/relay_model.hpp"

#include <cmath>

#include "ehopt/errors.hpp"

namespace ehopt {

void validate(const RelayScenario& scenario) {
  if (scenario.source.num_eh_blocks() != scenario.relay.num_eh_blocks() ||
      scenario.source.blocks_per_eh() != scenario.relay.blocks_per_eh()) {
    throw ShapeError("source and relay profiles differ in shape");
  }
  for (double g : {scenario.g_sr, scenario.g_rd}) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("relay gains must be finite and >= 0");
  }
  if (const auto* share = std::get_if<OneWaySharing>(&scenario.sharing)) {
    if (!(share->efficiency > 0.0 && share->efficiency <= 1.0)) {
      throw ConfigError("sharing efficiency must lie in (0, 1]");
    }
  }
}

double sharing_efficiency(const RelayScenario& scenario) {
  const auto* share = std::get_if<OneWaySharing>(&scenario.sharing);
  return share == nullptr ? 0.0 : share->efficiency;
}

std::vector<double> hop_rates(const PowerSchedule& schedule, double gain) {
  std::vector<double> out;
  out.reserve(schedule.powers.size());
  for (double p : schedule.powers.flat()) out.push_back(std::log2(1.0 + gain * p));
  return out;
}

bool check_relay_feasible(const RelayScenario& scenario, const RelaySolution& solution,
                          double tol) {
  validate(scenario);
  const auto hs = scenario.source.cumulative_harvest();
  const auto hr = scenario.relay.cumulative_harvest();
  const auto ps = solution.source_schedule.powers.flat();
  const auto pr = solution.relay_schedule.powers.flat();
  if (ps.size() != hs.size() || pr.size() != hs.size()) {
    throw ShapeError("relay schedules do not match the profiles");
  }
  const auto xs = solution.transfers.flat();
  const double alpha = sharing_efficiency(scenario);
  if (!xs.empty() && xs.size() != hs.size()) throw ShapeError("transfers do not match the profiles");

  const auto in_bits = hop_rates(solution.source_schedule, scenario.g_sr);
  const auto out_bits = hop_rates(solution.relay_schedule, scenario.g_rd);
  double used_s = 0.0, used_r = 0.0, sent = 0.0, bits_in = 0.0, bits_out = 0.0;
  for (std::size_t t = 0; t < hs.size(); ++t) {
    const double x = xs.empty() ? 0.0 : xs[t];
    if (ps[t] < -tol || pr[t] < -tol || x < -tol) return false;
    if (x > tol && alpha == 0.0) return false;
    used_s += ps[t];
    used_r += pr[t];
    sent += x;
    if (used_s + sent > hs[t] + tol) return false;
    if (used_r > hr[t] + alpha * sent + tol) return false;
    bits_in += in_bits[t];
    bits_out += out_bits[t];
    if (scenario.traffic == Traffic::kDelayTolerant && bits_out > bits_in + tol) return false;
  }
  return true;
}

}  // namespace ehopt

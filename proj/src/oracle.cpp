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

#include "ehopt/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <tuple>

#include "ehopt/errors.hpp"

namespace ehopt {
namespace {

using BlockValue = std::function<double(std::size_t t, double power)>;

OracleResult grid_search(const EhProfile& profile, const GridSpec& grid, bool time_invariant,
                         const BlockValue& value) {
  if (!(grid.step > 0.0) || !std::isfinite(grid.step)) throw ConfigError("grid step must be positive");
  const auto harvest = profile.cumulative_harvest();
  const std::size_t horizon = harvest.size();
  std::vector<std::size_t> cap(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double units = std::floor(harvest[t] / grid.step + 1e-9);
    if (units > 1e9) throw SizeGuardError("oracle grid too fine for the harvested energy");
    cap[t] = static_cast<std::size_t>(units);
  }

  // Stage t sees consumption c <= cap[t-1] and adds a <= cap[t] - c.
  std::uint64_t evaluations = 0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::uint64_t prev = t == 0 ? 0 : cap[t - 1];
    for (std::uint64_t c = 0; c <= prev; ++c) evaluations += cap[t] - c + 1;
    if (evaluations > grid.max_evaluations) {
      throw SizeGuardError("oracle grid exceeds the evaluation guard");
    }
  }

  // Per-block utility of every grid power; one shared table when the utility
  // does not depend on the block.
  std::vector<std::vector<double>> table(time_invariant ? std::min<std::size_t>(horizon, 1) : horizon);
  for (std::size_t t = 0; t < table.size(); ++t) {
    const std::size_t top = time_invariant ? cap.back() : cap[t];
    table[t].resize(top + 1);
    for (std::size_t a = 0; a <= top; ++a) table[t][a] = value(t, static_cast<double>(a) * grid.step);
  }
  auto utility = [&](std::size_t t, std::size_t a) { return table[time_invariant ? 0 : t][a]; };

  std::vector<std::vector<double>> best(horizon + 1);
  std::vector<std::vector<std::size_t>> choice(horizon);
  best[horizon].assign(horizon == 0 ? 1 : cap[horizon - 1] + 1, 0.0);
  for (std::size_t t = horizon; t-- > 0;) {
    const std::size_t prev = t == 0 ? 0 : cap[t - 1];
    best[t].assign(prev + 1, -std::numeric_limits<double>::infinity());
    choice[t].assign(prev + 1, 0);
    for (std::size_t c = 0; c <= prev; ++c) {
      for (std::size_t a = 0; a + c <= cap[t]; ++a) {
        const double v = utility(t, a) + best[t + 1][c + a];
        if (v > best[t][c]) {
          best[t][c] = v;
          choice[t][c] = a;
        }
      }
    }
  }

  OracleResult out;
  out.schedule = PowerSchedule::zeros(profile);
  out.evaluations = evaluations;
  std::size_t consumed = 0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t a = choice[t][consumed];
    out.schedule.powers[t] = static_cast<double>(a) * grid.step;
    consumed += a;
  }
  out.utility = horizon == 0 ? 0.0 : best[0][0];
  return out;
}

}  // namespace

OracleResult brute_force_offline(const EhProfile& profile, const ChannelTrace& trace,
                                 const UtilitySpec& spec, const GridSpec& grid) {
  validate(spec);
  if (!trace.gains.same_shape(profile)) throw ShapeError("channel trace does not match the profile");
  const bool uses_gain = needs_trace(spec);
  return grid_search(profile, grid, !uses_gain, [&](std::size_t t, double p) {
    return block_utility(spec, p, trace.gains[t]);
  });
}

OracleResult brute_force_offline(const EhProfile& profile, const UtilitySpec& spec,
                                 const GridSpec& grid) {
  validate(spec);
  if (needs_trace(spec)) throw ConfigError("this utility needs a channel trace");
  return grid_search(profile, grid, true,
                     [&](std::size_t, double p) { return block_utility(spec, p, 0.0); });
}

ServeSetResult brute_force_serve_sets(const EhProfile& profile, const ChannelTrace& trace,
                                      double required_rate) {
  if (!trace.gains.same_shape(profile)) throw ShapeError("channel trace does not match the profile");
  if (!(required_rate > 0.0)) throw ConfigError("required rate must be positive");
  const std::size_t horizon = profile.horizon();
  if (horizon > 22) throw SizeGuardError("serve-set enumeration limited to 22 blocks");
  const double threshold = std::exp2(required_rate) - 1.0;
  const auto harvest = profile.cumulative_harvest();

  std::vector<double> need(horizon, std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < horizon; ++t) {
    if (trace.gains[t] > 0.0) need[t] = threshold / trace.gains[t];
  }

  ServeSetResult out{horizon, {}};
  std::vector<std::size_t> members;
  for (std::uint32_t mask = 0; mask < (1u << horizon); ++mask) {
    members.clear();
    double used = 0.0;
    bool ok = true;
    for (std::size_t t = 0; t < horizon && ok; ++t) {
      if ((mask >> t) & 1u) {
        used += need[t];
        members.push_back(t);
      }
      ok = used <= harvest[t] + kDefaultFeasibilityTol;
    }
    if (!ok) continue;
    const std::size_t outages = horizon - members.size();
    if (outages < out.outages || (outages == out.outages && members < out.served)) {
      out.outages = outages;
      out.served = members;
    }
  }
  return out;
}

double brute_force_policies(const PolicyProblem& problem, std::uint64_t max_policies) {
  validate(problem.gains);
  validate(problem.utility);
  const auto& chain = problem.chain;
  const std::size_t per_eh = problem.blocks_per_eh;
  if (per_eh == 0 || chain.num_eh_blocks() == 0) throw ConfigError("empty horizon");
  const std::size_t horizon = chain.num_eh_blocks() * per_eh;
  const std::size_t top = problem.grid.levels - 1;

  using State = std::array<std::size_t, 3>;  // battery units, gain index, EH state
  auto harvest = [&](std::size_t m, std::size_t i) { return problem.grid.units(chain.rates[m][i]); };

  std::vector<std::vector<State>> states(horizon);
  std::vector<std::map<State, std::size_t>> index(horizon);
  auto add = [&](std::size_t t, const State& s) {
    if (index[t].emplace(s, states[t].size()).second) states[t].push_back(s);
  };
  const auto& q = problem.gains.probs;
  for (std::size_t i = 0; i < chain.initial.size(); ++i) {
    if (chain.initial[i] <= 0.0) continue;
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q[k] > 0.0) add(0, {std::min(harvest(0, i), top), k, i});
    }
  }

  // Successor states (with probabilities) of a residual battery r.
  auto successors = [&](std::size_t t, std::size_t r, std::size_t i) {
    std::vector<std::pair<State, double>> out;
    const std::size_t next = t + 1;
    const std::size_t m = t / per_eh;
    const std::size_t m_next = next / per_eh;
    std::vector<std::pair<std::size_t, double>> eh;
    if (m_next == m) {
      eh.emplace_back(i, 1.0);
    } else {
      for (std::size_t j = 0; j < chain.states(m_next); ++j) {
        if (chain.transition[m][i][j] > 0.0) eh.emplace_back(j, chain.transition[m][i][j]);
      }
    }
    for (const auto& [j, pj] : eh) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] > 0.0) out.push_back({{std::min(r + harvest(m_next, j), top), k, j}, pj * q[k]});
      }
    }
    return out;
  };

  for (std::size_t t = 0; t + 1 < horizon; ++t) {
    for (std::size_t s = 0; s < states[t].size(); ++s) {
      const State st = states[t][s];
      for (std::size_t a = 0; a <= st[0]; ++a) {
        for (const auto& [nx, p] : successors(t, st[0] - a, st[2])) add(t + 1, nx);
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> decisions;  // (stage, state)
  double count = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t s = 0; s < states[t].size(); ++s) {
      decisions.emplace_back(t, s);
      count *= static_cast<double>(states[t][s][0] + 1);
      if (count > static_cast<double>(max_policies)) {
        throw SizeGuardError("policy enumeration exceeds the guard");
      }
    }
  }

  std::vector<std::vector<std::size_t>> action(horizon);
  for (std::size_t t = 0; t < horizon; ++t) action[t].assign(states[t].size(), 0);

  auto evaluate = [&]() {
    std::vector<double> mass(states[0].size(), 0.0);
    for (std::size_t i = 0; i < chain.initial.size(); ++i) {
      for (std::size_t k = 0; k < q.size(); ++k) {
        const State s0{std::min(harvest(0, i), top), k, i};
        auto it = index[0].find(s0);
        if (it != index[0].end()) mass[it->second] += chain.initial[i] * q[k];
      }
    }
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      std::vector<double> next(t + 1 < horizon ? states[t + 1].size() : 0, 0.0);
      for (std::size_t s = 0; s < states[t].size(); ++s) {
        if (mass[s] == 0.0) continue;
        const State st = states[t][s];
        const std::size_t a = action[t][s];
        total += mass[s] * block_utility(problem.utility, problem.grid.energy(a), problem.gains.values[st[1]]);
        if (t + 1 == horizon) continue;
        for (const auto& [nx, p] : successors(t, st[0] - a, st[2])) next[index[t + 1].at(nx)] += mass[s] * p;
      }
      mass = std::move(next);
    }
    return total;
  };

  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    best = std::max(best, evaluate());
    std::size_t d = 0;
    for (; d < decisions.size(); ++d) {
      const auto [t, s] = decisions[d];
      if (action[t][s] < states[t][s][0]) {
        ++action[t][s];
        break;
      }
      action[t][s] = 0;
    }
    if (d == decisions.size()) break;
  }
  return best;
}

RelayOracleResult relay_grid_oracle(const RelayScenario& scenario, double final_step) {
  validate(scenario);
  if (!(final_step > 0.0)) throw ConfigError("final step must be positive");
  const auto hs = scenario.source.cumulative_harvest();
  const auto hr = scenario.relay.cumulative_harvest();
  const std::size_t horizon = hs.size();
  if (horizon > 8) throw SizeGuardError("relay oracle limited to 8 blocks");
  const double alpha = sharing_efficiency(scenario);
  const bool tolerant = scenario.traffic == Traffic::kDelayTolerant;
  const double tol = 1e-12;
  const double g_sr = scenario.g_sr, g_rd = scenario.g_rd;

  // x = [rho_s(0), rho_r(0), rho_s(1), rho_r(1), ...]
  auto energy = [](double rate, double gain) { return (std::exp2(rate) - 1.0) / gain; };
  auto rate_for = [](double e, double gain) { return e > 0.0 && gain > 0.0 ? std::log2(1.0 + gain * e) : 0.0; };
  auto feasible = [&](const std::vector<double>& x) {
    double used_s = 0.0, used_r = 0.0, deficit = 0.0, bits_in = 0.0, bits_out = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const double rs = x[2 * t], rr = x[2 * t + 1];
      if (rs < 0.0 || rr < 0.0) return false;
      if ((rs > 0.0 && g_sr == 0.0) || (rr > 0.0 && g_rd == 0.0)) return false;
      if (rs > 0.0) used_s += energy(rs, g_sr);
      if (rr > 0.0) used_r += energy(rr, g_rd);
      if (alpha > 0.0) {
        deficit = std::max(deficit, used_r - hr[t]);
        if (used_s + deficit / alpha > hs[t] + tol) return false;
      } else if (used_s > hs[t] + tol || used_r > hr[t] + tol) {
        return false;
      }
      bits_in += rs;
      bits_out += rr;
      if (tolerant && bits_out > bits_in + tol) return false;
    }
    return true;
  };
  auto objective = [&](const std::vector<double>& x) {
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      total += tolerant ? x[2 * t + 1] : std::min(x[2 * t], x[2 * t + 1]);
    }
    return total;
  };

  // Stage 1: zooming grid over the free rates. The last block is always
  // filled to its largest feasible value, which removes one dimension per hop.
  // Delay-constrained hops run at a common rate without loss.
  const std::size_t dims = tolerant ? 2 * (horizon - 1) : horizon - 1;
  const double share = alpha > 0.0 ? alpha * hs.back() : 0.0;
  const double ub = std::max(rate_for(hs.back(), g_sr), rate_for(hr.back() + share, g_rd));

  std::vector<double> x(2 * horizon, 0.0);
  auto complete = [&](std::span<const double> free) -> std::optional<double> {
    if (tolerant) {
      double used_s = 0.0, used_r = 0.0, in = 0.0, out = 0.0;
      for (std::size_t t = 0; t + 1 < horizon; ++t) {
        x[2 * t] = free[t];
        x[2 * t + 1] = free[horizon - 1 + t];
        if (x[2 * t] < 0.0 || x[2 * t + 1] < 0.0) return std::nullopt;
        if (x[2 * t] > 0.0) used_s += energy(x[2 * t], g_sr);
        if (x[2 * t + 1] > 0.0) used_r += energy(x[2 * t + 1], g_rd);
        in += x[2 * t];
        out += x[2 * t + 1];
      }
      const std::size_t last = horizon - 1;
      x[2 * last] = rate_for((hs[last] - used_s) * (1.0 - 1e-14), g_sr);
      x[2 * last + 1] =
          std::max(0.0, std::min(rate_for((hr[last] - used_r) * (1.0 - 1e-14), g_rd), in + x[2 * last] - out));
    } else {
      for (std::size_t t = 0; t + 1 < horizon; ++t) x[2 * t] = x[2 * t + 1] = free[t];
      const std::size_t last = 2 * (horizon - 1);
      double lo = 0.0, hi = ub;
      x[last] = x[last + 1] = 0.0;
      if (!feasible(x)) return std::nullopt;
      for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        x[last] = x[last + 1] = mid;
        (feasible(x) ? lo : hi) = mid;
      }
      x[last] = x[last + 1] = lo;
    }
    if (!feasible(x)) return std::nullopt;
    return objective(x);
  };

  std::vector<double> best_x(2 * horizon, 0.0);
  double value = 0.0;
  {
    std::size_t points = 2;
    while (dims > 0 && std::pow(static_cast<double>(points + 1), static_cast<double>(dims)) <= 5e4) ++points;
    std::vector<double> center(dims, 0.5 * ub), half(dims, 0.5 * ub), free(dims);
    std::vector<double> best_free(dims, 0.0);
    if (auto v = complete(best_free)) {
      value = *v;
      best_x = x;
    }
    for (int level = 0; level < 200 && dims > 0; ++level) {
      const double spacing = 2.0 * half[0] / static_cast<double>(points - 1);
      if (spacing < 1e-9) break;
      std::vector<std::size_t> idx(dims, 0);
      while (true) {
        for (std::size_t d = 0; d < dims; ++d) {
          free[d] = center[d] - half[d] + spacing * static_cast<double>(idx[d]);
        }
        if (auto v = complete(free); v && *v > value) {
          value = *v;
          best_free = free;
          best_x = x;
        }
        std::size_t d = 0;
        for (; d < dims && ++idx[d] == points; ++d) idx[d] = 0;
        if (d == dims) break;
      }
      center = best_free;
      for (auto& h : half) h = 2.0 * spacing;
    }
    if (dims == 0) {
      if (auto v = complete(free)) {
        value = *v;
        best_x = x;
      }
    }
  }

  // Stage 2: pattern search polish in the full (rho_s, rho_r) space.
  x = best_x;
  std::vector<double> candidate;
  for (double step = 1e-3; step >= final_step * 1e-3; step *= 0.5) {
    while (true) {
      double best_gain = 1e-15;
      std::vector<double> next;
      for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t u = t; u < horizon; ++u) {
          const std::array<std::size_t, 4> vars{2 * t, 2 * t + 1, 2 * u, 2 * u + 1};
          const std::size_t nvars = u == t ? 2 : 4;
          std::size_t combos = 1;
          for (std::size_t v = 0; v < nvars; ++v) combos *= 3;
          for (std::size_t code = 0; code < combos; ++code) {
            candidate = x;
            std::size_t rest = code;
            bool moved = false;
            for (std::size_t v = 0; v < nvars; ++v) {
              const int delta = static_cast<int>(rest % 3) - 1;
              rest /= 3;
              if (delta != 0) {
                candidate[vars[v]] += delta * step;
                moved = true;
              }
            }
            if (!moved || !feasible(candidate)) continue;
            const double gain = objective(candidate) - value;
            if (gain > best_gain) {
              best_gain = gain;
              next = candidate;
            }
          }
        }
      }
      if (next.empty()) break;
      x = std::move(next);
      value = objective(x);
    }
  }

  RelayOracleResult out;
  out.throughput = value;
  for (std::size_t t = 0; t < horizon; ++t) {
    out.source_rates.push_back(x[2 * t]);
    out.relay_rates.push_back(x[2 * t + 1]);
  }
  return out;
}

}  // namespace ehopt

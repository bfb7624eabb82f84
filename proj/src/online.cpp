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

#include "ehopt/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ehopt/errors.hpp"
#include "parallel.hpp"

namespace ehopt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t max_states(const EhChain& chain) {
  std::size_t s = 1;
  for (const auto& r : chain.rates) s = std::max(s, r.size());
  return s;
}

// Largest total harvest per communication block along any path.
double max_chain_total(const EhChain& chain) {
  double total = 0.0;
  for (const auto& r : chain.rates) total += *std::max_element(r.begin(), r.end());
  return total;
}

Discretization make_grid(const DpOptions& options, double max_energy) {
  if (options.grid_step) return Discretization::with_step(*options.grid_step, max_energy);
  return Discretization::covering(max_energy, options.grid_points);
}

DpPolicy prepare(DpStage stage, EhChain chain, std::size_t blocks_per_eh,
                 DiscreteDistribution gains, UtilitySpec spec, const DpOptions& options) {
  if (blocks_per_eh == 0 || chain.num_eh_blocks() == 0) throw ConfigError("empty horizon");
  if (gains.values.empty()) throw ConfigError("empty gain grid");
  validate(gains);
  validate(spec);
  DpPolicy p;
  p.stage = stage;
  p.blocks_per_eh = blocks_per_eh;
  p.grid = make_grid(options, static_cast<double>(blocks_per_eh) * max_chain_total(chain));
  if (p.grid.levels < 2) throw ConfigError("empty battery grid");
  if (p.grid.levels > (1u << 24)) throw SizeGuardError("battery grid too large");
  p.chain = std::move(chain);
  p.gains = std::move(gains);
  p.utility = std::move(spec);
  p.max_eh_states = max_states(p.chain);
  return p;
}

// Expected next-stage value of residual battery r after stage t, EH state i.
double continuation(const DpPolicy& p, std::size_t t, std::size_t r, std::size_t i) {
  const std::size_t horizon = p.stages();
  if (t + 1 >= horizon) return 0.0;
  const std::size_t top = p.grid.levels - 1;
  const std::size_t m = t / p.blocks_per_eh;
  const auto& q = p.gains.probs;
  auto over_gains = [&](std::size_t b, std::size_t state) {
    double acc = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) acc += q[k] * p.value(t + 1, b, k, state);
    return acc;
  };
  if ((t + 1) % p.blocks_per_eh != 0) return over_gains(std::min(r + p.harvest_units(m, i), top), i);
  double acc = 0.0;
  for (std::size_t j = 0; j < p.chain.states(m + 1); ++j) {
    const double pj = p.chain.transition[m][i][j];
    if (pj == 0.0) continue;
    acc += pj * over_gains(std::min(r + p.harvest_units(m + 1, j), top), j);
  }
  return acc;
}

DpPolicy solve_block_dp(EhChain chain, std::size_t blocks_per_eh, DiscreteDistribution gains,
                        const UtilitySpec& spec, const DpOptions& options) {
  DpPolicy p = prepare(DpStage::kBlock, std::move(chain), blocks_per_eh, std::move(gains), spec, options);
  const std::size_t horizon = p.stages();
  const std::size_t levels = p.grid.levels;
  const std::size_t ngains = p.gains.values.size();
  p.values.assign(horizon * levels * ngains * p.max_eh_states, 0.0);
  p.actions.assign(p.values.size(), 0);

  std::vector<std::vector<double>> reward(ngains, std::vector<double>(levels));
  for (std::size_t k = 0; k < ngains; ++k) {
    for (std::size_t a = 0; a < levels; ++a) {
      reward[k][a] = block_utility(p.utility, p.grid.energy(a), p.gains.values[k]);
    }
  }

  std::vector<double> cont(levels);
  for (std::size_t t = horizon; t-- > 0;) {
    const std::size_t m = t / p.blocks_per_eh;
    for (std::size_t i = 0; i < p.chain.states(m); ++i) {
      for (std::size_t r = 0; r < levels; ++r) cont[r] = continuation(p, t, r, i);
      detail::parallel_for(levels, [&](std::size_t b) {
        for (std::size_t k = 0; k < ngains; ++k) {
          double best = kNegInf;
          std::size_t arg = 0;
          for (std::size_t a = 0; a <= b; ++a) {
            const double v = reward[k][a] + cont[b - a];
            if (v > best) {
              best = v;
              arg = a;
            }
          }
          const std::size_t idx = p.index(t, b, k, i);
          p.values[idx] = best;
          p.actions[idx] = static_cast<std::uint32_t>(arg);
        }
      });
    }
  }

  const std::size_t top = levels - 1;
  for (std::size_t i = 0; i < p.chain.initial.size(); ++i) {
    for (std::size_t k = 0; k < ngains; ++k) {
      p.expected_value += p.chain.initial[i] * p.gains.probs[k] *
                          p.value(0, std::min(p.harvest_units(0, i), top), k, i);
    }
  }
  return p;
}

DpPolicy solve_eh_block_dp(EhChain chain, std::size_t blocks_per_eh, const OutageFn& ofn,
                           const DpOptions& options) {
  DpPolicy p = prepare(DpStage::kEhBlock, std::move(chain), blocks_per_eh,
                       DiscreteDistribution{{0.0}, {1.0}},
                       NonOutage{ofn.required_rate(), ofn.fading()}, options);
  const std::size_t num_m = p.chain.num_eh_blocks();
  const std::size_t levels = p.grid.levels;
  const std::size_t top = levels - 1;
  const std::size_t n_blocks = blocks_per_eh;
  p.values.assign(num_m * levels * p.max_eh_states, 0.0);
  p.actions.assign(p.values.size() * n_blocks, 0);

  std::vector<double> reward(levels);
  for (std::size_t a = 0; a < levels; ++a) reward[a] = 1.0 - ofn(p.grid.energy(a));

  std::vector<double> cont(levels);
  for (std::size_t m = num_m; m-- > 0;) {
    for (std::size_t i = 0; i < p.chain.states(m); ++i) {
      const std::size_t gain_units = p.harvest_units(m, i);
      // Expected value of entering block m + 1 with carry r.
      for (std::size_t r = 0; r < levels; ++r) {
        double acc = 0.0;
        if (m + 1 < num_m) {
          for (std::size_t j = 0; j < p.chain.states(m + 1); ++j) {
            const double pj = p.chain.transition[m][i][j];
            if (pj != 0.0) acc += pj * p.value(m + 1, r, 0, j);
          }
        }
        cont[r] = acc;
      }
      detail::parallel_for(levels, [&](std::size_t carry) {
        // f[n][s]: best utility of blocks 0..n spending s in total.
        std::vector<std::size_t> cap(n_blocks);
        for (std::size_t n = 0; n < n_blocks; ++n) cap[n] = std::min(carry + (n + 1) * gain_units, top);
        std::vector<std::vector<double>> f(n_blocks);
        std::vector<std::vector<std::uint32_t>> arg(n_blocks);
        f[0].assign(reward.begin(), reward.begin() + cap[0] + 1);
        arg[0].resize(cap[0] + 1);
        std::iota(arg[0].begin(), arg[0].end(), 0u);
        for (std::size_t n = 1; n < n_blocks; ++n) {
          f[n].assign(cap[n] + 1, kNegInf);
          arg[n].assign(cap[n] + 1, 0);
          for (std::size_t s = 0; s <= cap[n]; ++s) {
            const std::size_t lo = s > cap[n - 1] ? s - cap[n - 1] : 0;
            for (std::size_t a = lo; a <= s; ++a) {
              const double v = f[n - 1][s - a] + reward[a];
              if (v > f[n][s]) {
                f[n][s] = v;
                arg[n][s] = static_cast<std::uint32_t>(a);
              }
            }
          }
        }
        const std::size_t avail = cap[n_blocks - 1];
        double best = kNegInf;
        std::size_t spend = 0;
        for (std::size_t s = 0; s <= avail; ++s) {
          const double v = f[n_blocks - 1][s] + cont[avail - s];
          if (v > best) {
            best = v;
            spend = s;
          }
        }
        std::vector<std::uint32_t> vec(n_blocks);
        for (std::size_t n = n_blocks; n-- > 0;) {
          vec[n] = arg[n][spend];
          spend -= vec[n];
        }
        if (!options.unrestricted_actions) std::sort(vec.begin(), vec.end());
        const std::size_t idx = p.index(m, carry, 0, i);
        p.values[idx] = best;
        std::copy(vec.begin(), vec.end(), p.actions.begin() + static_cast<std::ptrdiff_t>(idx * n_blocks));
      });
    }
  }
  for (std::size_t i = 0; i < p.chain.initial.size(); ++i) {
    p.expected_value += p.chain.initial[i] * p.value(0, 0, 0, i);
  }
  return p;
}

std::size_t eh_state_of(const DpPolicy& p, const TraceSample& sample, std::size_t m) {
  if (p.chain.states(m) == 1) return 0;
  if (m >= sample.eh_states.size()) throw ConfigError("sample lacks EH state indices");
  const std::size_t i = sample.eh_states[m];
  if (i >= p.chain.states(m)) throw ConfigError("sample EH state outside the policy's chain");
  return i;
}

}  // namespace

std::size_t DpPolicy::stages() const {
  return stage == DpStage::kBlock ? chain.num_eh_blocks() * blocks_per_eh : chain.num_eh_blocks();
}

std::size_t DpPolicy::index(std::size_t t, std::size_t battery, std::size_t gain,
                            std::size_t eh) const {
  return ((t * grid.levels + battery) * gains.values.size() + gain) * max_eh_states + eh;
}

double DpPolicy::value(std::size_t t, std::size_t battery, std::size_t gain, std::size_t eh) const {
  return values.at(index(t, battery, gain, eh));
}

std::size_t DpPolicy::action(std::size_t t, std::size_t battery, std::size_t gain,
                             std::size_t eh) const {
  if (stage != DpStage::kBlock) throw ConfigError("EH-block policies act with vectors");
  return actions.at(index(t, battery, gain, eh));
}

std::span<const std::uint32_t> DpPolicy::action_vector(std::size_t t, std::size_t battery,
                                                       std::size_t eh) const {
  if (stage != DpStage::kEhBlock) throw ConfigError("block policies act with scalars");
  const std::size_t idx = index(t, battery, 0, eh) * blocks_per_eh;
  if (idx + blocks_per_eh > actions.size()) throw std::out_of_range("policy state out of range");
  return std::span<const std::uint32_t>(actions).subspan(idx, blocks_per_eh);
}

std::size_t DpPolicy::harvest_units(std::size_t eh_block, std::size_t eh_state) const {
  return grid.units(chain.rates.at(eh_block).at(eh_state));
}

DpPolicy solve_dp_case2(const StochasticModel& model, const UtilitySpec& spec,
                        const DpOptions& options) {
  validate(model);
  const auto* gains = std::get_if<DiscreteDistribution>(&model.channel);
  if (gains == nullptr) throw ConfigError("the DP needs a discrete gain distribution");
  return solve_block_dp(make_eh_chain(model.eh, model.num_eh_blocks), model.blocks_per_eh,
                        *gains, spec, options);
}

DpPolicy solve_dp_case3(const EhProfile& profile, const DiscreteDistribution& channel,
                        const UtilitySpec& spec, const DpOptions& options) {
  return solve_block_dp(make_eh_chain(profile), profile.blocks_per_eh(), channel, spec, options);
}

DpPolicy solve_dp_outage_case4_causal(const EhProcess& eh, std::size_t num_eh_blocks,
                                      std::size_t blocks_per_eh, const OutageFn& ofn,
                                      const DpOptions& options) {
  return solve_eh_block_dp(make_eh_chain(eh, num_eh_blocks), blocks_per_eh, ofn, options);
}

DpPolicy solve_dp_outage_case4_causal(const EhProfile& profile, const OutageFn& ofn,
                                      const DpOptions& options) {
  return solve_eh_block_dp(make_eh_chain(profile), profile.blocks_per_eh(), ofn, options);
}

double bellman_backup(const DpPolicy& policy, std::size_t t, std::size_t battery, std::size_t gain,
                      std::size_t eh) {
  if (policy.stage != DpStage::kBlock) throw ConfigError("backup defined for block policies");
  double best = kNegInf;
  for (std::size_t a = 0; a <= battery; ++a) {
    const double v = block_utility(policy.utility, policy.grid.energy(a), policy.gains.values.at(gain)) +
                     continuation(policy, t, battery - a, eh);
    best = std::max(best, v);
  }
  return best;
}

PowerSchedule rollout(const DpPolicy& policy, const TraceSample& sample) {
  const std::size_t num_m = policy.chain.num_eh_blocks();
  const std::size_t n_blocks = policy.blocks_per_eh;
  if (sample.profile.num_eh_blocks() != num_m || sample.profile.blocks_per_eh() != n_blocks) {
    throw ShapeError("sample does not match the policy horizon");
  }
  const std::size_t top = policy.grid.levels - 1;
  PowerSchedule out = PowerSchedule::zeros(sample.profile);

  if (policy.stage == DpStage::kEhBlock) {
    std::size_t carry = 0;
    for (std::size_t m = 0; m < num_m; ++m) {
      const std::size_t i = eh_state_of(policy, sample, m);
      const auto vec = policy.action_vector(m, carry, i);
      std::size_t spent = 0;
      for (std::size_t n = 0; n < n_blocks; ++n) {
        out.powers.at(m, n) = policy.grid.energy(vec[n]);
        spent += vec[n];
      }
      carry = std::min(carry + n_blocks * policy.harvest_units(m, i), top) - spent;
    }
    return out;
  }

  if (sample.gain_states.size() != num_m * n_blocks) {
    throw ConfigError("block policies need a discrete channel with gain indices");
  }
  std::size_t battery = std::min(policy.harvest_units(0, eh_state_of(policy, sample, 0)), top);
  for (std::size_t t = 0; t < num_m * n_blocks; ++t) {
    const std::size_t m = t / n_blocks;
    const std::size_t i = eh_state_of(policy, sample, m);
    const std::size_t a = policy.action(t, battery, sample.gain_states[t], i);
    out.powers[t] = policy.grid.energy(a);
    if (t + 1 < num_m * n_blocks) {
      const std::size_t m_next = (t + 1) / n_blocks;
      battery = std::min(battery - a + policy.harvest_units(m_next, eh_state_of(policy, sample, m_next)), top);
    }
  }
  return out;
}

PowerSchedule myopic_schedule(const EhProfile& profile) {
  PowerSchedule out = PowerSchedule::zeros(profile);
  for (std::size_t t = 0; t < profile.horizon(); ++t) out.powers[t] = profile.rate_at(t);
  return out;
}

double realized_utility(const UtilitySpec& spec, double power, double gain) {
  if (const auto* no = std::get_if<NonOutage>(&spec)) {
    return std::log2(1.0 + gain * power) >= no->required_rate - kRateTolerance ? 1.0 : 0.0;
  }
  return std::log2(1.0 + gain * power);
}

double realized_utility(const UtilitySpec& spec, const PowerSchedule& schedule,
                        const ChannelTrace& trace) {
  if (schedule.powers.size() != trace.gains.size()) throw ShapeError("schedule and trace differ in size");
  double total = 0.0;
  for (std::size_t t = 0; t < schedule.powers.size(); ++t) {
    total += realized_utility(spec, schedule.powers[t], trace.gains[t]);
  }
  return total;
}

std::pair<double, double> mean_and_stderr(std::span<const double> samples) {
  if (samples.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

SimulationResult simulate_policy(const DpPolicy& policy, const TraceGenerator& generator,
                                 std::size_t trials) {
  if (trials == 0) throw ConfigError("at least one trial is required");
  SimulationResult out;
  out.trials = trials;
  out.per_trial.assign(trials, 0.0);
  std::vector<char> feasible(trials, 1);
  detail::parallel_for(trials, [&](std::size_t trial) {
    const TraceSample sample = generate_trace(generator, trial);
    const PowerSchedule schedule = rollout(policy, sample);
    feasible[trial] = check_feasible(schedule, sample.profile) ? 1 : 0;
    out.per_trial[trial] = realized_utility(policy.utility, schedule, sample.trace);
    if (trial == 0) out.first = {0, sample.profile, sample.trace, schedule};
  });
  out.infeasible_rollouts = static_cast<std::size_t>(std::count(feasible.begin(), feasible.end(), 0));
  std::tie(out.mean, out.std_error) = mean_and_stderr(out.per_trial);
  return out;
}

SimulationResult simulate_policy(const DpPolicy& policy, const StochasticModel& model,
                                 std::size_t trials, std::uint64_t seed) {
  return simulate_policy(policy, make_generator(model, seed), trials);
}

}  // namespace ehopt

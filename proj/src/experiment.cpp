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

#include "ehopt/experiment.hpp"

#include <cmath>
#include <map>
#include <string>

#include <fmt/format.h>

#include "ehopt/errors.hpp"
#include "ehopt/offline.hpp"
#include "ehopt/trace.hpp"
#include "parallel.hpp"

namespace ehopt {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join(const std::vector<double>& v) { return fmt::format("[{}]", fmt::join(v, ",")); }

std::string canonical(const ExperimentScenario& sc) {
  std::string out = fmt::format("M={};N={};", sc.model.num_eh_blocks, sc.model.blocks_per_eh);
  out += std::visit(Overloaded{
                        [](const IidEh& e) {
                          return fmt::format("iid{}{};", join(e.rates.values), join(e.rates.probs));
                        },
                        [](const MarkovEh& e) {
                          std::string s = fmt::format("markov{}{}", join(e.levels), join(e.initial));
                          for (const auto& row : e.transition) s += join(row);
                          return s + ";";
                        },
                    },
                    sc.model.eh);
  out += std::visit(Overloaded{
                        [](const DiscreteDistribution& d) {
                          return fmt::format("gains{}{};", join(d.values), join(d.probs));
                        },
                        [](const FadingModel& f) { return describe(f) + ";"; },
                    },
                    sc.model.channel);
  out += std::visit(Overloaded{
                        [](const Throughput&) { return std::string("throughput;"); },
                        [](const NonOutage& n) {
                          return fmt::format("outage({},{});", n.required_rate,
                                             n.fading ? describe(*n.fading) : "csit");
                        },
                        [](const ErgodicThroughput& e) { return "ergodic(" + describe(e.fading) + ");"; },
                    },
                    sc.utility);
  out += fmt::format("grid={},{},{}", sc.dp.grid_points, sc.dp.grid_step ? *sc.dp.grid_step : 0.0,
                     sc.dp.unrestricted_actions);
  return out;
}

double offline_utility(const UtilitySpec& spec, const TraceSample& sample) {
  if (std::holds_alternative<Throughput>(spec)) {
    return solve_throughput_case1(sample.profile, sample.trace).utility;
  }
  const auto& no = std::get<NonOutage>(spec);
  const auto served = solve_outage_case1(sample.profile, sample.trace, no.required_rate);
  return static_cast<double>(sample.profile.horizon() - served.outages);
}

void check_supported(const ExperimentScenario& sc, std::span<const PolicyKind> policies) {
  validate(sc.model);
  validate(sc.utility);
  const auto* no = std::get_if<NonOutage>(&sc.utility);
  if (std::holds_alternative<ErgodicThroughput>(sc.utility) || (no != nullptr && no->fading)) {
    throw ConfigError("experiments compare CSIT policies; use throughput or CSIT outage");
  }
  for (PolicyKind p : policies) {
    if ((p == PolicyKind::kDpCase2 || p == PolicyKind::kDpCase3) &&
        !std::holds_alternative<DiscreteDistribution>(sc.model.channel)) {
      throw ConfigError(fmt::format("policy {} needs a discrete gain distribution", policy_name(p)));
    }
  }
}

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kOfflineCase1:
      return "offline-case1";
    case PolicyKind::kDpCase3:
      return "dp-case3";
    case PolicyKind::kDpCase2:
      return "dp-case2";
    case PolicyKind::kMyopic:
      return "myopic";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  for (PolicyKind k : {PolicyKind::kOfflineCase1, PolicyKind::kDpCase3, PolicyKind::kDpCase2,
                       PolicyKind::kMyopic}) {
    if (policy_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string scenario_digest(const ExperimentScenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : canonical(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::vector<ExperimentReport> run_experiment(std::span<const ExperimentScenario> scenarios,
                                             std::span<const PolicyKind> policies,
                                             std::size_t trials, std::uint64_t seed) {
  if (policies.empty()) throw ConfigError("at least one policy is required");
  if (trials == 0) throw ConfigError("at least one trial is required");
  std::vector<ExperimentReport> reports;
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    const ExperimentScenario& sc = scenarios[si];
    check_supported(sc, policies);
    const TraceGenerator gen = make_generator(sc.model, seed);
    std::vector<TraceSample> samples;
    samples.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) samples.push_back(generate_trace(gen, t));

    std::optional<DpPolicy> case2;
    std::map<std::vector<std::size_t>, DpPolicy> case3;  // keyed by EH realization
    for (PolicyKind p : policies) {
      if (p == PolicyKind::kDpCase2 && !case2) case2 = solve_dp_case2(sc.model, sc.utility, sc.dp);
      if (p == PolicyKind::kDpCase3 && case3.empty()) {
        const auto& gains = std::get<DiscreteDistribution>(sc.model.channel);
        for (const auto& s : samples) {
          if (!case3.contains(s.eh_states)) {
            case3.emplace(s.eh_states, solve_dp_case3(s.profile, gains, sc.utility, sc.dp));
          }
        }
      }
    }

    const std::string digest = scenario_digest(sc);
    for (PolicyKind p : policies) {
      ExperimentReport r;
      r.scenario = si;
      r.policy = std::string(policy_name(p));
      r.trials = trials;
      r.seed = seed;
      r.digest = digest;
      r.per_trial.assign(trials, 0.0);
      detail::parallel_for(trials, [&](std::size_t t) {
        const TraceSample& s = samples[t];
        PowerSchedule schedule;
        switch (p) {
          case PolicyKind::kOfflineCase1:
            r.per_trial[t] = offline_utility(sc.utility, s);
            return;
          case PolicyKind::kDpCase2:
            schedule = rollout(*case2, s);
            break;
          case PolicyKind::kDpCase3:
            schedule = rollout(case3.at(s.eh_states), s);
            break;
          case PolicyKind::kMyopic:
            schedule = myopic_schedule(s.profile);
            break;
        }
        if (!check_feasible(schedule, s.profile)) throw InfeasibleError("rollout broke the EH constraints");
        r.per_trial[t] = realized_utility(sc.utility, schedule, s.trace);
      });
      std::tie(r.mean, r.std_error) = mean_and_stderr(r.per_trial);
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

std::pair<double, double> paired_gap(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.per_trial.size() != b.per_trial.size()) throw ShapeError("reports differ in trial count");
  std::vector<double> diff(a.per_trial.size());
  for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = a.per_trial[t] - b.per_trial[t];
  return mean_and_stderr(diff);
}

}  // namespace ehopt

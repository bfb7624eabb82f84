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

#include "ehopt/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ehopt/csv.hpp"
#include "ehopt/errors.hpp"
#include "ehopt/experiment.hpp"
#include "ehopt/offline.hpp"
#include "ehopt/online.hpp"
#include "ehopt/oracle.hpp"
#include "ehopt/relay.hpp"
#include "ehopt/scenario.hpp"
#include "ehopt/trace.hpp"

namespace ehopt {
namespace {

using Files = std::map<std::string, std::string>;
using Summary = std::vector<std::pair<std::string, std::string>>;

std::string summary_csv(const Summary& summary) {
  std::vector<CsvRow> rows;
  for (const auto& [k, v] : summary) rows.push_back({k, v});
  return write_csv({"metric", "value"}, rows);
}

std::string plot_csv(const EhProfile& profile, const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  std::vector<CsvRow> rows;
  for (const auto& [name, values] : series) {
    for (std::size_t t = 0; t < values.size(); ++t) {
      if (!std::isfinite(values[t])) continue;
      rows.push_back({name, std::to_string(t), std::to_string(t / profile.blocks_per_eh()),
                      std::to_string(t % profile.blocks_per_eh()), format_number(values[t])});
    }
  }
  return write_csv({"series", "t", "m", "n", "value"}, rows);
}

std::vector<double> cumulative(std::span<const double> x) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = acc += x[t];
  return out;
}

void write_files(const std::string& dir, const Files& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
  }
}

// Standard schedule outputs for a single-node schedule.
void add_schedule(Files& files, const EhProfile& profile, const PowerSchedule& schedule,
                  const std::vector<double>& gains, const std::vector<double>& utilities,
                  std::vector<std::pair<std::string, std::vector<double>>> extra_series = {}) {
  files["schedule.csv"] = schedule_csv(schedule_rows(profile, schedule, gains, utilities));
  const auto powers = schedule.powers.flat();
  std::vector<std::pair<std::string, std::vector<double>>> series{
      {"power", {powers.begin(), powers.end()}},
      {"cumulative_consumed", cumulative(powers)},
      {"cumulative_harvested", profile.cumulative_harvest()}};
  for (auto& s : extra_series) series.push_back(std::move(s));
  files["plot.csv"] = plot_csv(profile, series);
}

std::size_t trials_of(const CommandOptions& o, const Scenario& sc) { return o.trials.value_or(sc.solver.trials); }
std::uint64_t seed_of(const CommandOptions& o, const Scenario& sc) { return o.seed.value_or(sc.solver.seed); }

DpOptions dp_options(const Scenario& sc) {
  DpOptions dp;
  dp.grid_points = sc.solver.grid_points;
  dp.grid_step = sc.solver.grid_step;
  dp.unrestricted_actions = sc.solver.unrestricted_actions;
  return dp;
}

std::string case_label(const Scenario& sc) {
  if (sc.relay) return "relay";
  if (sc.knowledge_case == 4) return sc.esit == Esit::kCausal ? "4-causal-esit" : "4-noncausal-esit";
  return std::to_string(sc.knowledge_case);
}

// Runs a DP policy by simulation and records its first trajectory.
void add_policy_run(Files& files, Summary& summary, const Scenario& sc, const DpPolicy& policy,
                    const TraceGenerator& gen, std::size_t trials) {
  const auto sim = simulate_policy(policy, gen, trials);
  std::vector<double> utilities;
  for (std::size_t t = 0; t < sim.first.schedule.powers.size(); ++t) {
    utilities.push_back(realized_utility(policy.utility, sim.first.schedule.powers[t], sim.first.trace.gains[t]));
  }
  const auto gains = sim.first.trace.gains.flat();
  add_schedule(files, sim.first.profile, sim.first.schedule, {gains.begin(), gains.end()}, utilities);
  summary.push_back({"expected_utility", format_number(policy.expected_value)});
  summary.push_back({"simulated_mean", format_number(sim.mean)});
  summary.push_back({"simulated_std_error", format_number(sim.std_error)});
  summary.push_back({"trials", std::to_string(trials)});
  summary.push_back({"seed", std::to_string(gen.seed)});
  summary.push_back({"infeasible_rollouts", std::to_string(sim.infeasible_rollouts)});
  summary.push_back({"grid_step", format_number(policy.grid.step)});
  summary.push_back({"grid_levels", std::to_string(policy.grid.levels)});
  (void)sc;
}

Files solve_files(const Scenario& sc, const CommandOptions& o) {
  Files files;
  Summary summary{{"case", case_label(sc)}};

  if (sc.relay) {
    const auto rs = sc.relay_scenario();
    const auto sol = solve_relay(rs);
    const auto in_rates = hop_rates(sol.source_schedule, rs.g_sr);
    const auto out_rates = hop_rates(sol.relay_schedule, rs.g_rd);
    std::vector<CsvRow> rows;
    for (std::size_t t = 0; t < in_rates.size(); ++t) {
      rows.push_back({std::to_string(t / rs.source.blocks_per_eh()), std::to_string(t % rs.source.blocks_per_eh()),
                      format_number(sol.source_schedule.powers[t]), format_number(sol.relay_schedule.powers[t]),
                      format_number(sol.transfers.size() ? sol.transfers[t] : 0.0), format_number(in_rates[t]),
                      format_number(out_rates[t])});
    }
    files["relay_schedule.csv"] = write_csv(
        {"m", "n", "source_power", "relay_power", "transfer", "source_rate", "relay_rate"}, rows);
    const auto ps = sol.source_schedule.powers.flat();
    const auto pr = sol.relay_schedule.powers.flat();
    files["plot.csv"] = plot_csv(rs.source, {{"source_power", {ps.begin(), ps.end()}},
                                             {"relay_power", {pr.begin(), pr.end()}},
                                             {"source_harvested", rs.source.cumulative_harvest()},
                                             {"relay_harvested", rs.relay.cumulative_harvest()}});
    const char* solver = std::holds_alternative<OneWaySharing>(rs.sharing) ? "relay_energy_sharing"
                         : rs.traffic == Traffic::kDelayTolerant         ? "relay_delay_tolerant"
                                                                          : "relay_delay_constrained";
    summary.push_back({"solver", solver});
    summary.push_back({"total_utility", format_number(sol.throughput)});
    summary.push_back({"kkt_residual", format_number(sol.kkt_residual)});
    summary.push_back({"feasible", check_relay_feasible(rs, sol) ? "true" : "false"});
    files["summary.csv"] = summary_csv(summary);
    return files;
  }

  switch (sc.knowledge_case) {
    case 1: {
      const auto profile = sc.profile();
      const auto trace = sc.channel_trace();
      const auto gains = trace.gains.flat();
      std::vector<double> g(gains.begin(), gains.end());
      if (sc.utility == UtilityKind::kThroughput) {
        const auto sol = solve_throughput_case1(profile, trace);
        std::vector<double> u;
        for (std::size_t t = 0; t < g.size(); ++t) u.push_back(std::log2(1.0 + g[t] * sol.schedule.powers[t]));
        const auto levels = sol.water.levels.flat();
        add_schedule(files, profile, sol.schedule, g, u, {{"water_level", {levels.begin(), levels.end()}}});
        summary.push_back({"solver", "staircase_waterfill"});
        summary.push_back({"utility", "throughput"});
        summary.push_back({"total_utility", format_number(sol.utility)});
        summary.push_back({"kkt_residual", format_number(sol.kkt_residual)});
        summary.push_back({"epochs", std::to_string(sol.water.epoch_ends.size())});
        summary.push_back({"max_violation", format_number(max_violation(sol.schedule, profile))});
      } else {
        const auto sol = solve_outage_case1(profile, trace, sc.required_rate);
        std::vector<double> u;
        for (std::size_t t = 0; t < g.size(); ++t) u.push_back(realized_utility(sc.utility_spec(), sol.schedule.powers[t], g[t]));
        add_schedule(files, profile, sol.schedule, g, u);
        summary.push_back({"solver", "outage_ordering"});
        summary.push_back({"utility", "outage"});
        summary.push_back({"total_utility", format_number(static_cast<double>(sol.served.size()))});
        summary.push_back({"outages", std::to_string(sol.outages)});
        summary.push_back({"max_violation", format_number(max_violation(sol.schedule, profile))});
      }
      break;
    }
    case 2: {
      const auto model = sc.stochastic_model();
      const auto policy = solve_dp_case2(model, sc.utility_spec(), dp_options(sc));
      summary.push_back({"solver", "dp_case2"});
      add_policy_run(files, summary, sc, policy, make_generator(model, seed_of(o, sc)), trials_of(o, sc));
      break;
    }
    case 3: {
      const auto profile = sc.profile();
      const auto policy = solve_dp_case3(profile, *sc.discrete_gains, sc.utility_spec(), dp_options(sc));
      const TraceGenerator gen{sc.num_eh_blocks, sc.blocks_per_eh, profile, *sc.discrete_gains, seed_of(o, sc)};
      summary.push_back({"solver", "dp_case3"});
      add_policy_run(files, summary, sc, policy, gen, trials_of(o, sc));
      break;
    }
    default: {
      const FadingModel& fading = *sc.fading;
      if (sc.esit == Esit::kCausal) {
        const OutageFn ofn(fading, sc.required_rate);
        const auto dp = dp_options(sc);
        DpPolicy policy = sc.eh_rates ? solve_dp_outage_case4_causal(sc.profile(), ofn, dp)
                                      : solve_dp_outage_case4_causal(*sc.eh_process, sc.num_eh_blocks,
                                                                     sc.blocks_per_eh, ofn, dp);
        const EhSource source = sc.eh_rates ? EhSource(sc.profile()) : EhSource(*sc.eh_process);
        const TraceGenerator gen{sc.num_eh_blocks, sc.blocks_per_eh, source, fading, seed_of(o, sc)};
        summary.push_back({"solver", "dp_outage_case4_causal"});
        summary.push_back({"critical_point", format_number(ofn.critical_point())});
        add_policy_run(files, summary, sc, policy, gen, trials_of(o, sc));
        break;
      }
      const auto profile = sc.profile();
      const std::vector<double> g(profile.horizon(), mean_gain(fading));
      if (sc.utility == UtilityKind::kOutage) {
        const OutageFn ofn(fading, sc.required_rate);
        const auto sol = solve_outage_case4_noncausal(profile, ofn);
        std::vector<double> u;
        for (double p : sol.schedule.powers.flat()) u.push_back(1.0 - ofn(p));
        add_schedule(files, profile, sol.schedule, g, u);
        summary.push_back({"solver", "save_then_transmit"});
        summary.push_back({"utility", "outage"});
        summary.push_back({"total_utility", format_number(sol.utility)});
        summary.push_back({"expected_outages", format_number(sol.expected_outages)});
        summary.push_back({"critical_point", format_number(ofn.critical_point())});
        summary.push_back({"saving_blocks", std::to_string(sol.saving_blocks)});
        summary.push_back({"max_violation", format_number(max_violation(sol.schedule, profile))});
      } else {
        const auto sol = solve_ergodic_case4(profile, fading);
        std::vector<double> u;
        for (double p : sol.schedule.powers.flat()) u.push_back(ergodic_rate(fading, p));
        add_schedule(files, profile, sol.schedule, g, u);
        summary.push_back({"solver", "ergodic_equalization"});
        summary.push_back({"utility", "ergodic"});
        summary.push_back({"total_utility", format_number(sol.utility)});
        summary.push_back({"kkt_residual", format_number(sol.kkt_residual)});
        summary.push_back({"max_violation", format_number(max_violation(sol.schedule, profile))});
      }
      break;
    }
  }
  files["summary.csv"] = summary_csv(summary);
  return files;
}

struct OracleCheck {
  std::string name;
  double solver = 0.0;
  double oracle = 0.0;
};

std::vector<OracleCheck> oracle_checks(const Scenario& sc, double step) {
  const GridSpec grid{step};
  if (sc.relay) {
    const auto rs = sc.relay_scenario();
    return {{"throughput", solve_relay(rs).throughput, relay_grid_oracle(rs).throughput}};
  }
  switch (sc.knowledge_case) {
    case 1: {
      const auto profile = sc.profile();
      const auto trace = sc.channel_trace();
      if (sc.utility == UtilityKind::kThroughput) {
        return {{"total_utility", solve_throughput_case1(profile, trace).utility,
                 brute_force_offline(profile, trace, Throughput{}, grid).utility}};
      }
      return {{"outages", static_cast<double>(solve_outage_case1(profile, trace, sc.required_rate).outages),
               static_cast<double>(brute_force_serve_sets(profile, trace, sc.required_rate).outages)}};
    }
    case 2:
    case 3: {
      const auto spec = sc.utility_spec();
      DpPolicy policy = sc.knowledge_case == 2
                            ? solve_dp_case2(sc.stochastic_model(), spec, dp_options(sc))
                            : solve_dp_case3(sc.profile(), *sc.discrete_gains, spec, dp_options(sc));
      const PolicyProblem problem{policy.chain, policy.blocks_per_eh, policy.gains, spec, policy.grid};
      return {{"expected_utility", policy.expected_value, brute_force_policies(problem)}};
    }
    default: {
      if (!sc.eh_rates) throw ConfigError("no oracle for case 4 with a random EH process");
      const auto profile = sc.profile();
      if (sc.utility == UtilityKind::kOutage) {
        const OutageFn ofn(*sc.fading, sc.required_rate);
        const double oracle = brute_force_offline(profile, sc.utility_spec(), grid).utility;
        if (sc.esit == Esit::kCausal) {
          return {{"expected_utility", solve_dp_outage_case4_causal(profile, ofn, dp_options(sc)).expected_value,
                   oracle}};
        }
        return {{"total_utility", solve_outage_case4_noncausal(profile, ofn).utility, oracle}};
      }
      return {{"total_utility", solve_ergodic_case4(profile, *sc.fading).utility,
               brute_force_offline(profile, ErgodicThroughput{*sc.fading}, grid).utility}};
    }
  }
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SizeGuardError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitResourceError;
  } catch (const InfeasibleError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitResourceError;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::domain_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitResourceError;
  }
}

}  // namespace

int cmd_solve(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(o.scenario);
    const auto start = std::chrono::steady_clock::now();
    Files files = solve_files(sc, o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    files["timing.csv"] = write_csv({"metric", "value"}, {{"wall_seconds", format_number(wall)}});
    write_files(o.out_dir, files);
    fmt::print(out, "solved case {} -> {}\n", case_label(sc), o.out_dir);
    return static_cast<int>(kExitOk);
  });
}

int cmd_compare(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(o.scenario);
    if (sc.relay) throw ScenarioError(o.scenario, 0, "compare does not handle relay scenarios");
    std::vector<std::string> names = o.policies.empty() ? sc.solver.policies : o.policies;
    if (names.empty()) names = {"offline-case1", "dp-case3", "dp-case2", "myopic"};
    std::vector<PolicyKind> policies;
    for (const auto& n : names) {
      const auto p = parse_policy(n);
      if (!p) throw ScenarioError(o.scenario, 0, "unknown policy '" + n + "'");
      policies.push_back(*p);
    }
    const ExperimentScenario ex{sc.stochastic_model(), sc.utility_spec(), dp_options(sc)};
    auto reports = run_experiment(std::span(&ex, 1), policies, trials_of(o, sc), seed_of(o, sc));
    std::stable_sort(reports.begin(), reports.end(),
                     [](const auto& a, const auto& b) { return a.mean > b.mean; });
    std::vector<CsvRow> rows;
    for (const auto& r : reports) {
      rows.push_back({r.policy, format_number(r.mean), format_number(r.std_error), std::to_string(r.trials),
                      std::to_string(r.seed), r.digest});
      fmt::print(out, "{:<14} mean {:.6f} +/- {:.6f}\n", r.policy, r.mean, r.std_error);
    }
    write_files(o.out_dir, {{"compare.csv", write_csv({"policy", "mean", "stderr", "trials", "seed", "digest"}, rows)}});
    return static_cast<int>(kExitOk);
  });
}

int cmd_oracle(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(o.scenario);
    const double step = o.grid_step.value_or(sc.solver.oracle_step);
    const double tol = o.tol.value_or(sc.solver.tol);
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    const auto checks = oracle_checks(sc, step);
    std::vector<CsvRow> rows;
    bool ok = true;
    for (const auto& c : checks) {
      const double delta = c.solver - c.oracle;
      const bool within = std::abs(delta) <= tol;
      ok = ok && within;
      rows.push_back({c.name, format_number(c.solver), format_number(c.oracle), format_number(delta),
                      format_number(tol), within ? "true" : "false"});
      fmt::print(out, "delta {} = {:.3e} (tolerance {:.3e}) {}\n", c.name, delta, tol, within ? "ok" : "EXCEEDED");
    }
    write_files(o.out_dir, {{"oracle.csv", write_csv({"check", "solver", "oracle", "delta", "tolerance", "within"}, rows)}});
    return static_cast<int>(ok ? kExitOk : kExitOracleMismatch);
  });
}

int cmd_validate(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(o.scenario);
    fmt::print(out, "ok: case {}, M = {}, N = {}\n", case_label(sc), sc.num_eh_blocks, sc.blocks_per_eh);
    return static_cast<int>(kExitOk);
  });
}

}  // namespace ehopt

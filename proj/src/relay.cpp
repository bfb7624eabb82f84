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

#include "ehopt/relay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "ehopt/errors.hpp"
#include "ehopt/offline.hpp"
#include "ehopt/staircase.hpp"

namespace ehopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RelaySolution empty_solution(const RelayScenario& sc) {
  RelaySolution out;
  out.source_schedule = PowerSchedule::zeros(sc.source);
  out.relay_schedule = PowerSchedule::zeros(sc.relay);
  out.transfers = BlockGrid(sc.source.num_eh_blocks(), sc.source.blocks_per_eh());
  return out;
}

// Fills powers from a common per-block SNR.
void set_balanced(const RelayScenario& sc, std::span<const double> snr, RelaySolution& out) {
  out.throughput = 0.0;
  for (std::size_t t = 0; t < snr.size(); ++t) {
    out.source_schedule.powers[t] = snr[t] / sc.g_sr;
    out.relay_schedule.powers[t] = snr[t] / sc.g_rd;
    out.throughput += std::log2(1.0 + snr[t]);
  }
}

// Largest minimum of a per-block rate given cumulative bit and energy budgets:
// forward sweep closing the epoch with the lowest affordable common rate.
std::vector<double> forward_rates(std::span<const double> bits, std::span<const double> energy,
                                  double gain) {
  const std::size_t horizon = bits.size();
  std::vector<double> rate(horizon, 0.0);
  std::size_t start = 0;
  double used_bits = 0.0;
  double used_energy = 0.0;
  while (start < horizon) {
    double best = kInf;
    std::size_t best_end = start;
    for (std::size_t end = start; end < horizon; ++end) {
      const double len = static_cast<double>(end - start + 1);
      const double by_bits = (bits[end] - used_bits) / len;
      const double by_energy = std::log2(1.0 + gain * std::max(0.0, energy[end] - used_energy) / len);
      const double level = std::max(0.0, std::min(by_bits, by_energy));
      if (level <= best + 1e-12 * std::max(1.0, std::abs(best)) || std::isinf(best)) {
        best = level;
        best_end = end;
      }
    }
    const double len = static_cast<double>(best_end - start + 1);
    for (std::size_t t = start; t <= best_end; ++t) rate[t] = best;
    used_bits += best * len;
    used_energy += (std::exp2(best) - 1.0) / gain * len;
    start = best_end + 1;
  }
  return rate;
}

// KKT residual of forward_rates: no decreases, increases only where one of the
// budgets binds, and the final block binds one of them.
double forward_rates_residual(std::span<const double> rate, std::span<const double> bits,
                              std::span<const double> energy, double gain) {
  double residual = 0.0;
  double used_bits = 0.0;
  double used_energy = 0.0;
  for (std::size_t t = 0; t < rate.size(); ++t) {
    used_bits += rate[t];
    used_energy += (std::exp2(rate[t]) - 1.0) / gain;
    const double slack = std::min(bits[t] - used_bits, gain * (energy[t] - used_energy));
    residual = std::max(residual, -slack);
    const bool last = t + 1 == rate.size();
    if (!last) residual = std::max(residual, rate[t] - rate[t + 1]);
    if (last || rate[t + 1] > rate[t] + 1e-9) residual = std::max(residual, std::max(0.0, slack));
  }
  return residual;
}

// Maximizes sum log2(1 + s_t) over the common SNR s >= 0 under
//   S_t / g_sr + X_t <= H_S(t),   X_t >= (S_tau / g_rd - H_R(tau)) / alpha for tau <= t,
// with S the cumulative SNR and X the cumulative transfer; eliminating X leaves
// linear constraints in s. Solved with a log-barrier Newton method.
class SharingProgram {
 public:
  SharingProgram(const RelayScenario& sc, double alpha)
      : hs_(sc.source.cumulative_harvest()),
        hr_(sc.relay.cumulative_harvest()),
        a_(1.0 / sc.g_sr),
        b_(1.0 / (alpha * sc.g_rd)),
        alpha_(alpha) {
    const std::size_t horizon = hs_.size();
    first_ = 0;
    while (first_ < horizon && !(hs_[first_] > 0.0)) ++first_;
    for (std::size_t t = first_; t < horizon; ++t) {
      rows_.push_back({t, horizon, hs_[t]});  // no relay term
      for (std::size_t tau = first_; tau <= t; ++tau) rows_.push_back({t, tau, hs_[t] + hr_[tau] / alpha_});
    }
  }

  std::vector<double> solve(double* residual) {
    const std::size_t horizon = hs_.size();
    std::vector<double> snr(horizon, 0.0);
    const std::size_t n = horizon - first_;
    *residual = 0.0;
    if (n == 0) return snr;

    // Strictly feasible start: equal SNR at half the tightest row's limit.
    double start = kInf;
    for (const Row& r : rows_) {
      const double weight = a_ * static_cast<double>(r.t - first_ + 1) +
                            (r.tau < horizon ? b_ * static_cast<double>(r.tau - first_ + 1) : 0.0);
      start = std::min(start, r.limit / weight);
    }
    Eigen::VectorXd s = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 0.5 * start);

    const double m = static_cast<double>(rows_.size() + n);
    double mu = 1.0;
    Eigen::VectorXd grad;
    while (true) {
      for (int it = 0; it < 200; ++it) {
        Eigen::MatrixXd hess;
        if (!derivatives(s, mu, grad, hess)) break;
        const Eigen::VectorXd step = hess.llt().solve(-grad);
        const double decrement = -grad.dot(step);
        if (!(decrement > 1e-16)) break;
        const double f0 = barrier(s, mu);
        double t = 1.0;
        Eigen::VectorXd next;
        double f1 = kInf;
        for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
          next = s + t * step;
          f1 = barrier(next, mu);
          if (f1 <= f0 - 0.25 * t * decrement) break;
        }
        if (!(f1 < f0)) break;
        s = next;
      }
      if (mu * m < 1e-13) break;
      mu *= 0.1;
    }
    Eigen::MatrixXd hess;
    derivatives(s, mu, grad, hess);
    *residual = std::max(mu * m, grad.lpNorm<Eigen::Infinity>() * mu);
    for (std::size_t j = 0; j < n; ++j) snr[first_ + j] = s[static_cast<Eigen::Index>(j)];
    return snr;
  }

 private:
  struct Row {
    std::size_t t;
    std::size_t tau;  // == horizon when the row has no relay term
    double limit;
  };

  std::vector<double> prefix(const Eigen::VectorXd& s) const {
    std::vector<double> cum(hs_.size(), 0.0);
    double acc = 0.0;
    for (std::size_t t = first_; t < hs_.size(); ++t) {
      acc += s[static_cast<Eigen::Index>(t - first_)];
      cum[t] = acc;
    }
    return cum;
  }

  double slack(const Row& r, const std::vector<double>& cum) const {
    return r.limit - a_ * cum[r.t] - (r.tau < hs_.size() ? b_ * cum[r.tau] : 0.0);
  }

  // -sum log2(1 + s) / mu - sum log(slack) - sum log(s); +inf outside.
  double barrier(const Eigen::VectorXd& s, double mu) const {
    double f = 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (!(s[j] > 0.0)) return kInf;
      f -= std::log2(1.0 + s[j]) / mu + std::log(s[j]);
    }
    const auto cum = prefix(s);
    for (const Row& r : rows_) {
      const double sl = slack(r, cum);
      if (!(sl > 0.0)) return kInf;
      f -= std::log(sl);
    }
    return f;
  }

  bool derivatives(const Eigen::VectorXd& s, double mu, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const Eigen::Index n = s.size();
    grad = Eigen::VectorXd::Zero(n);
    hess = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = 1.0 + s[j];
      grad[j] += -1.0 / (u * std::log(2.0) * mu) - 1.0 / s[j];
      hess(j, j) += 1.0 / (u * u * std::log(2.0) * mu) + 1.0 / (s[j] * s[j]);
    }
    const auto cum = prefix(s);
    Eigen::VectorXd a(n);
    for (const Row& r : rows_) {
      const double sl = slack(r, cum);
      if (!(sl > 0.0)) return false;
      for (Eigen::Index j = 0; j < n; ++j) {
        const std::size_t t = first_ + static_cast<std::size_t>(j);
        a[j] = (t <= r.t ? a_ : 0.0) + (r.tau < hs_.size() && t <= r.tau ? b_ : 0.0);
      }
      grad += a / sl;
      hess.noalias() += (a * a.transpose()) / (sl * sl);
    }
    return true;
  }

  std::vector<double> hs_;
  std::vector<double> hr_;
  double a_;
  double b_;
  double alpha_;
  std::size_t first_ = 0;
  std::vector<Row> rows_;
};

}  // namespace

RelaySolution solve_relay_delay_constrained(const RelayScenario& sc) {
  validate(sc);
  RelaySolution out = empty_solution(sc);
  if (sc.g_sr <= 0.0 || sc.g_rd <= 0.0) return out;
  const auto hs = sc.source.cumulative_harvest();
  const auto hr = sc.relay.cumulative_harvest();
  std::vector<double> caps(hs.size());
  for (std::size_t t = 0; t < caps.size(); ++t) caps[t] = std::min(sc.g_sr * hs[t], sc.g_rd * hr[t]);
  const auto snr = equalize_cumulative(caps);
  set_balanced(sc, snr, out);
  out.kkt_residual = equalization_residual(snr, caps);
  return out;
}

RelaySolution solve_relay_delay_tolerant(const RelayScenario& sc) {
  validate(sc);
  RelaySolution out = empty_solution(sc);
  if (sc.g_sr <= 0.0 || sc.g_rd <= 0.0) return out;
  const auto source = solve_throughput_case1(sc.source, ChannelTrace::constant(sc.source, sc.g_sr));
  out.source_schedule = source.schedule;

  const auto in_rates = hop_rates(out.source_schedule, sc.g_sr);
  std::vector<double> bits(in_rates.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < bits.size(); ++t) bits[t] = acc += in_rates[t];
  const auto energy = sc.relay.cumulative_harvest();
  const auto rate = forward_rates(bits, energy, sc.g_rd);
  for (std::size_t t = 0; t < rate.size(); ++t) {
    out.relay_schedule.powers[t] = (std::exp2(rate[t]) - 1.0) / sc.g_rd;
    out.throughput += rate[t];
  }
  out.kkt_residual = std::max(source.kkt_residual, forward_rates_residual(rate, bits, energy, sc.g_rd));
  return out;
}

RelaySolution solve_relay_energy_sharing(const RelayScenario& sc, bool forbid_transfers) {
  validate(sc);
  const auto* share = std::get_if<OneWaySharing>(&sc.sharing);
  if (share == nullptr) throw ConfigError("scenario has no energy sharing link");
  if (sc.traffic != Traffic::kDelayConstrained) {
    throw ConfigError("energy sharing is solved for delay-constrained traffic");
  }
  if (forbid_transfers) return solve_relay_delay_constrained(sc);
  RelaySolution out = empty_solution(sc);
  if (sc.g_sr <= 0.0 || sc.g_rd <= 0.0) return out;

  SharingProgram program(sc, share->efficiency);
  const auto snr = program.solve(&out.kkt_residual);
  set_balanced(sc, snr, out);

  // Send energy only when the relay would otherwise run short.
  const auto hr = sc.relay.cumulative_harvest();
  double used = 0.0;
  double need = 0.0;
  double sent = 0.0;
  for (std::size_t t = 0; t < snr.size(); ++t) {
    used += out.relay_schedule.powers[t];
    need = std::max(need, (used - hr[t]) / share->efficiency);
    out.transfers[t] = need - sent;
    sent = need;
  }
  return out;
}

RelaySolution solve_relay(const RelayScenario& sc) {
  if (std::holds_alternative<OneWaySharing>(sc.sharing)) return solve_relay_energy_sharing(sc);
  return sc.traffic == Traffic::kDelayTolerant ? solve_relay_delay_tolerant(sc)
                                               : solve_relay_delay_constrained(sc);
}

}  // namespace ehopt

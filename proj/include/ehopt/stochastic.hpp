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

#ifndef EHOPT_STOCHASTIC_HPP
#define EHOPT_STOCHASTIC_HPP

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "ehopt/fading.hpp"
#include "ehopt/model.hpp"

namespace ehopt {

/// Finite distribution over strictly increasing support points.
struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> probs;
};

/// Throws ConfigError unless probabilities sum to 1 within 1e-12 and the
/// support is strictly increasing.
void validate(const DiscreteDistribution& dist);

/// EH rates drawn independently per EH block.
struct IidEh {
  DiscreteDistribution rates;
};

/// EH rate follows a Markov chain over `levels`, stepping once per EH block.
struct MarkovEh {
  std::vector<double> levels;
  std::vector<double> initial;
  std::vector<std::vector<double>> transition;  // transition[i][j] = P(j | i)
};

using EhProcess = std::variant<IidEh, MarkovEh>;

/// I.i.d. per-block gains: either a finite grid (the transmitter can index its
/// observation) or a continuous fading model.
using ChannelProcess = std::variant<DiscreteDistribution, FadingModel>;

struct StochasticModel {
  std::size_t num_eh_blocks = 1;
  std::size_t blocks_per_eh = 1;
  EhProcess eh;
  ChannelProcess channel;
};

void validate(const EhProcess& eh);
void validate(const StochasticModel& model);

/// Largest EH rate the process can produce.
double max_rate(const EhProcess& eh);

/// Harvest levels as a time-varying finite Markov chain with one step per EH
/// block; covers i.i.d., stationary Markov, and known deterministic profiles.
struct EhChain {
  std::vector<std::vector<double>> rates;                     // rates[m][i]
  std::vector<double> initial;                                // over states of block 0
  std::vector<std::vector<std::vector<double>>> transition;   // [m][i][j], m -> m + 1

  std::size_t num_eh_blocks() const { return rates.size(); }
  std::size_t states(std::size_t m) const { return rates[m].size(); }
};

EhChain make_eh_chain(const EhProcess& eh, std::size_t num_eh_blocks);
/// Single-state chain for energy known in advance.
EhChain make_eh_chain(const EhProfile& profile);

/// Uniform battery/action grid {0, step, ..., (levels - 1) * step}.
struct Discretization {
  double step = 1.0;
  std::size_t levels = 2;

  /// `points` grid points spanning [0, max_energy].
  static Discretization covering(double max_energy, std::size_t points = 201);
  /// Grid with a fixed step reaching at least max_energy.
  static Discretization with_step(double step, double max_energy);

  double max_energy() const { return step * static_cast<double>(levels - 1); }
  /// Whole grid steps contained in `energy` (rounded down, 1e-9 slack).
  std::size_t units(double energy) const;
  double energy(std::size_t units) const { return step * static_cast<double>(units); }
};

}  // namespace ehopt

#endif  // EHOPT_STOCHASTIC_HPP

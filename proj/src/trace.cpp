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

#include "ehopt/trace.hpp"

#include "ehopt/errors.hpp"

namespace ehopt {

TraceGenerator make_generator(const StochasticModel& model, std::uint64_t seed) {
  validate(model);
  return {model.num_eh_blocks, model.blocks_per_eh, model.eh, model.channel, seed};
}

std::size_t sample_index(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

TraceSample generate_trace(const TraceGenerator& gen, std::uint64_t trial) {
  if (gen.num_eh_blocks == 0 || gen.blocks_per_eh == 0) {
    throw ConfigError("trace generator needs M >= 1 and N >= 1");
  }
  CounterRng rng(gen.seed, trial);
  const std::size_t m_blocks = gen.num_eh_blocks;

  std::vector<double> rates(m_blocks);
  std::vector<std::size_t> eh_states(m_blocks, 0);
  if (const auto* fixed = std::get_if<EhProfile>(&gen.eh)) {
    if (fixed->num_eh_blocks() != m_blocks || fixed->blocks_per_eh() != gen.blocks_per_eh) {
      throw ShapeError("fixed EH profile does not match the generator horizon");
    }
    rates.assign(fixed->rates().begin(), fixed->rates().end());
  } else {
    const EhChain chain = make_eh_chain(std::get<EhProcess>(gen.eh), m_blocks);
    std::size_t state = sample_index(chain.initial, rng.uniform());
    for (std::size_t m = 0; m < m_blocks; ++m) {
      if (m > 0) state = sample_index(chain.transition[m - 1][state], rng.uniform());
      eh_states[m] = state;
      rates[m] = chain.rates[m][state];
    }
  }

  BlockGrid gains(m_blocks, gen.blocks_per_eh);
  std::vector<std::size_t> gain_states;
  if (const auto* grid = std::get_if<DiscreteDistribution>(&gen.channel)) {
    gain_states.resize(gains.size());
    for (std::size_t t = 0; t < gains.size(); ++t) {
      gain_states[t] = sample_index(grid->probs, rng.uniform());
      gains[t] = grid->values[gain_states[t]];
    }
  } else {
    const auto& fading = std::get<FadingModel>(gen.channel);
    const bool two_uniforms = std::holds_alternative<DoubleRayleigh>(fading);
    for (std::size_t t = 0; t < gains.size(); ++t) {
      const double u1 = rng.uniform();
      const double u2 = two_uniforms ? rng.uniform() : 0.5;
      gains[t] = sample_gain(fading, u1, u2);
    }
  }

  return {EhProfile(gen.blocks_per_eh, std::move(rates)), ChannelTrace(std::move(gains)),
          std::move(eh_states), std::move(gain_states)};
}

}  // namespace ehopt

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

#include "ehopt/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numeric>

#include "ehopt/errors.hpp"

namespace ehopt {
namespace {

void check_probabilities(const std::vector<double>& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError(std::string(what) + ": negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError(std::string(what) + ": probabilities must sum to 1");
  }
}

void check_sorted(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string(what) + ": empty support");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(std::string(what) + ": support must be strictly sorted");
  }
}

}  // namespace

void validate(const DiscreteDistribution& dist) {
  check_sorted(dist.values, "distribution");
  if (dist.probs.size() != dist.values.size()) {
    throw ConfigError("distribution: values and probabilities differ in length");
  }
  check_probabilities(dist.probs, "distribution");
  for (double v : dist.values) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("distribution: support must be >= 0");
  }
}

void validate(const EhProcess& eh) {
  if (const auto* iid = std::get_if<IidEh>(&eh)) {
    validate(iid->rates);
    return;
  }
  const auto& mk = std::get<MarkovEh>(eh);
  check_sorted(mk.levels, "markov EH levels");
  for (double v : mk.levels) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("markov EH levels must be >= 0");
  }
  if (mk.initial.size() != mk.levels.size() || mk.transition.size() != mk.levels.size()) {
    throw ConfigError("markov EH: initial/transition sizes must match levels");
  }
  check_probabilities(mk.initial, "markov EH initial");
  for (const auto& row : mk.transition) {
    if (row.size() != mk.levels.size()) throw ConfigError("markov EH: transition must be square");
    check_probabilities(row, "markov EH transition row");
  }
}

void validate(const StochasticModel& model) {
  if (model.num_eh_blocks == 0 || model.blocks_per_eh == 0) {
    throw ConfigError("horizon must have M >= 1 and N >= 1");
  }
  validate(model.eh);
  if (const auto* d = std::get_if<DiscreteDistribution>(&model.channel)) {
    validate(*d);
  } else {
    validate(std::get<FadingModel>(model.channel));
  }
}

double max_rate(const EhProcess& eh) {
  if (const auto* iid = std::get_if<IidEh>(&eh)) return iid->rates.values.back();
  return std::get<MarkovEh>(eh).levels.back();
}

EhChain make_eh_chain(const EhProcess& eh, std::size_t num_eh_blocks) {
  validate(eh);
  if (num_eh_blocks == 0) throw ConfigError("at least one EH block is required");
  EhChain chain;
  if (const auto* iid = std::get_if<IidEh>(&eh)) {
    chain.rates.assign(num_eh_blocks, iid->rates.values);
    chain.initial = iid->rates.probs;
    const std::size_t k = iid->rates.values.size();
    chain.transition.assign(num_eh_blocks - 1,
                            std::vector<std::vector<double>>(k, iid->rates.probs));
  } else {
    const auto& mk = std::get<MarkovEh>(eh);
    chain.rates.assign(num_eh_blocks, mk.levels);
    chain.initial = mk.initial;
    chain.transition.assign(num_eh_blocks - 1, mk.transition);
  }
  return chain;
}

EhChain make_eh_chain(const EhProfile& profile) {
  EhChain chain;
  for (double e : profile.rates()) chain.rates.push_back({e});
  chain.initial = {1.0};
  chain.transition.assign(profile.num_eh_blocks() - 1, {{1.0}});
  return chain;
}

Discretization Discretization::covering(double max_energy, std::size_t points) {
  if (points < 2) throw ConfigError("a battery grid needs at least two points");
  if (!std::isfinite(max_energy) || max_energy < 0.0) throw ConfigError("invalid grid range");
  // A zero range still needs a positive step.
  const double step = max_energy > 0.0 ? max_energy / static_cast<double>(points - 1) : 1.0;
  return {step, points};
}

Discretization Discretization::with_step(double step, double max_energy) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be positive");
  if (!std::isfinite(max_energy) || max_energy < 0.0) throw ConfigError("invalid grid range");
  const auto n = static_cast<std::size_t>(std::ceil(max_energy / step - 1e-9));
  return {step, std::max<std::size_t>(n, 1) + 1};
}

std::size_t Discretization::units(double energy) const {
  if (!(energy > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(energy / step + 1e-9));
}

}  // namespace ehopt

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

#ifndef EHOPT_TRACE_HPP
#define EHOPT_TRACE_HPP

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "ehopt/model.hpp"
#include "ehopt/rng.hpp"
#include "ehopt/stochastic.hpp"

namespace ehopt {

/// EH rates are either fixed in advance or drawn per EH block from a process.
using EhSource = std::variant<EhProfile, EhProcess>;

/// Two-time-scale trace source: gains are redrawn every communication block,
/// EH rates every EH block.
struct TraceGenerator {
  std::size_t num_eh_blocks = 1;
  std::size_t blocks_per_eh = 1;
  EhSource eh;
  ChannelProcess channel;
  std::uint64_t seed = 0;
};

TraceGenerator make_generator(const StochasticModel& model, std::uint64_t seed);

struct TraceSample {
  EhProfile profile;
  ChannelTrace trace;
  /// Per EH block: index of the drawn rate in the process support (0 when fixed).
  std::vector<std::size_t> eh_states;
  /// Per communication block: index into a discrete gain grid; empty for
  /// continuous fading.
  std::vector<std::size_t> gain_states;
};

/// Deterministic in (generator.seed, trial); trials use disjoint RNG streams.
TraceSample generate_trace(const TraceGenerator& generator, std::uint64_t trial);

/// Inverse-CDF draw from a finite distribution; returns the support index.
std::size_t sample_index(const std::vector<double>& probs, double u);

}  // namespace ehopt

#endif  // EHOPT_TRACE_HPP

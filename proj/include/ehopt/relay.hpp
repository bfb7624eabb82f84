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

#ifndef EHOPT_RELAY_HPP
#define EHOPT_RELAY_HPP

#include "ehopt/relay_model.hpp"

namespace ehopt {

/// Per-block end-to-end rate min(source hop, relay hop), both nodes limited by
/// their own harvest. Both hops run at the same SNR in every block.
RelaySolution solve_relay_delay_constrained(const RelayScenario& scenario);

/// The relay may buffer: the source maximizes bits into the relay, then the
/// relay forwards as much as its energy and the received bits allow.
RelaySolution solve_relay_delay_tolerant(const RelayScenario& scenario);

/// Delay-constrained traffic with one-way source-to-relay energy transfer.
/// With `forbid_transfers` the result is the no-sharing optimum.
RelaySolution solve_relay_energy_sharing(const RelayScenario& scenario,
                                         bool forbid_transfers = false);

/// Dispatches on the scenario's traffic and sharing fields.
RelaySolution solve_relay(const RelayScenario& scenario);

}  // namespace ehopt

#endif  // EHOPT_RELAY_HPP

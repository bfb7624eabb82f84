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

#ifndef EHOPT_STAIRCASE_HPP
#define EHOPT_STAIRCASE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace ehopt {

// Allocation kernels for problems of the form
//   maximize sum_t f_t(x_t)  s.t.  sum_{s<=t} x_s <= caps[t],  x >= 0,
// solved by a forward sweep that repeatedly closes the epoch whose feasible
// common level is lowest (ties go to the longest epoch).

struct Waterfill {
  std::vector<double> powers;
  /// Common level nu with p_i = max(0, nu - 1/g_i); +inf when no gain is positive.
  double level = 0.0;
};

/// Maximizes sum log2(1 + g_i p_i) subject to sum p_i <= budget. Zero gains
/// get zero power. The level is exact (sorted active set), not iterative.
Waterfill waterfill(double budget, std::span<const double> gains);

/// Powers only.
std::vector<double> waterfill_budget(double budget, std::span<const double> gains);

struct Staircase {
  std::vector<double> powers;
  std::vector<double> levels;          // per block; +inf in epochs with no usable gain
  std::vector<std::size_t> epoch_ends;  // last block of each epoch (inclusive)
};

/// Cumulative-constrained water-filling. `caps` must be non-decreasing.
Staircase staircase_waterfill(std::span<const double> gains, std::span<const double> caps);

/// Same problem with one identical concave utility in every block; the result
/// does not depend on which utility. `caps` may dip but must stay >= 0.
std::vector<double> equalize_cumulative(std::span<const double> caps,
                                        std::vector<std::size_t>* epoch_ends = nullptr);

/// Optimality residual of an equalized allocation: decreases across blocks,
/// increases at non-tight blocks, unspent terminal energy, and overdraw.
double equalization_residual(std::span<const double> x, std::span<const double> caps,
                             double tol = 1e-9);

}  // namespace ehopt

#endif  // EHOPT_STAIRCASE_HPP

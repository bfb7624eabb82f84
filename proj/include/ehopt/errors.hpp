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

#ifndef EHOPT_ERRORS_HPP
#define EHOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ehopt {

/// Inconsistent or incomplete problem configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid dimensions that do not agree with each other.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive search or table would exceed its evaluation budget.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// No schedule satisfies the energy constraints of the request.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehopt

#endif  // EHOPT_ERRORS_HPP

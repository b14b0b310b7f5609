// Copyright 2026 The annealvi Authors
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

#ifndef ANNEALVI_ERRORS_HPP
#define ANNEALVI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace annealvi {

// A caller broke a documented precondition (dimension mismatch, bad range).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// Malformed configuration file or unknown/invalid key.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A Monte Carlo estimate could not be formed (all chains divergent,
// degenerate weights).
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Filesystem failures and malformed binary inputs.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace annealvi

#endif  // ANNEALVI_ERRORS_HPP

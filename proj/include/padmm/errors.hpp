// Copyright 2026 The padmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PADMM_ERRORS_HPP_
#define PADMM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace padmm {

// Base class for all padmm errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration file, unknown key, or out-of-range value.  Exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input data (adult rows, edge lists, cache files).  Exit code 2.
struct ParseError : Error {
  using Error::Error;
};

// A graph invariant (symmetry, no self-loops, connectivity) is violated.
struct TopologyError : Error {
  using Error::Error;
};

// Vector dimensions do not agree.
struct ShapeError : Error {
  using Error::Error;
};

// A numeric parameter is outside its valid range.
struct ParameterError : Error {
  using Error::Error;
};

// A node partition is empty or cannot be formed.
struct PartitionError : Error {
  using Error::Error;
};

// The synchronous exchange protocol was violated (missing broadcast,
// wrong inner-history length).
struct ProtocolError : Error {
  using Error::Error;
};

// An iterative solver hit its iteration cap before reaching tolerance.
// Exit code 3.
struct ConvergenceError : Error {
  using Error::Error;
};

// A run consumed more private steps than the calibrated budget.  Exit code 4.
struct BudgetExceededError : Error {
  using Error::Error;
};

}  // namespace padmm

#endif  // PADMM_ERRORS_HPP_

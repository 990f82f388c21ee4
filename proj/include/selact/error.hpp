// Copyright 2026 The selact Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file error.hpp
 * Exception types thrown across the library. Each maps to one failure
 * class so callers (the CLI in particular) can pick an exit code.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace selact {

/// Base class of every error raised by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dimension or count outside the supported range.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Qubit or parameter index out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Malformed JSON or otherwise unreadable document.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Well-formed document whose content violates the Hamiltonian schema.
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// A state does not satisfy a precondition (e.g. not unit norm).
class StateError : public Error {
  public:
    using Error::Error;
};

/// Invalid strategy or run configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Non-finite value met during optimization.
class NumericError : public Error {
  public:
    using Error::Error;
};

class ArgumentError : public Error {
  public:
    using Error::Error;
};

class AggregationError : public Error {
  public:
    using Error::Error;
};

/// Iterative eigensolver hit its iteration cap. Carries the best estimate.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}

    [[nodiscard]] double bestEstimate() const noexcept {
        return best_estimate_;
    }

  private:
    double best_estimate_;
};

} // namespace selact

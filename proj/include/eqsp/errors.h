// Copyright 2026 The eqsp Authors
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

#ifndef EQSP_ERRORS_H
#define EQSP_ERRORS_H

#include <stdexcept>
#include <string>

namespace eqsp {

/// Argument outside the mathematical domain of a formula.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Invalid configuration (bad grid size, empty seed range, unknown key...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Problem too large for a dense method.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Numerical breakdown, e.g. a likelihood that vanishes on the whole grid.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Not enough data for a statistic (fit with < 3 points, empty records).
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace eqsp

#endif

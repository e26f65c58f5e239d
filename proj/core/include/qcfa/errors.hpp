// Copyright 2026 The qcfa-lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qcfa {

/// Caller violated a documented precondition (bad dimensions, parameters out
/// of range, malformed machine descriptions). The CLI maps this to exit 2.
class UsageError : public std::invalid_argument {
  public:
    explicit UsageError(const std::string &what) : std::invalid_argument(what) {}
};

/// A state that validated inputs can never reach, e.g. a measurement whose
/// outcome probabilities are all zero or a head leaving the tape.
class InternalError : public std::logic_error {
  public:
    explicit InternalError(const std::string &what) : std::logic_error(what) {}
};

/// Reading or writing a file failed. The CLI maps this to exit 3.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

/// Numeric tolerances shared by every validator. Defaults can be overridden
/// per call by passing a modified copy.
struct Tolerances {
    double validation = 1e-9;
    double identity = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace qcfa

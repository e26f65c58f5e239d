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

#include <string>
#include <string_view>

#include "qcfa/machines.hpp"

namespace qcfa {

/// Machine interchange format (JSON).
///
/// Top level: {"kind": "pfa2" | "qcfa2", "alphabet", "states", "initial",
/// "accepting", "rejecting", "loop_states", "transitions"}; QCFA files add
/// "basis" and "initial_quantum". Each transition is {state, symbol, action}.
/// PFA actions are {"distribution": [{next, move, probability: {num, den}}]};
/// QCFA actions are {"unitary": M, "successors": [{next, move}]} or
/// {"measurement": {"outcomes", "projectors": [M...]}, "successors": [...]}
/// where M is a row-major array of {re, im}. The left endmarker is written "¢".
std::string machine_to_json(const Machine &m, int indent = 2);

/// Throws UsageError on malformed documents. Operators are loaded unchecked so
/// that validate() can report defects.
Machine machine_from_json(std::string_view text);

Machine load_machine_file(const std::string &path);
void save_machine_file(const Machine &m, const std::string &path);

}  // namespace qcfa

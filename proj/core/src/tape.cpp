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

#include "qcfa/tape.hpp"

#include "qcfa/errors.hpp"

namespace qcfa {

std::string symbol_name(char symbol) {
    if (symbol == kLeftEndmarker) return "\xC2\xA2";  // ¢
    return std::string(1, symbol);
}

char parse_symbol(std::string_view name) {
    if (name == "\xC2\xA2" || name == std::string_view(&kLeftEndmarker, 1)) return kLeftEndmarker;
    if (name.size() != 1) throw UsageError("tape symbol must be a single character: '" + std::string(name) + "'");
    return name.front();
}

Tape::Tape(std::string input) : input_(std::move(input)) {
    for (char ch : input_) {
        if (ch == kLeftEndmarker || ch == kRightEndmarker) {
            throw UsageError("input may not contain endmarker symbols");
        }
    }
}

char Tape::symbol_at(std::size_t pos) const {
    if (pos == 0) return kLeftEndmarker;
    if (pos == right_end()) return kRightEndmarker;
    if (pos > right_end()) {
        throw UsageError("tape position " + std::to_string(pos) + " outside [0, " +
                         std::to_string(right_end()) + "]");
    }
    return input_[pos - 1];
}

}  // namespace qcfa

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

#include <cstddef>
#include <string>
#include <string_view>

namespace qcfa {

/// Internal codes for the endmarkers. Input strings may not contain them.
inline constexpr char kLeftEndmarker = '^';
inline constexpr char kRightEndmarker = '$';

/// Printable name of a tape symbol ("¢" for the left endmarker).
std::string symbol_name(char symbol);
/// Inverse of symbol_name; also accepts the internal code. Throws UsageError.
char parse_symbol(std::string_view name);

/// Read-only input tape: position 0 holds the left endmarker, positions
/// 1..length() hold the input, and length()+1 holds the right endmarker.
class Tape {
  public:
    explicit Tape(std::string input);

    const std::string &input() const { return input_; }
    std::size_t length() const { return input_.size(); }
    std::size_t right_end() const { return input_.size() + 1; }

    char symbol_at(std::size_t pos) const;

  private:
    std::string input_;
};

inline char tape_symbol(const Tape &t, std::size_t pos) { return t.symbol_at(pos); }

}  // namespace qcfa

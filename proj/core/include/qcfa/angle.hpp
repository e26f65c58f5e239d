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

#include <cstdint>
#include <string_view>

namespace qcfa {

/// sqrt(2) to 65 significant digits; the binary constant below is derived from it.
inline constexpr std::string_view kSqrt2Decimal =
    "1.4142135623730950488016887242096980785696718753769480731766797380";

/// floor((sqrt(2) - 1) * 2^128), split into high and low 64-bit words.
inline constexpr std::uint64_t kSqrt2FractionHi = 0x6a09e667f3bcc908ULL;
inline constexpr std::uint64_t kSqrt2FractionLo = 0xb2fb1366ea957d3eULL;

/// k * sqrt(2) modulo 2 as (parity of the integer part, fractional part in
/// [0, 1)). The fractional part is carried with 128 bits before conversion, so
/// the result is accurate to double precision for every 64-bit k.
struct HalfTurns {
    bool odd = false;
    double fraction = 0.0;
    /// Distance from the fractional part to the nearest integer, in [0, 1/2].
    double distance_to_integer = 0.0;
};

HalfTurns sqrt2_multiple(std::uint64_t k);

struct CosSin {
    double cos = 1.0;
    double sin = 0.0;
};

/// cos and sin of k * sqrt(2) * pi.
CosSin sqrt2_pi_rotation(std::int64_t k);

/// sin^2(k * sqrt(2) * pi).
double sin2_sqrt2_pi(std::int64_t k);

}  // namespace qcfa

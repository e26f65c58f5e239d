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

#include "qcfa/angle.hpp"

#include <cmath>
#include <numbers>

namespace qcfa {

namespace {

__extension__ typedef unsigned __int128 U128;

constexpr U128 kFraction = (static_cast<U128>(kSqrt2FractionHi) << 64) | kSqrt2FractionLo;

double to_unit(U128 r) {
    // Top 64 bits are plenty for a double mantissa.
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(r >> 64)), -64) +
           std::ldexp(static_cast<double>(static_cast<std::uint64_t>(r)), -128);
}

std::uint64_t magnitude(std::int64_t k) {
    return k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
}

}  // namespace

HalfTurns sqrt2_multiple(std::uint64_t k) {
    // k * F as a 192-bit product: bits [0, 128) are the fraction, the rest is
    // added to k for the integer part.
    const U128 lo = static_cast<U128>(k) * kSqrt2FractionLo;
    const U128 hi = static_cast<U128>(k) * kSqrt2FractionHi;
    const U128 lo_top = lo >> 64;
    const U128 mid = (hi & ~std::uint64_t{0}) + lo_top;
    const U128 fraction = (mid << 64) | static_cast<std::uint64_t>(lo);
    const U128 integer = (hi >> 64) + (mid >> 64);
    const bool odd = ((static_cast<std::uint64_t>(integer) + k) & 1U) != 0;

    HalfTurns h;
    h.odd = odd;
    h.fraction = to_unit(fraction);
    const U128 complement = static_cast<U128>(0) - fraction;  // 2^128 - fraction
    h.distance_to_integer = to_unit(fraction < complement ? fraction : complement);
    if (fraction == 0) h.distance_to_integer = 0.0;
    return h;
}

CosSin sqrt2_pi_rotation(std::int64_t k) {
    const auto h = sqrt2_multiple(magnitude(k));
    // sin(pi f) = sin(pi g) with g the distance to the nearest integer;
    // cos(pi f) changes sign when f > 1/2.
    const double g = h.distance_to_integer;
    double s = std::sin(std::numbers::pi * g);
    double c = std::cos(std::numbers::pi * g);
    if (h.fraction > 0.5) c = -c;
    if (h.odd) {
        s = -s;
        c = -c;
    }
    if (k < 0) s = -s;
    return {c, s};
}

double sin2_sqrt2_pi(std::int64_t k) {
    const double s = std::sin(std::numbers::pi * sqrt2_multiple(magnitude(k)).distance_to_integer);
    return s * s;
}

}  // namespace qcfa

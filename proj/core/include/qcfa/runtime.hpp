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
#include <span>
#include <string_view>
#include <vector>

#include "qcfa/machines.hpp"

namespace qcfa {

/// Counter-based uniform stream. Draw j of stream (seed, index) is
/// splitmix64(key + (j + 1) * 0x9E3779B97F4A7C15) with
/// key = splitmix64(seed ^ splitmix64(index)), mapped to [0, 1) from the top
/// 53 bits. The mapping is part of the reproducibility contract.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    std::uint64_t draws() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class Outcome { Accept, Reject, Timeout };

std::string_view to_string(Outcome o);

struct TrajectoryResult {
    Outcome outcome = Outcome::Timeout;
    std::uint64_t steps = 0;
    /// Outer-loop iterations started (entries into the machine's loop states).
    std::uint64_t iterations = 0;

    friend bool operator==(const TrajectoryResult &, const TrajectoryResult &) = default;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    std::uint64_t max_steps = 1'000'000;
    /// 0 = one worker per hardware thread. Results do not depend on this.
    unsigned workers = 0;
};

struct Interval {
    double low = 0.0;
    double high = 1.0;

    bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for `successes` out of `n` (95% by default).
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

struct RunStats {
    std::uint64_t trials = 0;
    std::uint64_t accept = 0;
    std::uint64_t reject = 0;
    std::uint64_t timeout = 0;
    double accept_freq = 0.0;
    double reject_freq = 0.0;
    Interval accept_ci;
    Interval reject_ci;
    std::uint64_t total_iterations = 0;
    std::uint64_t total_steps = 0;
    /// Step statistics over halting trajectories only (0 when none halted).
    double mean_steps = 0.0;
    double median_steps = 0.0;
    double p90_steps = 0.0;
    std::uint64_t max_halting_steps = 0;
};

RunStats aggregate(std::span<const TrajectoryResult> results);

/// Runs one trajectory on stream (seed, 0). Validates the machine and input.
TrajectoryResult run_trajectory(const Machine &m, std::string_view input, std::uint64_t seed,
                                std::uint64_t max_steps);

/// Unchecked variants used by the trial driver.
TrajectoryResult run_trajectory(const Pfa2 &m, const Tape &t, RandomStream &rng, std::uint64_t max_steps);
TrajectoryResult run_trajectory(const Qcfa2 &m, const Tape &t, RandomStream &rng, std::uint64_t max_steps);

/// Trial i runs on stream (cfg.seed, i); output is independent of worker count.
std::vector<TrajectoryResult> run_trial_results(const Machine &m, std::string_view input, const RunConfig &cfg);
RunStats run_trials(const Machine &m, std::string_view input, const RunConfig &cfg);

}  // namespace qcfa

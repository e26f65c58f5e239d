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

#include "qcfa/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "qcfa/errors.hpp"

namespace qcfa {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index) : key_(splitmix64(seed ^ splitmix64(index))) {}

std::uint64_t RandomStream::next_u64() {
    ++counter_;
    return splitmix64(key_ + counter_ * kGolden);
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Accept: return "accept";
        case Outcome::Reject: return "reject";
        case Outcome::Timeout: return "timeout";
    }
    return "unknown";
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // The bounds are exact at the extremes; keep rounding from moving them.
    const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double high = successes == n ? 1.0 : std::min(1.0, centre + half);
    return {low, high};
}

RunStats aggregate(std::span<const TrajectoryResult> results) {
    RunStats s;
    s.trials = results.size();
    std::vector<std::uint64_t> halting_steps;
    halting_steps.reserve(results.size());
    for (const auto &r : results) {
        s.total_steps += r.steps;
        s.total_iterations += r.iterations;
        switch (r.outcome) {
            case Outcome::Accept: ++s.accept; break;
            case Outcome::Reject: ++s.reject; break;
            case Outcome::Timeout: ++s.timeout; break;
        }
        if (r.outcome != Outcome::Timeout) halting_steps.push_back(r.steps);
    }
    if (s.trials > 0) {
        s.accept_freq = static_cast<double>(s.accept) / static_cast<double>(s.trials);
        s.reject_freq = static_cast<double>(s.reject) / static_cast<double>(s.trials);
    }
    s.accept_ci = wilson_interval(s.accept, s.trials);
    s.reject_ci = wilson_interval(s.reject, s.trials);
    if (!halting_steps.empty()) {
        std::sort(halting_steps.begin(), halting_steps.end());
        double sum = 0.0;
        for (auto v : halting_steps) sum += static_cast<double>(v);
        s.mean_steps = sum / static_cast<double>(halting_steps.size());
        const auto quantile = [&](double q) {
            const auto idx = static_cast<std::size_t>(q * static_cast<double>(halting_steps.size() - 1) + 0.5);
            return static_cast<double>(halting_steps[idx]);
        };
        s.median_steps = quantile(0.5);
        s.p90_steps = quantile(0.9);
        s.max_halting_steps = halting_steps.back();
    }
    return s;
}

namespace {

template <typename Config>
void count_iteration(const FiniteControl &m, StateId from, const Config &to, TrajectoryResult &r) {
    if (m.is_loop(to.state) && !m.is_loop(from)) ++r.iterations;
}

}  // namespace

TrajectoryResult run_trajectory(const Pfa2 &m, const Tape &t, RandomStream &rng, std::uint64_t max_steps) {
    TrajectoryResult r;
    Configuration c = initial_configuration(m);
    if (m.is_loop(c.state)) ++r.iterations;
    while (r.steps < max_steps) {
        const auto *dist = m.transition(c.state, t.symbol_at(c.head));
        const double u = (dist != nullptr && dist->size() > 1) ? rng.uniform() : 0.0;
        auto next = pfa_step(m, c, t, u);
        ++r.steps;
        if (const auto *h = std::get_if<Halt>(&next)) {
            r.outcome = *h == Halt::Accept ? Outcome::Accept : Outcome::Reject;
            return r;
        }
        const auto &nc = std::get<Configuration>(next);
        count_iteration(m, c.state, nc, r);
        c = nc;
    }
    r.outcome = Outcome::Timeout;
    return r;
}

TrajectoryResult run_trajectory(const Qcfa2 &m, const Tape &t, RandomStream &rng, std::uint64_t max_steps) {
    TrajectoryResult r;
    QuantumConfiguration c = initial_configuration(m);
    if (m.is_loop(c.state)) ++r.iterations;
    while (r.steps < max_steps) {
        const auto *rule = m.rule(c.state, t.symbol_at(c.head));
        const double u = (rule != nullptr && !rule->is_unitary()) ? rng.uniform() : 0.0;
        auto next = qcfa_step(m, c, t, u);
        ++r.steps;
        if (const auto *h = std::get_if<Halt>(&next)) {
            r.outcome = *h == Halt::Accept ? Outcome::Accept : Outcome::Reject;
            return r;
        }
        auto &nc = std::get<QuantumConfiguration>(next);
        count_iteration(m, c.state, nc, r);
        c = std::move(nc);
    }
    r.outcome = Outcome::Timeout;
    return r;
}

namespace {

void require_runnable(const Machine &m, std::string_view input) {
    const auto report = validate(m);
    if (!report.ok()) {
        throw UsageError("invalid machine: " + std::string(to_string(report.violations.front().kind)) + " " +
                         report.violations.front().detail);
    }
    if (!control_of(m).accepts_input(input)) throw UsageError("input contains symbols outside the alphabet");
}

TrajectoryResult run_one(const Machine &m, const Tape &t, RandomStream &rng, std::uint64_t max_steps) {
    return std::visit([&](const auto &x) { return run_trajectory(x, t, rng, max_steps); }, m);
}

}  // namespace

TrajectoryResult run_trajectory(const Machine &m, std::string_view input, std::uint64_t seed,
                                std::uint64_t max_steps) {
    if (max_steps == 0) throw UsageError("max_steps must be at least 1");
    require_runnable(m, input);
    const Tape tape{std::string(input)};
    RandomStream rng(seed, 0);
    return run_one(m, tape, rng, max_steps);
}

std::vector<TrajectoryResult> run_trial_results(const Machine &m, std::string_view input, const RunConfig &cfg) {
    if (cfg.trials == 0) throw UsageError("trials must be at least 1");
    if (cfg.max_steps == 0) throw UsageError("max_steps must be at least 1");
    require_runnable(m, input);
    const Tape tape{std::string(input)};

    std::vector<TrajectoryResult> results(cfg.trials);
    unsigned workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.trials));

    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::uint64_t i = w; i < cfg.trials; i += workers) {
                RandomStream rng(cfg.seed, i);
                results[i] = run_one(m, tape, rng, cfg.max_steps);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

RunStats run_trials(const Machine &m, std::string_view input, const RunConfig &cfg) {
    const auto results = run_trial_results(m, input, cfg);
    return aggregate(results);
}

}  // namespace qcfa

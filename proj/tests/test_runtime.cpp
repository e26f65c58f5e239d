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

#include <cmath>

#include <gtest/gtest.h>

#include "qcfa/exact.hpp"
#include "qcfa/lm_formulas.hpp"
#include "qcfa/lm_machines.hpp"
#include "qcfa/runtime.hpp"

using namespace qcfa;

namespace {

// One gadget flip at the left end: head accepts, tail rejects.
Qcfa2 single_flip_qcfa() {
    const auto g = lm::coin_flip_gadget();
    Qcfa2 m("a", lm::kBasis);
    const auto acc = m.add_state("acc");
    const auto rej = m.add_state("rej");
    const auto flip = m.add_state("flip");
    const auto meas = m.add_state("meas");
    m.mark_accepting(acc);
    m.mark_rejecting(rej);
    m.set_initial_state(flip);
    for (char s : m.tape_alphabet()) {
        m.set_unitary(flip, s, g.unitary, {meas, 0});
        m.set_measurement(meas, s, g.measurement, {{acc, 0}, {rej, 0}});
    }
    return m;
}

double sigma(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

TEST(Random, SplitMixReferenceValue) {
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
    RandomStream a(5, 3), b(5, 3), c(5, 4), d(6, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
        EXPECT_NE(x, d.next_u64());
    }
    EXPECT_EQ(a.draws(), 100u);
}

TEST(Random, UniformMoments) {
    RandomStream r(1, 0);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.005);
}

TEST(Wilson, KnownValues) {
    const auto i = wilson_interval(50, 100);
    EXPECT_NEAR(i.low, 0.403831, 1e-6);
    EXPECT_NEAR(i.high, 0.596169, 1e-6);
    EXPECT_EQ(wilson_interval(0, 10).low, 0.0);
    EXPECT_EQ(wilson_interval(10, 10).high, 1.0);
    EXPECT_NEAR(wilson_interval(0, 10).high, 0.277533, 1e-6);
}

TEST(Trajectory, EvenLengthRejectedDeterministically) {
    const Machine m{lm::build_lm_pfa(2)};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = run_trajectory(m, "ab", seed, 1000);
        EXPECT_EQ(r.outcome, Outcome::Reject);
        EXPECT_EQ(r.steps, 4u);
        EXPECT_EQ(r.iterations, 0u);
    }
}

TEST(Trajectory, MemberNeverRejectedByQcfa) {
    const Machine m{lm::build_lm_qcfa(0.25)};
    RunConfig cfg;
    cfg.seed = 3;
    cfg.trials = 1000;
    cfg.max_steps = 10'000'000;
    const auto s = run_trials(m, "aca", cfg);
    EXPECT_EQ(s.reject, 0u);
    EXPECT_EQ(s.accept + s.timeout, 1000u);
}

TEST(Trajectory, TinyBudgetTimesOut) {
    const auto r = run_trajectory(Machine{lm::build_lm_pfa(1)}, "aca", 1, 1);
    EXPECT_EQ(r.outcome, Outcome::Timeout);
    EXPECT_EQ(r.steps, 1u);
}

TEST(Trajectory, InvalidInputsAreUsageErrors) {
    EXPECT_THROW(run_trajectory(Machine{lm::build_lm_pfa(1)}, "abd", 1, 10), UsageError);
    EXPECT_THROW(run_trajectory(Machine{lm::build_lm_pfa(1)}, "ab", 1, 0), UsageError);
    Pfa2 broken("a");
    broken.add_state("s");
    EXPECT_THROW(run_trajectory(Machine{broken}, "a", 1, 10), UsageError);
    RunConfig cfg;
    cfg.trials = 0;
    EXPECT_THROW(run_trials(Machine{lm::build_lm_pfa(1)}, "aca", cfg), UsageError);
}

TEST(Trajectory, IterationsCountLoopEntries) {
    // Every iteration of the 2PFA starts with exactly one entry into a seek state.
    const Machine m{lm::build_lm_pfa(1)};
    RunConfig cfg;
    cfg.seed = 9;
    cfg.trials = 200;
    for (const auto &r : run_trial_results(m, "aca", cfg)) {
        EXPECT_GE(r.iterations, 1u);
        EXPECT_NE(r.outcome, Outcome::Timeout);
    }
}

TEST(Trials, IndependentOfWorkerCount) {
    const Machine m{lm::build_lm_qcfa_with_k(2)};
    RunConfig cfg;
    cfg.seed = 17;
    cfg.trials = 64;
    cfg.workers = 1;
    const auto one = run_trial_results(m, "acab", cfg);
    cfg.workers = 3;
    const auto three = run_trial_results(m, "acab", cfg);
    cfg.workers = 0;
    const auto any = run_trial_results(m, "acab", cfg);
    EXPECT_EQ(one, three);
    EXPECT_EQ(one, any);
    EXPECT_EQ(run_trajectory(m, "acab", 17, cfg.max_steps), one.front());
}

TEST(Trials, AggregateStatistics) {
    const std::vector<TrajectoryResult> rs{{Outcome::Accept, 10, 1},
                                           {Outcome::Reject, 20, 2},
                                           {Outcome::Timeout, 100, 5},
                                           {Outcome::Accept, 30, 1}};
    const auto s = aggregate(rs);
    EXPECT_EQ(s.trials, 4u);
    EXPECT_EQ(s.accept, 2u);
    EXPECT_EQ(s.timeout, 1u);
    EXPECT_DOUBLE_EQ(s.accept_freq, 0.5);
    EXPECT_DOUBLE_EQ(s.mean_steps, 20.0);
    EXPECT_DOUBLE_EQ(s.median_steps, 20.0);
    EXPECT_EQ(s.max_halting_steps, 30u);
    EXPECT_EQ(s.total_iterations, 9u);
    EXPECT_EQ(s.total_steps, 160u);
}

TEST(Trials, GadgetHeadFrequency) {
    RunConfig cfg;
    cfg.seed = 1;
    cfg.trials = 100'000;
    const auto s = run_trials(Machine{single_flip_qcfa()}, "a", cfg);
    EXPECT_NEAR(s.accept_freq, 0.5, 4.0 * sigma(0.5, cfg.trials));
    EXPECT_EQ(s.timeout, 0u);
}

TEST(Trials, NonmemberRejectFrequency) {
    RunConfig cfg;
    cfg.seed = 2;
    cfg.trials = 10'000;
    cfg.max_steps = 10'000'000;
    const auto s = run_trials(Machine{lm::build_lm_qcfa(0.25)}, "acaa", cfg);
    EXPECT_GE(s.reject_freq, 0.75 - 4.0 * sigma(0.75, cfg.trials));
}

TEST(Trials, MonteCarloMatchesExactPfa) {
    const auto p = lm::build_lm_pfa(1);
    const double exact = absorption_probs(build_config_chain(p, "aca")).p_accept;
    EXPECT_NEAR(exact, 15.0 / 23.0, 1e-12);
    RunConfig cfg;
    cfg.seed = 4;
    cfg.trials = 20'000;
    const auto s = run_trials(Machine{p}, "aca", cfg);
    EXPECT_NEAR(s.accept_freq, exact, 4.0 * sigma(exact, cfg.trials));
}

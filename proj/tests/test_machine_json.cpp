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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "qcfa/exact.hpp"
#include "qcfa/lm_machines.hpp"
#include "qcfa/machine_json.hpp"

using namespace qcfa;

namespace {

// Random total 2PFA over {a, b}: every entry is one move or a fair coin.
Pfa2 random_pfa(std::mt19937_64 &rng) {
    Pfa2 m("ab");
    const auto acc = m.add_state("acc");
    const auto rej = m.add_state("rej");
    m.mark_accepting(acc);
    m.mark_rejecting(rej);
    const int live = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < live; ++i) m.add_state("s" + std::to_string(i));
    m.set_initial_state(2);
    if (rng() % 2) m.mark_loop(3);
    const auto n = static_cast<StateId>(m.num_states());
    auto shift_for = [&](char symbol) {
        if (symbol == kLeftEndmarker) return static_cast<int>(rng() % 2);
        if (symbol == kRightEndmarker) return -static_cast<int>(rng() % 2);
        return static_cast<int>(rng() % 3) - 1;
    };
    for (StateId s = 2; s < n; ++s) {
        for (char symbol : m.tape_alphabet()) {
            if (rng() % 2) {
                m.set_transition(s, symbol, Move{static_cast<StateId>(rng() % n), shift_for(symbol)});
            } else {
                m.set_transition(s, symbol,
                                 CoinDistribution{{static_cast<StateId>(rng() % n), shift_for(symbol), Rational(1, 2)},
                                                  {static_cast<StateId>(rng() % n), shift_for(symbol), Rational(1, 2)}});
            }
        }
    }
    return m;
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("qcfa_test_" + name);
}

}  // namespace

TEST(MachineJson, BuiltMachinesRoundTrip) {
    for (const Machine &m : {Machine{lm::build_lm_pfa(2)}, Machine{lm::build_lm_qcfa(0.25)}, Machine{lm::build_walk_pfa()}}) {
        const auto text = machine_to_json(m);
        const auto back = machine_from_json(text);
        EXPECT_EQ(machine_to_json(back), text);
        EXPECT_TRUE(validate(back).ok());
        EXPECT_EQ(control_of(back).loop_states(), control_of(m).loop_states());
    }
}

TEST(MachineJson, QuantumRoundTripPreservesBehaviour) {
    const auto q = lm::build_lm_qcfa_with_k(2);
    const auto back = std::get<Qcfa2>(machine_from_json(machine_to_json(Machine{q})));
    for (const char *w : {"acab", "aca"}) {
        const auto a = qcfa_forward(q, w, 1e-6, 20000);
        const auto b = qcfa_forward(back, w, 1e-6, 20000);
        EXPECT_EQ(a.accept, b.accept);
        EXPECT_EQ(a.reject, b.reject);
    }
}

TEST(MachineJsonProperty, RandomPfaRoundTrip) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_pfa(rng);
        ASSERT_TRUE(validate_pfa(m).ok());
        const auto text = machine_to_json(Machine{m});
        const auto back = std::get<Pfa2>(machine_from_json(text));
        EXPECT_EQ(machine_to_json(Machine{back}), text);
        for (const char *w : {"", "ab", "ba"}) {
            const auto x = absorption_probs(build_config_chain(m, w));
            const auto y = absorption_probs(build_config_chain(back, w));
            EXPECT_EQ(x.p_accept, y.p_accept);
            EXPECT_EQ(x.p_diverge, y.p_diverge);
        }
    }
}

TEST(MachineJson, MalformedDocumentsAreUsageErrors) {
    EXPECT_THROW(machine_from_json("{"), UsageError);
    EXPECT_THROW(machine_from_json("[]"), UsageError);
    EXPECT_THROW(machine_from_json(R"({"kind":"dfa"})"), UsageError);
    EXPECT_THROW(machine_from_json(R"({"kind":"pfa2","alphabet":"a","states":["s"],"initial":"t",
        "accepting":[],"rejecting":[],"transitions":[]})"),
                 UsageError);
}

TEST(MachineJson, LoadedDefectsReachTheValidator) {
    const auto m = lm::build_lm_qcfa_with_k(1);
    auto text = machine_to_json(Machine{m});
    // Scale the first unitary entry; the loader keeps the matrix as written.
    const auto pos = text.find("\"re\": 1.0");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 9, "\"re\": 1.1");
    const auto back = machine_from_json(text);
    const auto r = validate(back);
    EXPECT_GE(r.count(ViolationKind::NonUnitary), 1u);
    EXPECT_EQ(r.count(ViolationKind::NonUnitary), r.violations.size());
}

TEST(MachineJson, FileIo) {
    const auto path = temp_path("pfa.json");
    save_machine_file(Machine{lm::build_lm_pfa(1)}, path.string());
    const auto m = load_machine_file(path.string());
    EXPECT_TRUE(std::holds_alternative<Pfa2>(m));
    std::filesystem::remove(path);
    EXPECT_THROW(load_machine_file(path.string()), IoError);
    EXPECT_THROW(save_machine_file(m, "/nonexistent-dir/x.json"), IoError);
}

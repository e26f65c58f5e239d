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

#include <benchmark/benchmark.h>

#include <string>

#include "qcfa/angle.hpp"
#include "qcfa/exact.hpp"
#include "qcfa/lm_formulas.hpp"
#include "qcfa/lm_machines.hpp"
#include "qcfa/runtime.hpp"

namespace {

std::string member(int n) { return std::string(n, 'a') + "c" + std::string(n, 'a'); }

void BM_QcfaTrajectory(benchmark::State &state) {
    const qcfa::Machine m = qcfa::lm::build_lm_qcfa_with_k(1);
    const auto w = member(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qcfa::run_trajectory(m, w, ++seed, 10'000'000));
    }
}
BENCHMARK(BM_QcfaTrajectory)->Arg(2)->Arg(4)->Arg(8);

void BM_PfaTrajectory(benchmark::State &state) {
    const qcfa::Machine m = qcfa::lm::build_lm_pfa(1);
    const auto w = member(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qcfa::run_trajectory(m, w, ++seed, 10'000'000));
    }
}
BENCHMARK(BM_PfaTrajectory)->Arg(1)->Arg(3)->Arg(5);

void BM_PfaAbsorption(benchmark::State &state) {
    const auto m = qcfa::lm::build_lm_pfa(1);
    const auto w = member(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const auto chain = qcfa::build_config_chain(m, w);
        benchmark::DoNotOptimize(qcfa::absorption_probs(chain));
    }
}
BENCHMARK(BM_PfaAbsorption)->Arg(1)->Arg(2)->Arg(4);

void BM_QcfaForward(benchmark::State &state) {
    const auto m = qcfa::lm::build_lm_qcfa_with_k(1);
    const auto w = member(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qcfa::qcfa_forward(m, w, 1e-6, 20'000));
    }
}
BENCHMARK(BM_QcfaForward)->Arg(1)->Arg(2);

void BM_UaPower(benchmark::State &state) {
    std::int64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(qcfa::lm::ua_power(++k));
}
BENCHMARK(BM_UaPower);

void BM_Sqrt2Rotation(benchmark::State &state) {
    std::int64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(qcfa::sqrt2_pi_rotation(++k));
}
BENCHMARK(BM_Sqrt2Rotation);

}  // namespace

BENCHMARK_MAIN();

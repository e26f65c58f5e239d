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
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcfa/machines.hpp"

namespace qcfa {

// ---------------------------------------------------------------------------
// 2PFA as an absorbing Markov chain

struct ChainEntry {
    std::uint32_t target = 0;
    Rational probability;
};

/// Reachable configurations of a 2PFA on a fixed input. Nodes 0..configs-1
/// are live configurations; the two trailing nodes are the absorbing accept
/// and reject sinks, each with a self-loop row.
struct ConfigChain {
    std::vector<Configuration> configs;
    std::vector<std::vector<ChainEntry>> rows;
    std::uint32_t initial = 0;

    std::size_t live_count() const { return configs.size(); }
    std::size_t node_count() const { return configs.size() + 2; }
    std::uint32_t accept_node() const { return static_cast<std::uint32_t>(configs.size()); }
    std::uint32_t reject_node() const { return static_cast<std::uint32_t>(configs.size() + 1); }
};

ConfigChain build_config_chain(const Pfa2 &m, std::string_view input);

struct AbsorptionResult {
    double p_accept = 0.0;
    double p_reject = 0.0;
    double p_diverge = 0.0;
    /// Mean number of transitions until absorption; empty when p_diverge > 1e-12.
    std::optional<double> expected_steps;
};

/// Solves the absorption system from the chain's initial node. Live nodes that
/// cannot reach a sink are classified up front and contribute to p_diverge.
/// Systems up to 5000 nodes use a dense long-double LU; larger ones use a
/// sparse LU with long-double iterative refinement.
AbsorptionResult absorption_probs(const ConfigChain &chain);

using BigRational = boost::multiprecision::cpp_rational;

/// Exact split of the first outer-loop iteration of a 2PFA: probability of
/// accepting, rejecting, or reaching the start of the next iteration. The
/// iteration boundary is the first entry into a loop state from a non-loop
/// state. Throws UsageError if the machine can revisit a configuration within
/// one iteration (the propagation needs an acyclic iteration).
struct IterationSplit {
    BigRational accept;
    BigRational reject;
    BigRational next_iteration;
};

IterationSplit first_iteration_exact(const Pfa2 &m, std::string_view input);

// ---------------------------------------------------------------------------
// 2QCFA forward analysis

struct QcfaForwardResult {
    double accept = 0.0;
    double reject = 0.0;
    double residual = 1.0;
    std::uint64_t steps = 0;
};

/// Called after every synchronous step with the running totals.
using ForwardObserver = std::function<void(const QcfaForwardResult &)>;

inline constexpr double kDefaultTailTol = 1e-9;
inline constexpr std::uint64_t kDefaultForwardSteps = 10'000'000;

/// Propagates an unnormalised density operator per classical configuration.
/// Stops when residual < tail_tol or after max_steps synchronous steps.
QcfaForwardResult qcfa_forward(const Qcfa2 &m, std::string_view input, double tail_tol = kDefaultTailTol,
                               std::uint64_t max_steps = kDefaultForwardSteps,
                               const ForwardObserver &observer = {});

// ---------------------------------------------------------------------------
// Iterated two-outcome series

enum class SeriesVariant {
    /// sum_i (1-pa)^i (1-pr)^i pr  =  pr / (pa + pr - pa pr)
    RejectFirst,
    /// pa (1-pr) / (pa (1-pr) + pr)
    AcceptFirst,
};

double two_outcome_series(double p_accept, double p_reject, SeriesVariant variant);

}  // namespace qcfa

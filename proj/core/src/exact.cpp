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

#include "qcfa/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qcfa/errors.hpp"

namespace qcfa {

namespace {

std::size_t shifted(std::size_t head, int shift) {
    return shift < 0 ? head - 1 : head + static_cast<std::size_t>(shift);
}

void require_valid(const ValidationReport &report) {
    if (!report.ok()) {
        throw UsageError("invalid machine: " + std::string(to_string(report.violations.front().kind)) + " " +
                         report.violations.front().detail);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Chain construction

ConfigChain build_config_chain(const Pfa2 &m, std::string_view input) {
    require_valid(validate_pfa(m));
    if (!m.accepts_input(input)) throw UsageError("input contains symbols outside the alphabet");
    const Tape tape{std::string(input)};
    const std::size_t width = tape.right_end() + 1;

    ConfigChain chain;
    // Slot -> node id; live nodes are numbered in discovery order.
    std::unordered_map<std::size_t, std::uint32_t> ids;
    std::deque<std::uint32_t> frontier;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> pending;  // targets by slot, sinks encoded below

    constexpr std::size_t kAcceptSlot = static_cast<std::size_t>(-1);
    constexpr std::size_t kRejectSlot = static_cast<std::size_t>(-2);

    auto slot_of = [&](StateId s, std::size_t head) -> std::size_t {
        if (m.is_accepting(s)) return kAcceptSlot;
        if (m.is_rejecting(s)) return kRejectSlot;
        return static_cast<std::size_t>(s) * width + head;
    };
    auto intern = [&](std::size_t slot) {
        auto [it, inserted] = ids.emplace(slot, static_cast<std::uint32_t>(chain.configs.size()));
        if (inserted) {
            chain.configs.push_back({static_cast<StateId>(slot / width), slot % width});
            pending.emplace_back();
            frontier.push_back(it->second);
        }
        return it->second;
    };

    const auto start = initial_configuration(m);
    const auto start_slot = slot_of(start.state, start.head);
    if (start_slot != kAcceptSlot && start_slot != kRejectSlot) intern(start_slot);

    while (!frontier.empty()) {
        const auto node = frontier.front();
        frontier.pop_front();
        const auto c = chain.configs[node];
        const auto *dist = m.transition(c.state, tape.symbol_at(c.head));
        for (const auto &e : *dist) {
            if (e.probability.num() == 0) continue;
            const auto target = slot_of(e.next, shifted(c.head, e.shift));
            if (target != kAcceptSlot && target != kRejectSlot) intern(target);
            auto &row = pending[node];
            auto it = std::find_if(row.begin(), row.end(), [&](const auto &p) { return p.first == target; });
            if (it == row.end()) row.emplace_back(target, e.probability);
            else it->second += e.probability;
        }
    }

    chain.rows.resize(chain.node_count());
    for (std::size_t node = 0; node < chain.configs.size(); ++node) {
        for (const auto &[slot, p] : pending[node]) {
            std::uint32_t target = slot == kAcceptSlot   ? chain.accept_node()
                                   : slot == kRejectSlot ? chain.reject_node()
                                                         : ids.at(slot);
            chain.rows[node].push_back({target, p});
        }
    }
    chain.rows[chain.accept_node()] = {{chain.accept_node(), Rational(1)}};
    chain.rows[chain.reject_node()] = {{chain.reject_node(), Rational(1)}};
    chain.initial = start_slot == kAcceptSlot   ? chain.accept_node()
                    : start_slot == kRejectSlot ? chain.reject_node()
                                                : ids.at(start_slot);
    return chain;
}

// ---------------------------------------------------------------------------
// Absorption

namespace {

using DenseLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecLd = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr std::size_t kDenseLimit = 5000;

// Solves (I - Q) X = B restricted to `nodes`, where B has one column per rhs.
DenseLd solve_transient(const ConfigChain &chain, const std::vector<std::uint32_t> &nodes,
                        const std::vector<std::int64_t> &local, const DenseLd &rhs) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    if (static_cast<std::size_t>(n) <= kDenseLimit) {
        DenseLd a = DenseLd::Identity(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (const auto &e : chain.rows[nodes[static_cast<std::size_t>(i)]]) {
                const auto j = local[e.target];
                if (j >= 0) {
                    a(i, j) -= static_cast<long double>(e.probability.num()) /
                               static_cast<long double>(e.probability.den());
                }
            }
        }
        return a.partialPivLu().solve(rhs);
    }

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::SparseMatrix<long double> a_ld(n, n);
    std::vector<Eigen::Triplet<long double>> triplets_ld;
    for (Eigen::Index i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, 1.0);
        triplets_ld.emplace_back(i, i, 1.0L);
        for (const auto &e : chain.rows[nodes[static_cast<std::size_t>(i)]]) {
            const auto j = local[e.target];
            if (j >= 0) {
                const long double p = static_cast<long double>(e.probability.num()) /
                                      static_cast<long double>(e.probability.den());
                triplets.emplace_back(i, j, -static_cast<double>(p));
                triplets_ld.emplace_back(i, j, -p);
            }
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a_ld.setFromTriplets(triplets_ld.begin(), triplets_ld.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw InternalError("sparse LU factorisation failed");

    DenseLd x(n, rhs.cols());
    for (Eigen::Index col = 0; col < rhs.cols(); ++col) {
        VecLd b = rhs.col(col);
        VecLd xc = lu.solve(b.cast<double>()).cast<long double>();
        for (int round = 0; round < 4; ++round) {
            const VecLd r = b - a_ld * xc;
            xc += lu.solve(r.cast<double>()).cast<long double>();
        }
        x.col(col) = xc;
    }
    return x;
}

}  // namespace

AbsorptionResult absorption_probs(const ConfigChain &chain) {
    AbsorptionResult result;
    if (chain.initial == chain.accept_node()) {
        result.p_accept = 1.0;
        result.expected_steps = 0.0;
        return result;
    }
    if (chain.initial == chain.reject_node()) {
        result.p_reject = 1.0;
        result.expected_steps = 0.0;
        return result;
    }

    // Reverse reachability from the sinks.
    const auto total = chain.node_count();
    std::vector<std::vector<std::uint32_t>> reverse(total);
    for (std::uint32_t i = 0; i < chain.live_count(); ++i)
        for (const auto &e : chain.rows[i]) reverse[e.target].push_back(i);
    std::vector<bool> absorbing(total, false);
    std::deque<std::uint32_t> queue{chain.accept_node(), chain.reject_node()};
    absorbing[chain.accept_node()] = absorbing[chain.reject_node()] = true;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto u : reverse[v]) {
            if (!absorbing[u]) {
                absorbing[u] = true;
                queue.push_back(u);
            }
        }
    }
    if (!absorbing[chain.initial]) {
        result.p_diverge = 1.0;
        return result;
    }

    std::vector<std::uint32_t> nodes;
    std::vector<std::int64_t> local(total, -1);
    for (std::uint32_t i = 0; i < chain.live_count(); ++i) {
        if (absorbing[i]) {
            local[i] = static_cast<std::int64_t>(nodes.size());
            nodes.push_back(i);
        }
    }
    const auto n = static_cast<Eigen::Index>(nodes.size());
    DenseLd rhs = DenseLd::Zero(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (const auto &e : chain.rows[nodes[static_cast<std::size_t>(i)]]) {
            const long double p =
                static_cast<long double>(e.probability.num()) / static_cast<long double>(e.probability.den());
            if (e.target == chain.accept_node()) rhs(i, 0) += p;
            if (e.target == chain.reject_node()) rhs(i, 1) += p;
        }
        rhs(i, 2) = 1.0L;
    }
    const DenseLd x = solve_transient(chain, nodes, local, rhs);
    const auto row = local[chain.initial];
    const long double pa = std::clamp(x(row, 0), 0.0L, 1.0L);
    const long double pr = std::clamp(x(row, 1), 0.0L, 1.0L - pa);
    result.p_accept = static_cast<double>(pa);
    result.p_reject = static_cast<double>(pr);
    result.p_diverge = static_cast<double>(std::max(0.0L, 1.0L - pa - pr));
    if (result.p_diverge <= 1e-12) result.expected_steps = static_cast<double>(x(row, 2));
    return result;
}

// ---------------------------------------------------------------------------
// Exact first iteration

IterationSplit first_iteration_exact(const Pfa2 &m, std::string_view input) {
    require_valid(validate_pfa(m));
    if (!m.accepts_input(input)) throw UsageError("input contains symbols outside the alphabet");
    const Tape tape{std::string(input)};
    const std::size_t width = tape.right_end() + 1;
    const std::size_t per_phase = m.num_states() * width;

    enum : std::uint64_t { kAccept = ~0ULL, kReject = ~0ULL - 1, kNext = ~0ULL - 2 };

    // Node key: phase * per_phase + state * width + head, phase in {0, 1}.
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, Rational>>> edges;
    std::unordered_map<std::uint64_t, std::size_t> indegree;
    std::deque<std::uint64_t> frontier;

    const auto start = initial_configuration(m);
    const std::uint64_t start_key = (m.is_loop(start.state) ? per_phase : 0) + start.state * width + start.head;
    frontier.push_back(start_key);
    edges[start_key];
    indegree[start_key] = 0;

    while (!frontier.empty()) {
        const auto key = frontier.front();
        frontier.pop_front();
        const std::uint64_t phase = key / per_phase;
        const auto state = static_cast<StateId>((key % per_phase) / width);
        const std::size_t head = key % width;
        for (const auto &e : *m.transition(state, tape.symbol_at(head))) {
            if (e.probability.num() == 0) continue;
            std::uint64_t target;
            if (m.is_accepting(e.next)) {
                target = kAccept;
            } else if (m.is_rejecting(e.next)) {
                target = kReject;
            } else {
                std::uint64_t next_phase = phase;
                if (m.is_loop(e.next) && !m.is_loop(state)) {
                    if (phase == 1) {
                        edges[key].emplace_back(kNext, e.probability);
                        continue;
                    }
                    next_phase = 1;
                }
                target = next_phase * per_phase + e.next * width + shifted(head, e.shift);
                if (!edges.contains(target)) {
                    edges[target];
                    indegree[target] = 0;
                    frontier.push_back(target);
                }
                ++indegree[target];
            }
            edges[key].emplace_back(target, e.probability);
        }
    }

    // Kahn order; mass flows only along forward edges.
    std::unordered_map<std::uint64_t, BigRational> mass;
    mass[start_key] = 1;
    IterationSplit split;
    std::deque<std::uint64_t> ready;
    for (const auto &[k, d] : indegree)
        if (d == 0) ready.push_back(k);
    std::size_t processed = 0;
    while (!ready.empty()) {
        const auto key = ready.front();
        ready.pop_front();
        ++processed;
        const BigRational here = mass[key];
        for (const auto &[target, p] : edges[key]) {
            const BigRational flow = here * BigRational(p.num(), p.den());
            if (target == kAccept) split.accept += flow;
            else if (target == kReject) split.reject += flow;
            else if (target == kNext) split.next_iteration += flow;
            else {
                mass[target] += flow;
                if (--indegree[target] == 0) ready.push_back(target);
            }
        }
    }
    if (processed != edges.size()) throw UsageError("first iteration revisits a configuration; not acyclic");
    return split;
}

// ---------------------------------------------------------------------------
// 2QCFA forward propagation

QcfaForwardResult qcfa_forward(const Qcfa2 &m, std::string_view input, double tail_tol, std::uint64_t max_steps,
                               const ForwardObserver &observer) {
    require_valid(validate_qcfa(m));
    if (!m.accepts_input(input)) throw UsageError("input contains symbols outside the alphabet");
    const Tape tape{std::string(input)};
    const std::size_t width = tape.right_end() + 1;
    const std::size_t slots = m.num_states() * width;
    const std::size_t dim = m.quantum_dim();

    std::vector<Matrix> current(slots, Matrix(dim));
    std::vector<Matrix> next(slots, Matrix(dim));
    std::vector<char> live(slots, 0), next_live(slots, 0);
    std::vector<std::size_t> active, next_active;

    QcfaForwardResult result;
    {
        const auto c = initial_configuration(m);
        Matrix rho(dim);
        rho(m.initial_quantum(), m.initial_quantum()) = 1.0;
        if (m.is_accepting(c.state)) {
            result.accept = 1.0;
            result.residual = 0.0;
            return result;
        }
        if (m.is_rejecting(c.state)) {
            result.reject = 1.0;
            result.residual = 0.0;
            return result;
        }
        const auto slot = c.state * width + c.head;
        current[slot] = rho;
        live[slot] = 1;
        active.push_back(slot);
    }

    auto deposit = [&](const Move &mv, std::size_t head, const Matrix &rho, double weight) {
        if (m.is_accepting(mv.next)) {
            result.accept += weight;
            return;
        }
        if (m.is_rejecting(mv.next)) {
            result.reject += weight;
            return;
        }
        const auto slot = mv.next * width + shifted(head, mv.shift);
        if (!next_live[slot]) {
            next_live[slot] = 1;
            next[slot] = rho;
            next_active.push_back(slot);
        } else {
            next[slot] += rho;
        }
    };

    while (result.residual >= tail_tol && result.steps < max_steps) {
        next_active.clear();
        for (const auto slot : active) {
            const auto state = static_cast<StateId>(slot / width);
            const auto head = slot % width;
            const Matrix &rho = current[slot];
            const auto *rule = m.rule(state, tape.symbol_at(head));
            if (const auto *u = std::get_if<UnitaryMatrix>(&rule->action)) {
                deposit(rule->moves.front(), head, conjugate_by(u->matrix(), rho), rho.trace().real());
            } else {
                const auto &meas = std::get<Measurement>(rule->action);
                for (std::size_t i = 0; i < meas.size(); ++i) {
                    const auto &p = meas.projectors()[i];
                    Matrix branch = p * rho * p;
                    const double w = branch.trace().real();
                    if (w <= 0.0) continue;
                    deposit(rule->moves[i], head, branch, w);
                }
            }
            live[slot] = 0;
        }
        std::swap(current, next);
        std::swap(live, next_live);
        std::swap(active, next_active);

        double residual = 0.0;
        for (const auto slot : active) residual += current[slot].trace().real();
        result.residual = residual;
        ++result.steps;
        if (observer) observer(result);
    }
    return result;
}

// ---------------------------------------------------------------------------

double two_outcome_series(double p_accept, double p_reject, SeriesVariant variant) {
    if (!(p_accept >= 0.0 && p_accept <= 1.0 && p_reject >= 0.0 && p_reject <= 1.0)) {
        throw UsageError("series probabilities must lie in [0, 1]");
    }
    if (p_accept == 0.0 && p_reject == 0.0) throw UsageError("series undefined when both probabilities are 0");
    switch (variant) {
        case SeriesVariant::RejectFirst: return p_reject / (p_accept + p_reject - p_accept * p_reject);
        case SeriesVariant::AcceptFirst: {
            const double num = p_accept * (1.0 - p_reject);
            return num / (num + p_reject);
        }
    }
    throw UsageError("unknown series variant");
}

}  // namespace qcfa

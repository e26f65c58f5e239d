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

#include "qcfa/machines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qcfa/errors.hpp"

namespace qcfa {

// ---------------------------------------------------------------------------
// FiniteControl

FiniteControl::FiniteControl(std::string alphabet) : alphabet_(std::move(alphabet)) {
    slots_.fill(-1);
    gamma_.push_back(kLeftEndmarker);
    for (char ch : alphabet_) {
        if (ch == kLeftEndmarker || ch == kRightEndmarker) {
            throw UsageError("alphabet may not contain endmarker symbols");
        }
        if (gamma_.find(ch) != std::string::npos) throw UsageError("duplicate alphabet symbol");
        gamma_.push_back(ch);
    }
    gamma_.push_back(kRightEndmarker);
    for (std::size_t i = 0; i < gamma_.size(); ++i)
        slots_[static_cast<unsigned char>(gamma_[i])] = static_cast<std::int16_t>(i);
}

StateId FiniteControl::add_state(std::string name) {
    if (index_.contains(name)) throw UsageError("duplicate state name '" + name + "'");
    const auto id = static_cast<StateId>(states_.size());
    index_.emplace(name, id);
    states_.push_back(std::move(name));
    accepting_.push_back(false);
    rejecting_.push_back(false);
    loop_.push_back(false);
    return id;
}

std::optional<StateId> FiniteControl::find_state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId FiniteControl::state(std::string_view name) const {
    auto s = find_state(name);
    if (!s) throw UsageError("unknown state '" + std::string(name) + "'");
    return *s;
}

std::optional<std::size_t> FiniteControl::symbol_slot(char symbol) const {
    const auto slot = slots_[static_cast<unsigned char>(symbol)];
    if (slot < 0) return std::nullopt;
    return static_cast<std::size_t>(slot);
}

bool FiniteControl::accepts_input(std::string_view input) const {
    return std::all_of(input.begin(), input.end(),
                       [&](char ch) { return alphabet_.find(ch) != std::string::npos; });
}

void FiniteControl::set_initial_state(StateId s) {
    if (s >= states_.size()) throw UsageError("initial state out of range");
    initial_ = s;
}

void FiniteControl::mark_accepting(StateId s) { accepting_.at(s) = true; }
void FiniteControl::mark_rejecting(StateId s) { rejecting_.at(s) = true; }
void FiniteControl::mark_loop(StateId s) { loop_.at(s) = true; }

namespace {

std::vector<StateId> marked(const std::vector<bool> &flags) {
    std::vector<StateId> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(static_cast<StateId>(i));
    return out;
}

}  // namespace

std::vector<StateId> FiniteControl::accepting_states() const { return marked(accepting_); }
std::vector<StateId> FiniteControl::rejecting_states() const { return marked(rejecting_); }
std::vector<StateId> FiniteControl::loop_states() const { return marked(loop_); }

std::size_t FiniteControl::slot_index(StateId s, char symbol) const {
    if (s >= states_.size()) throw UsageError("state id out of range");
    auto slot = symbol_slot(symbol);
    if (!slot) throw UsageError("symbol '" + symbol_name(symbol) + "' is not in the tape alphabet");
    return static_cast<std::size_t>(s) * gamma_.size() + *slot;
}

// ---------------------------------------------------------------------------
// Pfa2 / Qcfa2 tables

void Pfa2::set_transition(StateId s, char symbol, CoinDistribution d) {
    const auto idx = slot_index(s, symbol);
    if (table_.size() <= idx) table_.resize(num_states() * tape_alphabet().size());
    table_[idx] = std::move(d);
}

void Pfa2::set_transition(StateId s, char symbol, Move m) {
    set_transition(s, symbol, CoinDistribution{{m.next, m.shift, Rational(1)}});
}

const CoinDistribution *Pfa2::transition(StateId s, char symbol) const {
    const auto idx = slot_index(s, symbol);
    if (idx >= table_.size() || !table_[idx]) return nullptr;
    return &*table_[idx];
}

Qcfa2::Qcfa2(std::string alphabet, std::vector<std::string> basis, std::size_t initial_quantum)
    : FiniteControl(std::move(alphabet)), basis_(std::move(basis)), initial_quantum_(initial_quantum) {
    if (basis_.empty()) throw UsageError("quantum basis must be non-empty");
    if (initial_quantum_ >= basis_.size()) throw UsageError("initial quantum state out of range");
}

void Qcfa2::set_unitary(StateId s, char symbol, UnitaryMatrix u, Move m) {
    set_rule(s, symbol, QcfaRule{std::move(u), {m}});
}

void Qcfa2::set_measurement(StateId s, char symbol, Measurement meas, std::vector<Move> per_outcome) {
    set_rule(s, symbol, QcfaRule{std::move(meas), std::move(per_outcome)});
}

void Qcfa2::set_rule(StateId s, char symbol, QcfaRule rule) {
    const auto idx = slot_index(s, symbol);
    if (table_.size() <= idx) table_.resize(num_states() * tape_alphabet().size());
    table_[idx] = std::move(rule);
}

const QcfaRule *Qcfa2::rule(StateId s, char symbol) const {
    const auto idx = slot_index(s, symbol);
    if (idx >= table_.size() || !table_[idx]) return nullptr;
    return &*table_[idx];
}

const FiniteControl &control_of(const Machine &m) {
    return std::visit([](const auto &x) -> const FiniteControl & { return x; }, m);
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::NonStochastic: return "non_stochastic";
        case ViolationKind::BoundaryViolation: return "boundary_violation";
        case ViolationKind::MissingTransition: return "missing_transition";
        case ViolationKind::AcceptRejectOverlap: return "accept_reject_overlap";
        case ViolationKind::UnknownState: return "unknown_state";
        case ViolationKind::InvalidMove: return "invalid_move";
        case ViolationKind::NonUnitary: return "non_unitary";
        case ViolationKind::IncompleteMeasurement: return "incomplete_measurement";
        case ViolationKind::NonProjector: return "non_projector";
        case ViolationKind::MissingOutcome: return "missing_outcome";
        case ViolationKind::DimensionMismatch: return "dimension_mismatch";
        case ViolationKind::NonFinite: return "non_finite";
    }
    return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation &v) { return v.kind == kind; }));
}

namespace {

std::string where(const FiniteControl &m, StateId s, char symbol) {
    return "(" + m.state_name(s) + ", " + symbol_name(symbol) + ")";
}

void check_control(const FiniteControl &m, ValidationReport &report) {
    if (m.num_states() == 0) {
        report.violations.push_back({ViolationKind::UnknownState, "machine has no states"});
        return;
    }
    for (StateId s = 0; s < m.num_states(); ++s) {
        if (m.is_accepting(s) && m.is_rejecting(s)) {
            report.violations.push_back(
                {ViolationKind::AcceptRejectOverlap, "state " + m.state_name(s) + " is both accepting and rejecting"});
        }
    }
}

// Shared per-move checks: target exists, shift in range, boundary rule.
void check_move(const FiniteControl &m, StateId s, char symbol, StateId next, int shift, bool reachable,
                ValidationReport &report) {
    if (next >= m.num_states()) {
        report.violations.push_back({ViolationKind::UnknownState, where(m, s, symbol) + " targets unknown state"});
    }
    if (shift < -1 || shift > 1) {
        report.violations.push_back(
            {ViolationKind::InvalidMove, where(m, s, symbol) + " has head shift " + std::to_string(shift)});
        return;
    }
    if (!reachable) return;
    if (symbol == kLeftEndmarker && shift == -1) {
        report.violations.push_back({ViolationKind::BoundaryViolation, where(m, s, symbol) + " moves left off the tape"});
    }
    if (symbol == kRightEndmarker && shift == 1) {
        report.violations.push_back({ViolationKind::BoundaryViolation, where(m, s, symbol) + " moves right off the tape"});
    }
}

}  // namespace

ValidationReport validate_pfa(const Pfa2 &m, const Tolerances &) {
    ValidationReport report;
    check_control(m, report);
    if (!report.ok()) return report;

    bool non_coin = false;
    const Rational half(1, 2);
    for (StateId s = 0; s < m.num_states(); ++s) {
        if (m.is_halting(s)) continue;
        for (char symbol : m.tape_alphabet()) {
            const auto *dist = m.transition(s, symbol);
            if (dist == nullptr) {
                report.violations.push_back({ViolationKind::MissingTransition, where(m, s, symbol) + " has no entry"});
                continue;
            }
            if (dist->empty()) {
                report.violations.push_back({ViolationKind::NonStochastic, where(m, s, symbol) + " is empty"});
                continue;
            }
            Rational sum;
            bool negative = false;
            for (const auto &e : *dist) {
                if (e.probability < Rational(0)) negative = true;
                sum += e.probability;
                if (e.probability != Rational(0) && e.probability != half && e.probability != Rational(1))
                    non_coin = true;
                check_move(m, s, symbol, e.next, e.shift, e.probability > Rational(0), report);
            }
            if (negative || sum != Rational(1)) {
                report.violations.push_back({ViolationKind::NonStochastic,
                                             where(m, s, symbol) + " probabilities sum to " + sum.str()});
            }
        }
    }
    if (non_coin) report.notes.push_back("probabilities outside {0, 1/2, 1} present");
    return report;
}

ValidationReport validate_qcfa(const Qcfa2 &m, const Tolerances &tol) {
    ValidationReport report;
    check_control(m, report);
    if (!report.ok()) return report;

    const auto dim = m.quantum_dim();
    for (StateId s = 0; s < m.num_states(); ++s) {
        if (m.is_halting(s)) continue;
        for (char symbol : m.tape_alphabet()) {
            const auto *rule = m.rule(s, symbol);
            if (rule == nullptr) {
                report.violations.push_back({ViolationKind::MissingTransition, where(m, s, symbol) + " has no entry"});
                continue;
            }
            if (const auto *u = std::get_if<UnitaryMatrix>(&rule->action)) {
                if (u->dim() != dim) {
                    report.violations.push_back(
                        {ViolationKind::DimensionMismatch, where(m, s, symbol) + " unitary has wrong dimension"});
                } else if (!u->matrix().is_finite()) {
                    report.violations.push_back({ViolationKind::NonFinite, where(m, s, symbol) + " unitary is not finite"});
                } else if (!u->is_unitary(tol.validation)) {
                    report.violations.push_back({ViolationKind::NonUnitary,
                                                 where(m, s, symbol) + " max |U^dagger U - I| = " +
                                                     std::to_string(u->unitarity_error())});
                }
                if (rule->moves.size() != 1) {
                    report.violations.push_back(
                        {ViolationKind::MissingTransition, where(m, s, symbol) + " unitary needs exactly one successor"});
                }
            } else {
                const auto &meas = std::get<Measurement>(rule->action);
                bool finite = true;
                for (const auto &p : meas.projectors()) finite = finite && p.is_finite();
                if (meas.dim() != dim) {
                    report.violations.push_back(
                        {ViolationKind::DimensionMismatch, where(m, s, symbol) + " measurement has wrong dimension"});
                } else if (!finite) {
                    report.violations.push_back(
                        {ViolationKind::NonFinite, where(m, s, symbol) + " measurement is not finite"});
                } else {
                    if (meas.projector_error() > tol.validation) {
                        report.violations.push_back({ViolationKind::NonProjector,
                                                     where(m, s, symbol) + " has a non-projector (error " +
                                                         std::to_string(meas.projector_error()) + ")"});
                    }
                    if (meas.completeness_error() > tol.validation) {
                        report.violations.push_back({ViolationKind::IncompleteMeasurement,
                                                     where(m, s, symbol) + " projectors do not sum to I (error " +
                                                         std::to_string(meas.completeness_error()) + ")"});
                    }
                }
                if (rule->moves.size() != meas.size()) {
                    report.violations.push_back({ViolationKind::MissingOutcome,
                                                 where(m, s, symbol) + " has " + std::to_string(rule->moves.size()) +
                                                     " successors for " + std::to_string(meas.size()) + " outcomes"});
                }
            }
            for (const auto &mv : rule->moves) check_move(m, s, symbol, mv.next, mv.shift, true, report);
        }
    }
    return report;
}

ValidationReport validate(const Machine &m, const Tolerances &tol) {
    return std::visit(
        [&](const auto &x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Pfa2>) return validate_pfa(x, tol);
            else return validate_qcfa(x, tol);
        },
        m);
}

// ---------------------------------------------------------------------------
// Stepping

namespace {

std::size_t shifted(std::size_t head, int shift, const Tape &t) {
    if (shift < 0 && head == 0) throw InternalError("head moved left of the left endmarker");
    const auto next = shift < 0 ? head - 1 : head + static_cast<std::size_t>(shift);
    if (next > t.right_end()) throw InternalError("head moved right of the right endmarker");
    return next;
}

void require_live(const FiniteControl &m, StateId s) {
    if (m.is_halting(s)) throw UsageError("cannot step from halting state " + m.state_name(s));
}

}  // namespace

Configuration initial_configuration(const Pfa2 &m) { return {m.initial_state(), 0}; }

QuantumConfiguration initial_configuration(const Qcfa2 &m) {
    return {m.initial_state(), 0, StateVector::basis(m.quantum_dim(), m.initial_quantum())};
}

PfaStepResult pfa_step(const Pfa2 &m, const Configuration &c, const Tape &t, double u) {
    require_live(m, c.state);
    const char symbol = t.symbol_at(c.head);
    const auto *dist = m.transition(c.state, symbol);
    if (dist == nullptr || dist->empty()) throw InternalError("no transition for " + where(m, c.state, symbol));

    const CoinEntry *chosen = nullptr;
    if (dist->size() == 1) {
        chosen = &dist->front();
    } else {
        double cumulative = 0.0;
        for (const auto &e : *dist) {
            if (e.probability.num() <= 0) continue;
            cumulative += e.probability.to_double();
            chosen = &e;
            if (u < cumulative) break;
        }
        if (chosen == nullptr) throw InternalError("distribution without positive mass at " + where(m, c.state, symbol));
    }
    if (m.is_accepting(chosen->next)) return Halt::Accept;
    if (m.is_rejecting(chosen->next)) return Halt::Reject;
    return Configuration{chosen->next, shifted(c.head, chosen->shift, t)};
}

QcfaStepResult qcfa_step(const Qcfa2 &m, const QuantumConfiguration &c, const Tape &t, double u) {
    require_live(m, c.state);
    const char symbol = t.symbol_at(c.head);
    const auto *rule = m.rule(c.state, symbol);
    if (rule == nullptr) throw InternalError("no rule for " + where(m, c.state, symbol));

    StateVector next_quantum;
    Move mv;
    if (const auto *unitary = std::get_if<UnitaryMatrix>(&rule->action)) {
        next_quantum = apply_unitary(*unitary, c.quantum);
        mv = rule->moves.at(0);
    } else {
        auto result = measure(std::get<Measurement>(rule->action), c.quantum, u);
        if (result.index >= rule->moves.size()) throw InternalError("measurement outcome has no successor");
        mv = rule->moves[result.index];
        next_quantum = std::move(result.state);
    }
    if (m.is_accepting(mv.next)) return Halt::Accept;
    if (m.is_rejecting(mv.next)) return Halt::Reject;
    return QuantumConfiguration{mv.next, shifted(c.head, mv.shift, t), std::move(next_quantum)};
}

}  // namespace qcfa

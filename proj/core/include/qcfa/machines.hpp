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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qcfa/linalg.hpp"
#include "qcfa/rational.hpp"
#include "qcfa/tape.hpp"

namespace qcfa {

using StateId = std::uint32_t;

/// Classical successor: next state and head shift in {-1, 0, +1}.
struct Move {
    StateId next = 0;
    int shift = 0;

    friend bool operator==(const Move &, const Move &) = default;
};

struct CoinEntry {
    StateId next = 0;
    int shift = 0;
    Rational probability;

    friend bool operator==(const CoinEntry &, const CoinEntry &) = default;
};

/// Distribution over (next state, head shift). Entry order is significant: it
/// fixes inverse-CDF sampling.
using CoinDistribution = std::vector<CoinEntry>;

/// Named classical states, the input alphabet and the accept/reject/loop
/// markings shared by both machine kinds.
///
/// Loop states mark the head of the machine's outer repetition: a trajectory
/// starts a new iteration whenever it moves from a non-loop state into a loop
/// state. They carry no semantics beyond that bookkeeping.
class FiniteControl {
  public:
    explicit FiniteControl(std::string alphabet);

    StateId add_state(std::string name);
    std::optional<StateId> find_state(std::string_view name) const;
    StateId state(std::string_view name) const;
    const std::string &state_name(StateId s) const { return states_.at(s); }
    std::size_t num_states() const { return states_.size(); }
    const std::vector<std::string> &state_names() const { return states_; }

    /// Input alphabet (without endmarkers).
    const std::string &alphabet() const { return alphabet_; }
    /// Tape alphabet: left endmarker, input symbols, right endmarker.
    const std::string &tape_alphabet() const { return gamma_; }
    std::optional<std::size_t> symbol_slot(char symbol) const;
    bool accepts_input(std::string_view input) const;

    StateId initial_state() const { return initial_; }
    void set_initial_state(StateId s);

    void mark_accepting(StateId s);
    void mark_rejecting(StateId s);
    void mark_loop(StateId s);
    bool is_accepting(StateId s) const { return s < accepting_.size() && accepting_[s]; }
    bool is_rejecting(StateId s) const { return s < rejecting_.size() && rejecting_[s]; }
    bool is_halting(StateId s) const { return is_accepting(s) || is_rejecting(s); }
    bool is_loop(StateId s) const { return s < loop_.size() && loop_[s]; }

    std::vector<StateId> accepting_states() const;
    std::vector<StateId> rejecting_states() const;
    std::vector<StateId> loop_states() const;

  protected:
    std::size_t slot_index(StateId s, char symbol) const;
    ~FiniteControl() = default;
    FiniteControl(const FiniteControl &) = default;
    FiniteControl &operator=(const FiniteControl &) = default;
    FiniteControl(FiniteControl &&) = default;
    FiniteControl &operator=(FiniteControl &&) = default;

  private:
    std::vector<std::string> states_;
    std::unordered_map<std::string, StateId> index_;
    std::string alphabet_;
    std::string gamma_;
    std::array<std::int16_t, 256> slots_{};
    StateId initial_ = 0;
    std::vector<bool> accepting_;
    std::vector<bool> rejecting_;
    std::vector<bool> loop_;
};

/// Two-way probabilistic finite automaton.
class Pfa2 final : public FiniteControl {
  public:
    explicit Pfa2(std::string alphabet) : FiniteControl(std::move(alphabet)) {}

    void set_transition(StateId s, char symbol, CoinDistribution d);
    /// Deterministic shorthand: probability-1 entry.
    void set_transition(StateId s, char symbol, Move m);
    const CoinDistribution *transition(StateId s, char symbol) const;

  private:
    std::vector<std::optional<CoinDistribution>> table_;
};

using QuantumAction = std::variant<UnitaryMatrix, Measurement>;

/// One Theta/delta entry: a unitary with a single classical successor, or a
/// measurement with one successor per outcome (in outcome order).
struct QcfaRule {
    QuantumAction action;
    std::vector<Move> moves;

    bool is_unitary() const { return std::holds_alternative<UnitaryMatrix>(action); }
};

/// Two-way finite automaton with quantum and classical states.
class Qcfa2 final : public FiniteControl {
  public:
    Qcfa2(std::string alphabet, std::vector<std::string> basis, std::size_t initial_quantum = 0);

    const std::vector<std::string> &basis() const { return basis_; }
    std::size_t quantum_dim() const { return basis_.size(); }
    std::size_t initial_quantum() const { return initial_quantum_; }

    void set_unitary(StateId s, char symbol, UnitaryMatrix u, Move m);
    void set_measurement(StateId s, char symbol, Measurement meas, std::vector<Move> per_outcome);
    void set_rule(StateId s, char symbol, QcfaRule rule);
    const QcfaRule *rule(StateId s, char symbol) const;

  private:
    std::vector<std::string> basis_;
    std::size_t initial_quantum_ = 0;
    std::vector<std::optional<QcfaRule>> table_;
};

using Machine = std::variant<Pfa2, Qcfa2>;

const FiniteControl &control_of(const Machine &m);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    NonStochastic,
    BoundaryViolation,
    MissingTransition,
    AcceptRejectOverlap,
    UnknownState,
    InvalidMove,
    NonUnitary,
    IncompleteMeasurement,
    NonProjector,
    MissingOutcome,
    DimensionMismatch,
    NonFinite,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

/// Empty `violations` means the machine is valid. `notes` are informational
/// (e.g. probabilities outside {0, 1/2, 1}).
struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> notes;

    bool ok() const { return violations.empty(); }
    std::size_t count(ViolationKind kind) const;
};

ValidationReport validate_pfa(const Pfa2 &m, const Tolerances &tol = kDefaultTolerances);
ValidationReport validate_qcfa(const Qcfa2 &m, const Tolerances &tol = kDefaultTolerances);
ValidationReport validate(const Machine &m, const Tolerances &tol = kDefaultTolerances);

// ---------------------------------------------------------------------------
// Single-step semantics

struct Configuration {
    StateId state = 0;
    std::size_t head = 0;

    friend bool operator==(const Configuration &, const Configuration &) = default;
};

struct QuantumConfiguration {
    StateId state = 0;
    std::size_t head = 0;
    StateVector quantum;
};

enum class Halt { Accept, Reject };

using PfaStepResult = std::variant<Configuration, Halt>;
using QcfaStepResult = std::variant<QuantumConfiguration, Halt>;

Configuration initial_configuration(const Pfa2 &m);
QuantumConfiguration initial_configuration(const Qcfa2 &m);

/// Samples delta(state, symbol) with uniform draw `u` by inverse CDF in entry
/// order. Deterministic entries ignore `u`.
PfaStepResult pfa_step(const Pfa2 &m, const Configuration &c, const Tape &t, double u);

/// Applies Theta(state, symbol) and the matching classical transition. `u` is
/// consumed only by measurement actions.
QcfaStepResult qcfa_step(const Qcfa2 &m, const QuantumConfiguration &c, const Tape &t, double u);

}  // namespace qcfa

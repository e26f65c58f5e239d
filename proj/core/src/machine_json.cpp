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

#include "qcfa/machine_json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qcfa/errors.hpp"

namespace qcfa {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix &m) {
    json arr = json::array();
    for (const auto &z : m.data()) arr.push_back({{"re", z.real()}, {"im", z.imag()}});
    return arr;
}

Matrix matrix_from_json(const json &arr) {
    if (!arr.is_array()) throw UsageError("matrix must be an array of {re, im}");
    const auto n = arr.size();
    const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (dim * dim != n || dim == 0) throw UsageError("matrix entry count is not a positive square");
    std::vector<Complex> entries;
    entries.reserve(n);
    for (const auto &e : arr) entries.emplace_back(e.at("re").get<double>(), e.value("im", 0.0));
    return Matrix(dim, entries);
}

json names(const FiniteControl &m, const std::vector<StateId> &ids) {
    json arr = json::array();
    for (auto s : ids) arr.push_back(m.state_name(s));
    return arr;
}

json control_to_json(const FiniteControl &m, std::string_view kind) {
    return json{{"kind", kind},
                {"alphabet", m.alphabet()},
                {"states", m.state_names()},
                {"initial", m.state_name(m.initial_state())},
                {"accepting", names(m, m.accepting_states())},
                {"rejecting", names(m, m.rejecting_states())},
                {"loop_states", names(m, m.loop_states())}};
}

json successors_to_json(const FiniteControl &m, const std::vector<Move> &moves) {
    json arr = json::array();
    for (const auto &mv : moves) arr.push_back({{"next", m.state_name(mv.next)}, {"move", mv.shift}});
    return arr;
}

json to_json(const Pfa2 &m) {
    json doc = control_to_json(m, "pfa2");
    json transitions = json::array();
    for (StateId s = 0; s < m.num_states(); ++s) {
        for (char symbol : m.tape_alphabet()) {
            const auto *dist = m.transition(s, symbol);
            if (dist == nullptr) continue;
            json entries = json::array();
            for (const auto &e : *dist) {
                entries.push_back({{"next", m.state_name(e.next)},
                                   {"move", e.shift},
                                   {"probability", {{"num", e.probability.num()}, {"den", e.probability.den()}}}});
            }
            transitions.push_back(
                {{"state", m.state_name(s)}, {"symbol", symbol_name(symbol)}, {"action", {{"distribution", entries}}}});
        }
    }
    doc["transitions"] = std::move(transitions);
    return doc;
}

json to_json(const Qcfa2 &m) {
    json doc = control_to_json(m, "qcfa2");
    doc["basis"] = m.basis();
    doc["initial_quantum"] = m.basis()[m.initial_quantum()];
    json transitions = json::array();
    for (StateId s = 0; s < m.num_states(); ++s) {
        for (char symbol : m.tape_alphabet()) {
            const auto *rule = m.rule(s, symbol);
            if (rule == nullptr) continue;
            json action;
            if (const auto *u = std::get_if<UnitaryMatrix>(&rule->action)) {
                action["unitary"] = matrix_to_json(u->matrix());
            } else {
                const auto &meas = std::get<Measurement>(rule->action);
                json projectors = json::array();
                for (const auto &p : meas.projectors()) projectors.push_back(matrix_to_json(p));
                action["measurement"] = {{"outcomes", meas.outcomes()}, {"projectors", projectors}};
            }
            action["successors"] = successors_to_json(m, rule->moves);
            transitions.push_back({{"state", m.state_name(s)}, {"symbol", symbol_name(symbol)}, {"action", action}});
        }
    }
    doc["transitions"] = std::move(transitions);
    return doc;
}

void control_from_json(const json &doc, FiniteControl &m) {
    for (const auto &name : doc.at("states")) m.add_state(name.get<std::string>());
    m.set_initial_state(m.state(doc.at("initial").get<std::string>()));
    for (const auto &name : doc.value("accepting", json::array())) m.mark_accepting(m.state(name.get<std::string>()));
    for (const auto &name : doc.value("rejecting", json::array())) m.mark_rejecting(m.state(name.get<std::string>()));
    for (const auto &name : doc.value("loop_states", json::array())) m.mark_loop(m.state(name.get<std::string>()));
}

std::vector<Move> successors_from_json(const FiniteControl &m, const json &arr) {
    std::vector<Move> moves;
    for (const auto &e : arr) moves.push_back({m.state(e.at("next").get<std::string>()), e.at("move").get<int>()});
    return moves;
}

Pfa2 pfa_from_json(const json &doc) {
    Pfa2 m(doc.at("alphabet").get<std::string>());
    control_from_json(doc, m);
    for (const auto &t : doc.at("transitions")) {
        const auto s = m.state(t.at("state").get<std::string>());
        const char symbol = parse_symbol(t.at("symbol").get<std::string>());
        CoinDistribution dist;
        for (const auto &e : t.at("action").at("distribution")) {
            const auto &p = e.at("probability");
            dist.push_back({m.state(e.at("next").get<std::string>()), e.at("move").get<int>(),
                            Rational(p.at("num").get<std::int64_t>(), p.at("den").get<std::int64_t>())});
        }
        m.set_transition(s, symbol, std::move(dist));
    }
    return m;
}

Qcfa2 qcfa_from_json(const json &doc) {
    auto basis = doc.at("basis").get<std::vector<std::string>>();
    const auto initial_label = doc.value("initial_quantum", basis.empty() ? std::string() : basis.front());
    std::size_t initial = basis.size();
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == initial_label) initial = i;
    if (initial == basis.size()) throw UsageError("initial_quantum is not a basis label");

    Qcfa2 m(doc.at("alphabet").get<std::string>(), std::move(basis), initial);
    control_from_json(doc, m);
    for (const auto &t : doc.at("transitions")) {
        const auto s = m.state(t.at("state").get<std::string>());
        const char symbol = parse_symbol(t.at("symbol").get<std::string>());
        const auto &action = t.at("action");
        auto moves = successors_from_json(m, action.at("successors"));
        if (action.contains("unitary")) {
            m.set_rule(s, symbol, QcfaRule{UnitaryMatrix::unchecked(matrix_from_json(action.at("unitary"))), moves});
        } else if (action.contains("measurement")) {
            const auto &meas = action.at("measurement");
            std::vector<Matrix> projectors;
            for (const auto &p : meas.at("projectors")) projectors.push_back(matrix_from_json(p));
            m.set_rule(s, symbol,
                       QcfaRule{Measurement::unchecked(std::move(projectors),
                                                       meas.at("outcomes").get<std::vector<std::string>>()),
                                moves});
        } else {
            throw UsageError("QCFA action must contain 'unitary' or 'measurement'");
        }
    }
    return m;
}

}  // namespace

std::string machine_to_json(const Machine &m, int indent) {
    return std::visit([&](const auto &x) { return to_json(x).dump(indent); }, m);
}

Machine machine_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "pfa2") return pfa_from_json(doc);
        if (kind == "qcfa2") return qcfa_from_json(doc);
        throw UsageError("unknown machine kind '" + kind + "'");
    } catch (const json::exception &e) {
        throw UsageError(std::string("malformed machine JSON: ") + e.what());
    }
}

Machine load_machine_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open machine file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return machine_from_json(buffer.str());
}

void save_machine_file(const Machine &m, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write machine file '" + path + "'");
    out << machine_to_json(m) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace qcfa

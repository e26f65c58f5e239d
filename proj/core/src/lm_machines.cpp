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

#include "qcfa/lm_machines.hpp"

#include <array>
#include <string>

#include "qcfa/errors.hpp"
#include "qcfa/lm_formulas.hpp"

namespace qcfa::lm {

namespace {

constexpr std::string_view kAlphabet = "abc";
constexpr char kLeft = kLeftEndmarker;
constexpr char kRight = kRightEndmarker;

// Any (state, symbol) pair a builder leaves unset is unreachable; route it to
// the rejecting state without moving so the tables stay total.
template <typename Machine, typename Setter>
void fill_unreachable(Machine &m, StateId reject, Setter set) {
    for (StateId s = 0; s < m.num_states(); ++s) {
        if (m.is_halting(s)) continue;
        for (char symbol : m.tape_alphabet()) set(s, symbol, reject);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// 2QCFA

Qcfa2 build_lm_qcfa(double epsilon) { return build_lm_qcfa_with_k(k_for_epsilon(epsilon)); }

Qcfa2 build_lm_qcfa_with_k(int k) {
    if (k < 1) throw UsageError("k must be at least 1");

    Qcfa2 m(std::string(kAlphabet), kBasis, 0);
    const auto identity = UnitaryMatrix::identity(4);
    const auto gadget = coin_flip_gadget();
    const auto basis_measurement = Measurement::computational_basis(kBasis);
    // Re-preparation: the classical state knows the basis vector (q2 or q3)
    // left by the last measurement; map it back to q0.
    const std::array<std::size_t, 4> from_q3{3, 2, 1, 0};
    const std::array<UnitaryMatrix, 2> reprepare{uc(), UnitaryMatrix::unchecked(Matrix::permutation(from_q3))};
    const std::array<std::string, 2> bit_name{"q2", "q3"};

    const auto accept = m.add_state("accept");
    const auto reject = m.add_state("reject");
    m.mark_accepting(accept);
    m.mark_rejecting(reject);

    const auto check = m.add_state("check");
    const auto scan_x = m.add_state("scan_x");
    const auto scan_y = m.add_state("scan_y");
    const auto rewind = m.add_state("rewind");
    const auto sweep = m.add_state("sweep");
    m.set_initial_state(check);
    m.mark_loop(sweep);

    std::array<StateId, 2> back1{}, w1_flip{}, w2l_flip{}, w2r_flip{}, w2r_back{}, restart{};
    for (int b = 0; b < 2; ++b) {
        back1[b] = m.add_state("back1_" + bit_name[b]);
        w1_flip[b] = m.add_state("walk1_flip_" + bit_name[b]);
        w2r_back[b] = m.add_state("walk2R_back_" + bit_name[b]);
        w2l_flip[b] = m.add_state("walk2L_flip_" + bit_name[b]);
        w2r_flip[b] = m.add_state("walk2R_flip_" + bit_name[b]);
        restart[b] = m.add_state("restart_" + bit_name[b]);
    }
    const auto w1_meas = m.add_state("walk1_measure");
    const auto w2l_meas = m.add_state("walk2L_measure");
    const auto w2r_meas = m.add_state("walk2R_measure");
    std::vector<StateId> final_flip(static_cast<std::size_t>(k) + 1), final_meas(static_cast<std::size_t>(k) + 1);
    for (int j = 1; j <= k; ++j) {
        if (j > 1) final_flip[j] = m.add_state("final_flip_" + std::to_string(j));
        final_meas[j] = m.add_state("final_measure_" + std::to_string(j));
    }

    fill_unreachable(m, reject, [&](StateId s, char symbol, StateId r) { m.set_unitary(s, symbol, identity, {r, 0}); });

    auto classical = [&](StateId s, char symbol, StateId next, int shift) {
        m.set_unitary(s, symbol, identity, {next, shift});
    };

    // Form check: exactly one c.
    classical(check, kLeft, scan_x, +1);
    for (char x : {'a', 'b'}) {
        classical(scan_x, x, scan_x, +1);
        classical(scan_y, x, scan_y, +1);
    }
    classical(scan_x, 'c', scan_y, +1);
    classical(scan_x, kRight, reject, 0);
    classical(scan_y, 'c', reject, 0);
    classical(scan_y, kRight, rewind, -1);

    // Step 1: back to square 1.
    for (char x : {'a', 'b', 'c', kRight}) classical(rewind, x, rewind, -1);
    classical(rewind, kLeft, sweep, +1);

    // Steps 2-3: sweep, then measure at $.
    m.set_unitary(sweep, 'a', ua(), {sweep, +1});
    m.set_unitary(sweep, 'b', ub(), {sweep, +1});
    m.set_unitary(sweep, 'c', uc(), {sweep, +1});
    m.set_measurement(sweep, kRight, basis_measurement, {{reject, 0}, {reject, 0}, {back1[0], -1}, {reject, 0}});

    // Step 4: two walks from square 1.
    for (int b = 0; b < 2; ++b) {
        for (char x : {'a', 'b', 'c'}) {
            classical(back1[b], x, back1[b], -1);
            classical(w2r_back[b], x, w2r_back[b], -1);
        }
        classical(back1[b], kRight, back1[b], -1);
        classical(back1[b], kLeft, w1_flip[b], +1);
        classical(w2r_back[b], kRight, w2r_back[b], -1);
        classical(w2r_back[b], kLeft, w2r_flip[b], +1);

        // Walk 1 absorbed: at the left end the head is already next to square 1.
        classical(w1_flip[b], kLeft, w2l_flip[b], +1);
        classical(w1_flip[b], kRight, w2r_back[b], -1);

        // Walk 2 absorbed at the left end, or at $ after walk 1 went left: restart.
        m.set_unitary(w2l_flip[b], kLeft, reprepare[b], {sweep, +1});
        m.set_unitary(w2r_flip[b], kLeft, reprepare[b], {sweep, +1});
        m.set_unitary(w2l_flip[b], kRight, reprepare[b], {rewind, -1});
        // Both walks reached $: first of the k final flips.
        m.set_unitary(w2r_flip[b], kRight, gadget.unitary, {final_meas[1], 0});

        m.set_unitary(restart[b], kRight, reprepare[b], {rewind, -1});
    }
    for (int b = 0; b < 2; ++b) {
        for (char x : {'a', 'b', 'c'}) {
            m.set_unitary(w1_flip[b], x, gadget.unitary, {w1_meas, 0});
            m.set_unitary(w2l_flip[b], x, gadget.unitary, {w2l_meas, 0});
            m.set_unitary(w2r_flip[b], x, gadget.unitary, {w2r_meas, 0});
        }
    }
    for (char x : {'a', 'b', 'c'}) {
        m.set_measurement(w1_meas, x, gadget.measurement, {{w1_flip[0], +1}, {w1_flip[1], -1}});
        m.set_measurement(w2l_meas, x, gadget.measurement, {{w2l_flip[0], +1}, {w2l_flip[1], -1}});
        m.set_measurement(w2r_meas, x, gadget.measurement, {{w2r_flip[0], +1}, {w2r_flip[1], -1}});
    }

    // Step 5: k flips at $, accept on all heads; a tail leaves q3 behind.
    for (int j = 1; j <= k; ++j) {
        if (j > 1) m.set_unitary(final_flip[j], kRight, gadget.unitary, {final_meas[j], 0});
        const Move on_head = j == k ? Move{accept, 0} : Move{final_flip[j + 1], 0};
        m.set_measurement(final_meas[j], kRight, gadget.measurement, {on_head, {restart[1], 0}});
    }
    return m;
}

// ---------------------------------------------------------------------------
// 2PFA

Pfa2 build_lm_pfa(int k) {
    if (k < 1) throw UsageError("k must be at least 1");

    Pfa2 m{std::string(kAlphabet)};
    const Rational half(1, 2);

    const auto accept = m.add_state("accept");
    const auto reject = m.add_state("reject");
    m.mark_accepting(accept);
    m.mark_rejecting(reject);

    const auto start = m.add_state("start");
    m.set_initial_state(start);
    // Preamble states: parity of symbols read so far x number of c's seen (0/1).
    std::array<std::array<StateId, 2>, 2> pre{};
    for (int parity = 0; parity < 2; ++parity)
        for (int seen = 0; seen < 2; ++seen)
            pre[parity][seen] = m.add_state(std::string("pre_") + (parity ? "odd" : "even") + "_c" +
                                            std::to_string(seen));
    const auto seek_left = m.add_state("seek_left");
    const auto seek_right = m.add_state("seek_right");
    m.mark_loop(seek_left);
    m.mark_loop(seek_right);
    const auto to_left = m.add_state("to_left");

    // trip[side][j][back][heads]; side 0 walks toward the left end, side 1 toward $.
    const auto ks = static_cast<std::size_t>(k);
    std::array<std::vector<std::array<std::array<StateId, 2>, 2>>, 2> trip;
    for (int side = 0; side < 2; ++side) {
        trip[side].resize(ks + 1);
        for (int j = 1; j <= k; ++j)
            for (int back = 0; back < 2; ++back)
                for (int heads = 0; heads < 2; ++heads)
                    trip[side][j][back][heads] =
                        m.add_state(std::string("trip") + (side ? "R" : "L") + std::to_string(j) +
                                    (back ? "_back" : "_out") + (heads ? "_allheads" : "_tail"));
    }
    std::vector<std::array<StateId, 2>> sweep(ks + 1);
    for (int j = 1; j <= k; ++j)
        for (int heads = 0; heads < 2; ++heads)
            sweep[j][heads] = m.add_state("sweep" + std::to_string(j) + (heads ? "_allheads" : "_tail"));

    fill_unreachable(m, reject, [&](StateId s, char symbol, StateId r) { m.set_transition(s, symbol, Move{r, 0}); });

    auto det = [&](StateId s, char symbol, StateId next, int shift) { m.set_transition(s, symbol, Move{next, shift}); };
    // One coin flip attached to a head move. Once a tail has been seen the
    // outcome no longer matters and the move is deterministic.
    auto flip = [&](StateId s, char symbol, const std::array<StateId, 2> &next, bool heads_so_far, int shift) {
        if (heads_so_far) {
            m.set_transition(s, symbol, CoinDistribution{{next[1], shift, half}, {next[0], shift, half}});
        } else {
            det(s, symbol, next[0], shift);
        }
    };

    // Preamble: odd length and exactly one c, in one left-to-right pass.
    det(start, kLeft, pre[0][0], +1);
    for (int parity = 0; parity < 2; ++parity) {
        for (int seen = 0; seen < 2; ++seen) {
            const auto s = pre[parity][seen];
            det(s, 'a', pre[1 - parity][seen], +1);
            det(s, 'b', pre[1 - parity][seen], +1);
            if (seen == 0) det(s, 'c', pre[1 - parity][1], +1);
            else det(s, 'c', reject, 0);
            if (seen == 1 && parity == 1) det(s, kRight, seek_left, -1);
            else det(s, kRight, reject, 0);
        }
    }

    // Step 1: find c, then the fair side choice.
    for (char x : {'a', 'b'}) {
        det(seek_left, x, seek_left, -1);
        det(seek_right, x, seek_right, +1);
    }
    for (auto seek : {seek_left, seek_right}) {
        m.set_transition(seek, 'c',
                         CoinDistribution{{trip[0][1][0][1], 0, half}, {trip[1][1][0][1], 0, half}});
    }

    // Step 2: k round trips from c, one flip per move.
    for (int side = 0; side < 2; ++side) {
        const int outward = side == 0 ? -1 : +1;
        const char far_end = side == 0 ? kLeft : kRight;
        for (int j = 1; j <= k; ++j) {
            for (int heads = 0; heads < 2; ++heads) {
                const auto out = trip[side][j][0][heads];
                const auto back = trip[side][j][1][heads];
                const std::array<StateId, 2> out_next{trip[side][j][0][0], trip[side][j][0][1]};
                const std::array<StateId, 2> back_next{trip[side][j][1][0], trip[side][j][1][1]};
                if (j == 1) flip(out, 'c', out_next, heads, outward);
                for (char x : {'a', 'b'}) {
                    flip(out, x, out_next, heads, outward);
                    flip(back, x, back_next, heads, -outward);
                }
                flip(out, far_end, back_next, heads, -outward);
                if (j < k) {
                    const std::array<StateId, 2> next_trip{trip[side][j + 1][0][0], trip[side][j + 1][0][1]};
                    flip(back, 'c', next_trip, heads, outward);
                } else if (heads) {
                    det(back, 'c', reject, 0);
                } else {
                    det(back, 'c', to_left, -1);
                }
            }
        }
    }

    // Step 3: k sweeps of l flips, alternating direction, starting at square 1.
    for (char x : {'a', 'b', 'c'}) det(to_left, x, to_left, -1);
    det(to_left, kLeft, sweep[1][1], +1);
    for (int j = 1; j <= k; ++j) {
        const bool rightward = (j % 2) == 1;
        const int dir = rightward ? +1 : -1;
        const char end = rightward ? kRight : kLeft;
        for (int heads = 0; heads < 2; ++heads) {
            const auto s = sweep[j][heads];
            for (char x : {'a', 'b', 'c'}) flip(s, x, {sweep[j][0], sweep[j][1]}, heads, dir);
            if (j < k) det(s, end, sweep[j + 1][heads], -dir);
            else if (heads) det(s, end, accept, 0);
            else det(s, end, rightward ? seek_left : seek_right, -dir);
        }
    }
    return m;
}

Pfa2 build_walk_pfa() {
    Pfa2 m{"a"};
    const auto accept = m.add_state("accept");
    const auto reject = m.add_state("reject");
    const auto start = m.add_state("start");
    const auto walk = m.add_state("walk");
    m.mark_accepting(accept);
    m.mark_rejecting(reject);
    m.set_initial_state(start);
    m.set_transition(start, kLeft, Move{walk, +1});
    m.set_transition(start, 'a', Move{reject, 0});
    m.set_transition(start, kRight, Move{reject, 0});
    m.set_transition(walk, 'a', CoinDistribution{{walk, +1, Rational(1, 2)}, {walk, -1, Rational(1, 2)}});
    m.set_transition(walk, kLeft, Move{reject, 0});
    m.set_transition(walk, kRight, Move{accept, 0});
    return m;
}

}  // namespace qcfa::lm

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

#include "qcfa/machines.hpp"

namespace qcfa::lm {

/// One-sided-error 2QCFA for L_m with error bound epsilon (k derived from
/// epsilon). Each outer iteration:
///   1. rewind to the first input square and re-prepare |q0> with a basis
///      permutation chosen by the classical state;
///   2. sweep right applying ua() on a/b and uc() on c;
///   3. measure in the computational basis at $, rejecting unless q2;
///   4. run two symmetric walks from square 1, one coin-flip gadget per move,
///      each absorbed at either endmarker;
///   5. if both walks hit $, flip k more coins at $ and accept on all heads.
/// A deterministic pass first rejects inputs without exactly one c.
/// The sweep state is the loop state.
Qcfa2 build_lm_qcfa(double epsilon);

/// Same machine with an explicit number of final coin flips (k >= 1).
Qcfa2 build_lm_qcfa_with_k(int k);

/// Bounded-error 2PFA for L_m with repetition exponent k >= 1. A deterministic
/// pass rejects inputs of even length or without exactly one c. Each outer
/// iteration:
///   1. walk to c and flip a fair coin to pick a side;
///   2. make k round trips between c and that side's endmarker, one coin flip
///      per head move (k(2n+2) or k(2m+2) flips), rejecting if all are heads;
///   3. make k end-to-end sweeps of l moves, one flip per move, accepting if
///      all k*l flips are heads.
/// The two seek-to-c states are the loop states.
Pfa2 build_lm_pfa(int k);

/// Symmetric walk over the tape: starts on square 1 of a^(N-1), steps left or
/// right with probability 1/2, accepts at $ and rejects at the left end.
/// Acceptance probability is 1/N.
Pfa2 build_walk_pfa();

}  // namespace qcfa::lm

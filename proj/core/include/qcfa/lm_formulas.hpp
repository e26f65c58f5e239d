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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcfa/linalg.hpp"

namespace qcfa::lm {

/// Quantum basis labels of the L_m machines.
inline const std::vector<std::string> kBasis{"q0", "q1", "q2", "q3"};

/// Parameters of the two L_m recognisers: epsilon for the 2QCFA and the
/// repetition exponent k for the 2PFA. For the 2QCFA, k is derived from
/// epsilon.
struct LmParams {
    double epsilon = 0.25;
    int k = 3;

    static LmParams from_epsilon(double epsilon);
};

/// x c y with x, y over {a, b} and |x| = |y|; c is the literal letter.
/// Throws UsageError for symbols outside {a, b, c}.
bool lm_membership(std::string_view w);

/// Rotation by sqrt(2)*pi on span{q0,q1} and its inverse on span{q2,q3}.
UnitaryMatrix ua();
/// Same operator as ua(); b is read exactly like a.
inline UnitaryMatrix ub() { return ua(); }
/// Swaps span{q0,q1} with span{q2,q3}.
UnitaryMatrix uc();

/// ua()^k in closed form.
UnitaryMatrix ua_power(std::int64_t k);
/// ua()^l * uc() * ua()^k in closed form (angle (k - l) * sqrt(2) * pi).
UnitaryMatrix sandwich_power(std::int64_t l, std::int64_t k);

/// State after the middle-check sweep over a^n c a^m starting from |q0>.
StateVector post_loop2_state(std::int64_t n, std::int64_t m);

/// Probability that the basis measurement after the sweep does not return q2,
/// i.e. sin^2(sqrt(2) d pi) with d = n - m.
double step3_reject_prob(std::int64_t d);

/// 1 / (2 d^2 + 1). Throws UsageError for d = 0.
double lemma2_lower_bound(std::int64_t d);

struct CoinGadget {
    UnitaryMatrix unitary;
    Measurement measurement;  // outcomes {"head", "tail"}
};

/// Hadamard-type rotation on span{q0,q1} and on span{q2,q3}, followed by the
/// two-outcome measurement head = {q0, q2}, tail = {q1, q3}.
CoinGadget coin_flip_gadget();

/// Symmetric walk from position 1 absorbed at 0 and N: probability of
/// absorption at N, which is 1/N. Throws UsageError for N < 2.
double walk_right_absorption(std::int64_t n_absorb);

/// 1 / (2^k (n + m + 2)^2): acceptance chance of one walk-and-flip round.
double iteration_accept_prob(std::int64_t n, std::int64_t m, int k);

/// 1 + ceil(log2(1/eps)); exact powers of two map to their exponent
/// (eps = 0.25 gives 3). Throws UsageError unless 0 < eps < 1/2.
int k_for_epsilon(double eps);

/// 1 - (1 - 1/(2^k (2n+2)^2))^reps.
double qcfa_member_accept_after_reps(std::int64_t n, int k, std::int64_t reps);

struct NonmemberRejectBound {
    double p_r_bound = 0.0;    // 1/(2 d^2 + 1)
    double p_a_bound = 0.0;    // eps / (2 (n+m+2)^2)
    double series_value = 0.0; // reject-first series of the two bounds
    double final_bound = 0.0;  // 1 / (1 + eps)
};

NonmemberRejectBound qcfa_nonmember_reject_bound(std::int64_t n, std::int64_t m, double eps);

struct PfaIterationProbs {
    double p_reject = 0.0;
    double p_accept = 0.0;
};

/// Per-iteration reject/accept probabilities of the 2PFA on x c y with
/// |x| = n, |y| = m. Reduces to the member expression when n = m.
PfaIterationProbs pfa_iteration_probs(std::int64_t n, std::int64_t m, int k);

/// 1 / (1 + 2^-(k+2)). The built machine does not reach this on short
/// members; its exact member acceptance is 1 / (1 + 2^-k / (1 - P_r)).
double pfa_member_accept_lb(int k);
/// 1 / (1 + 2^(2-k)): member acceptance bound that holds for every member.
double pfa_member_accept_lb_corrected(int k);
/// 1 / (2^-(k-1) + 1).
double pfa_nonmember_reject_lb(int k);

struct FormulaValue {
    std::string name;
    std::string equation_tag;
    double value = 0.0;
};

using FormulaReport = std::vector<FormulaValue>;

/// Parameters for evaluate_formulas; formulas whose inputs are missing are
/// skipped.
struct FormulaQuery {
    std::optional<std::int64_t> d;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> m;
    std::optional<int> k;
    std::optional<double> epsilon;
    std::optional<std::int64_t> reps;
};

FormulaReport evaluate_formulas(const FormulaQuery &q);

}  // namespace qcfa::lm

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

#include "qcfa/lm_formulas.hpp"

#include <cmath>

#include "qcfa/angle.hpp"
#include "qcfa/errors.hpp"
#include "qcfa/exact.hpp"

namespace qcfa::lm {

LmParams LmParams::from_epsilon(double epsilon) { return LmParams{epsilon, k_for_epsilon(epsilon)}; }

bool lm_membership(std::string_view w) {
    std::size_t c_count = 0;
    std::size_t c_pos = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        switch (w[i]) {
            case 'a':
            case 'b': break;
            case 'c':
                ++c_count;
                c_pos = i;
                break;
            default: throw UsageError("symbol '" + std::string(1, w[i]) + "' is not in {a, b, c}");
        }
    }
    return c_count == 1 && 2 * c_pos + 1 == w.size();
}

namespace {

Matrix rotation_blocks(const CosSin &t) {
    return Matrix{{t.cos, -t.sin, 0.0, 0.0},
                  {t.sin, t.cos, 0.0, 0.0},
                  {0.0, 0.0, t.cos, t.sin},
                  {0.0, 0.0, -t.sin, t.cos}};
}

std::int64_t checked_difference(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_sub_overflow(a, b, &out)) throw UsageError("exponent difference overflows");
    return out;
}

}  // namespace

UnitaryMatrix ua() { return ua_power(1); }

UnitaryMatrix uc() {
    return UnitaryMatrix::unchecked(Matrix{{0.0, 0.0, 1.0, 0.0},
                                           {0.0, 0.0, 0.0, 1.0},
                                           {1.0, 0.0, 0.0, 0.0},
                                           {0.0, 1.0, 0.0, 0.0}});
}

UnitaryMatrix ua_power(std::int64_t k) { return UnitaryMatrix::unchecked(rotation_blocks(sqrt2_pi_rotation(k))); }

UnitaryMatrix sandwich_power(std::int64_t l, std::int64_t k) {
    const auto t = sqrt2_pi_rotation(checked_difference(k, l));
    return UnitaryMatrix::unchecked(Matrix{{0.0, 0.0, t.cos, t.sin},
                                           {0.0, 0.0, -t.sin, t.cos},
                                           {t.cos, -t.sin, 0.0, 0.0},
                                           {t.sin, t.cos, 0.0, 0.0}});
}

StateVector post_loop2_state(std::int64_t n, std::int64_t m) {
    return apply_unitary(sandwich_power(m, n), StateVector::basis(4, 0));
}

double step3_reject_prob(std::int64_t d) { return d == 0 ? 0.0 : sin2_sqrt2_pi(d); }

double lemma2_lower_bound(std::int64_t d) {
    if (d == 0) throw UsageError("lemma2_lower_bound needs d != 0");
    const double dd = static_cast<double>(d);
    return 1.0 / (2.0 * dd * dd + 1.0);
}

CoinGadget coin_flip_gadget() {
    const double h = 1.0 / std::sqrt(2.0);
    auto unitary = UnitaryMatrix::unchecked(Matrix{{h, h, 0.0, 0.0},
                                                   {h, -h, 0.0, 0.0},
                                                   {0.0, 0.0, h, h},
                                                   {0.0, 0.0, h, -h}});
    auto measurement = Measurement::unchecked(
        {Matrix::diagonal_projector(4, {0, 2}), Matrix::diagonal_projector(4, {1, 3})}, {"head", "tail"});
    return {std::move(unitary), std::move(measurement)};
}

double walk_right_absorption(std::int64_t n_absorb) {
    if (n_absorb < 2) throw UsageError("walk needs N >= 2");
    return 1.0 / static_cast<double>(n_absorb);
}

double iteration_accept_prob(std::int64_t n, std::int64_t m, int k) {
    if (k < 1) throw UsageError("k must be at least 1");
    const double span = static_cast<double>(n + m + 2);
    return std::ldexp(1.0, -k) / (span * span);
}

int k_for_epsilon(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw UsageError("epsilon must lie in (0, 1/2)");
    // Smallest j with 2^-j <= eps, i.e. j = ceil(log2(1/eps)) without log rounding.
    int j = 0;
    while (std::ldexp(1.0, -j) > eps) ++j;
    const int k = 1 + j;
    if (!(eps >= std::ldexp(1.0, -(k - 1)))) throw InternalError("k_for_epsilon postcondition failed");
    return k;
}

double qcfa_member_accept_after_reps(std::int64_t n, int k, std::int64_t reps) {
    if (reps < 1) throw UsageError("reps must be at least 1");
    if (k < 1) throw UsageError("k must be at least 1");
    const double span = static_cast<double>(2 * n + 2);
    const double per_round = std::ldexp(1.0, -k) / (span * span);
    return -std::expm1(static_cast<double>(reps) * std::log1p(-per_round));
}

NonmemberRejectBound qcfa_nonmember_reject_bound(std::int64_t n, std::int64_t m, double eps) {
    if (n == m) throw UsageError("nonmember bound needs n != m");
    (void)k_for_epsilon(eps);  // range check
    NonmemberRejectBound b;
    b.p_r_bound = lemma2_lower_bound(n - m);
    const double span = static_cast<double>(n + m + 2);
    b.p_a_bound = eps / (2.0 * span * span);
    b.series_value = two_outcome_series(b.p_a_bound, b.p_r_bound, SeriesVariant::RejectFirst);
    b.final_bound = 1.0 / (1.0 + eps);
    return b;
}

PfaIterationProbs pfa_iteration_probs(std::int64_t n, std::int64_t m, int k) {
    if (k < 1) throw UsageError("k must be at least 1");
    if (n < 0 || m < 0) throw UsageError("flank lengths must be non-negative");
    const auto l = n + m + 1;
    PfaIterationProbs p;
    p.p_reject = 0.5 * std::ldexp(1.0, static_cast<int>(-k * (2 * n + 2))) +
                 0.5 * std::ldexp(1.0, static_cast<int>(-k * (2 * m + 2)));
    p.p_accept = (1.0 - p.p_reject) * std::ldexp(1.0, static_cast<int>(-k * l));
    return p;
}

double pfa_member_accept_lb(int k) {
    if (k < 1) throw UsageError("k must be at least 1");
    return 1.0 / (1.0 + std::ldexp(1.0, -(k + 2)));
}

double pfa_member_accept_lb_corrected(int k) {
    if (k < 1) throw UsageError("k must be at least 1");
    return 1.0 / (1.0 + std::ldexp(1.0, 2 - k));
}

double pfa_nonmember_reject_lb(int k) {
    if (k < 1) throw UsageError("k must be at least 1");
    return 1.0 / (std::ldexp(1.0, -(k - 1)) + 1.0);
}

FormulaReport evaluate_formulas(const FormulaQuery &q) {
    FormulaReport out;
    if (q.d) {
        out.push_back({"step3_reject_prob", "sin^2(sqrt(2)*d*pi)", step3_reject_prob(*q.d)});
        if (*q.d != 0) out.push_back({"lemma2_lower_bound", "1/(2*d^2+1)", lemma2_lower_bound(*q.d)});
    }
    if (q.epsilon) {
        out.push_back({"k_for_epsilon", "1+ceil(log2(1/eps))", static_cast<double>(k_for_epsilon(*q.epsilon))});
    }
    if (q.n && q.m && q.k) {
        out.push_back({"iteration_accept_prob", "2^-k/(n+m+2)^2", iteration_accept_prob(*q.n, *q.m, *q.k)});
        const auto p = pfa_iteration_probs(*q.n, *q.m, *q.k);
        out.push_back({"pfa_iteration_reject", "2^-1*2^-k(2n+2)+2^-1*2^-k(2m+2)", p.p_reject});
        out.push_back({"pfa_iteration_accept", "(1-P_r)*2^-k(n+m+1)", p.p_accept});
        if (*q.n == *q.m) {
            out.push_back({"pfa_member_accept_series", "P_a(1-P_r)/(P_a(1-P_r)+P_r)",
                           two_outcome_series(p.p_accept, p.p_reject, SeriesVariant::AcceptFirst)});
        } else {
            out.push_back({"pfa_nonmember_reject_series", "P_r/(P_a+P_r-P_a*P_r)",
                           two_outcome_series(p.p_accept, p.p_reject, SeriesVariant::RejectFirst)});
        }
    }
    if (q.n && q.m && q.epsilon && *q.n != *q.m) {
        const auto b = qcfa_nonmember_reject_bound(*q.n, *q.m, *q.epsilon);
        out.push_back({"qcfa_p_r_bound", "1/(2(n-m)^2+1)", b.p_r_bound});
        out.push_back({"qcfa_p_a_bound", "eps/(2(n+m+2)^2)", b.p_a_bound});
        out.push_back({"qcfa_reject_series", "P_r/(P_a+P_r-P_a*P_r)", b.series_value});
        out.push_back({"qcfa_reject_final_bound", "1/(1+eps)", b.final_bound});
    }
    if (q.n && q.k && q.reps) {
        out.push_back({"qcfa_member_accept_after_reps", "1-(1-1/(2^k(2n+2)^2))^reps",
                       qcfa_member_accept_after_reps(*q.n, *q.k, *q.reps)});
    }
    if (q.k) {
        out.push_back({"pfa_member_accept_lb", "1/(1+2^-(k+2))", pfa_member_accept_lb(*q.k)});
        out.push_back({"pfa_member_accept_lb_corrected", "1/(1+2^(2-k))", pfa_member_accept_lb_corrected(*q.k)});
        out.push_back({"pfa_nonmember_reject_lb", "1/(2^-(k-1)+1)", pfa_nonmember_reject_lb(*q.k)});
    }
    return out;
}

}  // namespace qcfa::lm

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

// Acceptance suite: one PASS/FAIL line per criterion.
//   qcfa_acceptance [--criterion N]...
// Exit status is 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "commands.hpp"
#include "qcfa/exact.hpp"
#include "qcfa/lm_formulas.hpp"
#include "qcfa/lm_machines.hpp"
#include "qcfa/runtime.hpp"

using namespace qcfa;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string member(int n) { return std::string(n, 'a') + "c" + std::string(n, 'a'); }
std::string word(int n, int m) { return std::string(n, 'a') + "c" + std::string(m, 'a'); }

Matrix repeated(const Matrix &u, std::int64_t k) {
    Matrix p = Matrix::identity(u.dim());
    for (std::int64_t i = 0; i < k; ++i) p = u * p;
    return p;
}

// 1. Closed-form rotations against brute-force products.
Verdict criterion1() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> exponent(0, 2000);
    const Matrix ua = lm::ua().matrix(), uc = lm::uc().matrix();
    double err = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto k = exponent(rng);
        err = std::max(err, max_abs_diff(lm::ua_power(k).matrix(), repeated(ua, k)));
    }
    for (int i = 0; i < 200; ++i) {
        const auto l = exponent(rng), k = exponent(rng);
        err = std::max(err, max_abs_diff(lm::sandwich_power(l, k).matrix(), repeated(ua, l) * uc * repeated(ua, k)));
    }
    const double secs = seconds_since(t0);
    return {err < 1e-9 && secs < 1.0,
            "max entry error " + fmt("%.3g", err) + " (< 1e-9) over 200+200 exponents in [0, 2000], " +
                fmt("%.3f", secs) + " s (< 1 s)"};
}

// 2. One-sided error on members.
Verdict criterion2() {
    const auto t0 = Clock::now();
    const auto q = lm::build_lm_qcfa(0.25);
    double worst = 0.0, residual = 0.0;
    std::uint64_t steps = 0;
    for (int n = 0; n <= 5; ++n) {
        const auto r = qcfa_forward(q, member(n), 1e-9, 150'000,
                                    [&](const QcfaForwardResult &x) { worst = std::max(worst, x.reject); });
        residual = std::max(residual, r.residual);
        steps += r.steps;
    }
    RunConfig cfg;
    cfg.seed = 20;
    cfg.trials = 10'000;
    cfg.max_steps = 100'000'000;
    const auto s = run_trials(Machine{q}, "aca", cfg);
    const double secs = seconds_since(t0);
    return {worst < 1e-12 && s.reject == 0 && secs < 60.0,
            "max reject mass over every forward step " + fmt("%.3g", worst) + " (< 1e-12, " + std::to_string(steps) +
                " steps, largest residual " + fmt("%.3g", residual) + "); aca rejects " + std::to_string(s.reject) +
                "/10000 (timeouts " + std::to_string(s.timeout) + "); " + fmt("%.1f", secs) + " s (< 60 s)"};
}

// 3. Step-3 rejection bound and the machine's empirical step-3 rate.
Verdict criterion3() {
    const auto t0 = Clock::now();
    double margin = 1.0;
    for (std::int64_t d = 1; d <= 10'000; ++d) margin = std::min(margin, lm::step3_reject_prob(d) - lm::lemma2_lower_bound(d));
    // Rejections of a form-valid nonmember happen only at the step-3
    // measurement, once per iteration.
    RunConfig cfg;
    cfg.seed = 30;
    cfg.trials = 10'000;
    cfg.max_steps = 100'000'000;
    const auto q = Machine{lm::build_lm_qcfa(0.25)};
    auto s = run_trials(q, "aaca", cfg);
    while (s.total_iterations < 10'000) {
        cfg.trials *= 2;
        s = run_trials(q, "aaca", cfg);
    }
    const double p = 0.929108092834409;
    const double rate = static_cast<double>(s.reject) / static_cast<double>(s.total_iterations);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(s.total_iterations));
    const double z = (rate - p) / sigma;
    const double secs = seconds_since(t0);
    return {margin > 0.0 && std::abs(z) <= 4.0 && secs < 60.0,
            "min sin^2 - 1/(2d^2+1) over d <= 1e4 = " + fmt("%.3g", margin) + " (> 0); aaca step-3 reject rate " +
                fmt("%.5f", rate) + " over " + std::to_string(s.total_iterations) + " iterations, z = " +
                fmt("%.2f", z) + " (|z| <= 4); " + fmt("%.1f", secs) + " s (< 60 s)"};
}

// 4. Coin-flip gadget.
Verdict criterion4() {
    const auto g = lm::coin_flip_gadget();
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (double p : outcome_probabilities(g.measurement, apply_unitary(g.unitary, StateVector::basis(4, i))))
            err = std::max(err, std::abs(p - 0.5));
    const bool unitary = UnitaryMatrix::checked(g.unitary.matrix()).is_unitary();
    return {err < 1e-12 && unitary && g.measurement.is_valid(),
            "max |p - 1/2| over 4 basis states " + fmt("%.3g", err) + " (< 1e-12); unitarity error " +
                fmt("%.3g", g.unitary.unitarity_error())};
}

// 5. Walk absorption law and per-iteration acceptance.
Verdict criterion5() {
    const auto walk = lm::build_walk_pfa();
    double err = 0.0;
    for (int n = 2; n <= 200; ++n)
        err = std::max(err, std::abs(absorption_probs(build_config_chain(walk, std::string(n - 1, 'a'))).p_accept - 1.0 / n));
    RunConfig cfg;
    cfg.seed = 50;
    cfg.trials = 2'000;
    cfg.max_steps = 100'000'000;
    const auto q = Machine{lm::build_lm_qcfa_with_k(2)};
    auto s = run_trials(q, "aca", cfg);
    while (s.total_iterations < 100'000) {
        cfg.trials *= 2;
        s = run_trials(q, "aca", cfg);
    }
    const double p = lm::iteration_accept_prob(1, 1, 2);
    const double rate = static_cast<double>(s.accept) / static_cast<double>(s.total_iterations);
    const double z = (rate - p) / std::sqrt(p * (1 - p) / static_cast<double>(s.total_iterations));
    return {err < 1e-10 && std::abs(z) <= 4.0,
            "max |absorption - 1/N| for N in [2, 200] " + fmt("%.3g", err) + " (< 1e-10); aca k=2 accept/iteration " +
                fmt("%.6f", rate) + " vs 1/64 over " + std::to_string(s.total_iterations) + " iterations, z = " +
                fmt("%.2f", z) + " (|z| <= 4)"};
}

// 6. Error bound on nonmembers.
Verdict criterion6() {
    const auto t0 = Clock::now();
    const auto q = lm::build_lm_qcfa(0.25);
    bool ok = true;
    std::string detail;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {3, 1}, {1, 3}}) {
        const auto r = qcfa_forward(q, word(n, m), 1e-6);
        ok = ok && r.residual < 1e-6 && r.reject >= 0.75;
        detail += "(" + std::to_string(n) + "," + std::to_string(m) + ") reject " + fmt("%.6f", r.reject) +
                  " residual " + fmt("%.2g", r.residual) + "; ";
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 600.0, detail + "threshold 0.75; " + fmt("%.1f", secs) + " s (< 600 s)"};
}

// 7. 2PFA bounds.
Verdict criterion7() {
    bool member_ok = true, nonmember_ok = true, pr_ok = true;
    double worst_member = 1.0, worst_member_bound = 0.0, worst_member_gap = 1.0;
    std::string worst_member_case;
    double worst_nonmember_gap = 1.0;
    for (int k = 1; k <= 2; ++k) {
        const auto p = lm::build_lm_pfa(k);
        const double member_bound = 1.0 / (1.0 + std::ldexp(1.0, -(k + 2)));
        const double nonmember_bound = 1.0 / (std::ldexp(1.0, -(k - 1)) + 1.0);
        for (int n = 0; n <= 3; ++n) {
            const auto r = absorption_probs(build_config_chain(p, member(n)));
            const double gap = r.p_accept - member_bound;
            if (gap < worst_member_gap) {
                worst_member_gap = gap;
                worst_member = r.p_accept;
                worst_member_bound = member_bound;
                worst_member_case = member(n) + " k=" + std::to_string(k);
            }
            member_ok = member_ok && gap >= 0.0;
            const auto split = first_iteration_exact(p, member(n));
            pr_ok = pr_ok && split.reject == BigRational(1) / pow(boost::multiprecision::cpp_int(2), k * (2 * n + 2));
        }
        for (int l = 1; l <= 7; l += 2)
            for (int n = 0; n < l; ++n) {
                const int m = l - 1 - n;
                if (n == m) continue;
                const auto r = absorption_probs(build_config_chain(p, word(n, m)));
                worst_nonmember_gap = std::min(worst_nonmember_gap, r.p_reject - nonmember_bound);
                nonmember_ok = nonmember_ok && r.p_reject >= nonmember_bound;
            }
    }
    return {member_ok && nonmember_ok && pr_ok,
            std::string("member p_accept >= 1/(1+2^-(k+2)): ") + (member_ok ? "holds" : "violated") + ", worst " +
                worst_member_case + " p_accept " + fmt("%.6f", worst_member) + " vs " + fmt("%.6f", worst_member_bound) +
                "; nonmember p_reject >= 1/(2^-(k-1)+1): " + (nonmember_ok ? "holds" : "violated") + ", min margin " +
                fmt("%.4g", worst_nonmember_gap) + "; exact first-iteration P_r = 2^-k(2n+2): " + (pr_ok ? "holds" : "violated")};
}

// 8. Running-time shape.
Verdict criterion8() {
    const auto t0 = Clock::now();
    cli::Options q;
    q.machine = "qcfa-lm:0.25";
    q.family = "member";
    q.sizes = "1..6";
    q.trials = 300;
    q.seed = 80;
    const auto qs = cli::cmd_sweep(q);
    cli::Options p;
    p.machine = "pfa-lm:1";
    p.family = "member";
    p.sizes = "1..4";  // l = 3, 5, 7, 9
    p.trials = 2000;
    p.seed = 81;
    const auto ps = cli::cmd_sweep(p);
    const double qslope = qs.record["fit"]["slope"].get<double>();
    const double pslope = ps.record["fit"]["slope"].get<double>();
    const double secs = seconds_since(t0);
    const bool qok = qslope >= 2.0 && qslope <= 5.0;
    const bool pok = pslope >= 1.5;
    return {qok && pok && secs < 900.0,
            "2qcfa log-log slope " + fmt("%.3f", qslope) + " (in [2, 5]); 2pfa log2(mean steps) per unit l " +
                fmt("%.3f", pslope) + " (>= 1.5; " + fmt("%.3f", 2.0 * pslope) + " per size step l -> l+2); " +
                fmt("%.1f", secs) + " s (< 900 s)"};
}

// 9. Monte Carlo against exact probabilities.
Verdict criterion9() {
    struct Case {
        std::string spec;
        std::string input;
    };
    const std::vector<Case> cases{
        {"pfa-lm:1", "aca"},     {"pfa-lm:1", "c"},       {"pfa-lm:1", "acaaa"},   {"pfa-lm:1", "abcab"},
        {"pfa-lm:1", "aaacb"},   {"pfa-lm:2", "c"},       {"pfa-lm:2", "aca"},     {"pfa-lm:2", "cabab"},
        {"pfa-lm:2", "bbcaa"},   {"pfa-lm:1", "ab"},      {"qcfa-lm-k:1", "c"},    {"qcfa-lm-k:1", "aca"},
        {"qcfa-lm-k:1", "acab"}, {"qcfa-lm-k:1", "cab"},  {"qcfa-lm-k:2", "aaca"}, {"qcfa-lm-k:2", "acaaa"},
        {"qcfa-lm-k:1", "aacb"}, {"qcfa-lm-k:2", "caaa"}, {"qcfa-lm-k:1", "abc"},  {"qcfa-lm:0.25", "aacaaa"},
    };
    int inside = 0;
    std::string misses;
    std::uint64_t seed = 900;
    for (const auto &c : cases) {
        const auto ms = cli::resolve_machine(c.spec);
        double exact;
        if (const auto *p = std::get_if<Pfa2>(&ms.machine)) {
            exact = absorption_probs(build_config_chain(*p, c.input)).p_accept;
        } else {
            exact = qcfa_forward(std::get<Qcfa2>(ms.machine), c.input, 1e-10).accept;
        }
        RunConfig cfg;
        cfg.seed = seed++;
        cfg.trials = 2000;
        cfg.max_steps = 100'000'000;
        const auto s = run_trials(ms.machine, c.input, cfg);
        if (s.accept_ci.contains(exact)) {
            ++inside;
        } else {
            misses += " " + c.spec + "/" + c.input;
        }
    }
    return {inside >= 17, std::to_string(inside) + "/20 exact probabilities inside the Wilson 95% interval (>= 17)" +
                              (misses.empty() ? std::string() : "; misses:" + misses)};
}

// 10. Validator categories on hand-broken machines.
Verdict criterion10() {
    constexpr char L = kLeftEndmarker, R = kRightEndmarker;
    auto exactly = [](const ValidationReport &r, ViolationKind kind) {
        if (r.violations.empty()) return false;
        for (const auto &v : r.violations)
            if (v.kind != kind) return false;
        return true;
    };
    auto pfa = [&] {
        Pfa2 m("a");
        const auto acc = m.add_state("acc"), rej = m.add_state("rej"), s = m.add_state("s");
        m.mark_accepting(acc);
        m.mark_rejecting(rej);
        m.set_initial_state(s);
        m.set_transition(s, L, Move{s, +1});
        m.set_transition(s, 'a', CoinDistribution{{acc, +1, Rational(1, 2)}, {rej, -1, Rational(1, 2)}});
        m.set_transition(s, R, Move{rej, 0});
        return m;
    };
    auto non_stochastic = pfa();
    non_stochastic.set_transition(2, 'a', CoinDistribution{{0, 0, Rational(1, 2)}, {1, 0, Rational(1, 4)}});
    auto boundary = pfa();
    boundary.set_transition(2, L, CoinDistribution{{2, -1, Rational(1, 2)}, {2, +1, Rational(1, 2)}});

    auto non_unitary = lm::build_lm_qcfa(0.25);
    Matrix bad = Matrix::identity(4);
    bad(0, 0) = 1.1;
    non_unitary.set_unitary(non_unitary.state("sweep"), 'a', UnitaryMatrix::unchecked(bad),
                            {non_unitary.state("sweep"), +1});
    auto incomplete = lm::build_lm_qcfa(0.25);
    incomplete.set_measurement(incomplete.state("sweep"), R,
                               Measurement::unchecked({Matrix::diagonal_projector(4, {0, 1, 2})}, {"p"}),
                               {{incomplete.state("reject"), 0}});

    const bool a = validate_pfa(pfa()).ok();
    const bool b = exactly(validate_pfa(non_stochastic), ViolationKind::NonStochastic);
    const bool c = exactly(validate_qcfa(non_unitary), ViolationKind::NonUnitary);
    const bool d = exactly(validate_qcfa(incomplete), ViolationKind::IncompleteMeasurement);
    const bool e = exactly(validate_pfa(boundary), ViolationKind::BoundaryViolation);
    auto mark = [](bool v) { return v ? "ok" : "WRONG"; };
    return {a && b && c && d && e, std::string("baseline valid ") + mark(a) + "; non_stochastic " + mark(b) +
                                       "; non_unitary " + mark(c) + "; incomplete_measurement " + mark(d) +
                                       "; boundary_violation " + mark(e)};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>> kCriteria{
    {"closed-form rotation identities", criterion1},
    {"one-sided error on members", criterion2},
    {"step-3 rejection bound", criterion3},
    {"coin-flip gadget", criterion4},
    {"walk absorption and per-iteration acceptance", criterion5},
    {"2qcfa error bound on nonmembers", criterion6},
    {"2pfa acceptance and rejection bounds", criterion7},
    {"running-time shape", criterion8},
    {"Monte Carlo vs exact consistency", criterion9},
    {"validator coverage", criterion10},
};

}  // namespace

int main(int argc, char **argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            const int n = std::atoi(argv[++i]);
            if (n < 1 || n > static_cast<int>(kCriteria.size())) {
                std::fprintf(stderr, "criterion must be in [1, %zu]\n", kCriteria.size());
                return 2;
            }
            selected.insert(n);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty())
        for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) selected.insert(n);

    bool all = true;
    for (int n : selected) {
        const auto &[name, run] = kCriteria[n - 1];
        Verdict v;
        try {
            v = run();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        all = all && v.pass;
        std::printf("criterion %d %s: %s -- %s\n", n, v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}

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

#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qcfa/angle.hpp"
#include "qcfa/errors.hpp"
#include "qcfa/exact.hpp"
#include "qcfa/lm_formulas.hpp"
#include "qcfa/lm_machines.hpp"
#include "qcfa/machine_json.hpp"
#include "qcfa/runtime.hpp"
#include "schema_data.hpp"

namespace qcfa::cli {

namespace {

constexpr std::uint64_t kRunMaxSteps = 1'000'000;
constexpr std::uint64_t kSweepMaxSteps = 10'000'000;

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw UsageError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

// from_chars for double is missing on some standard libraries.
double parse_double(std::string_view text, std::string_view what) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("invalid " + std::string(what) + ": '" + s + "'");
    return v;
}

bool is_pfa(const Machine &m) { return std::holds_alternative<Pfa2>(m); }

Json interval_json(const Interval &i) { return Json::array({i.low, i.high}); }

Json stats_json(const RunStats &s) {
    return Json{{"trials", s.trials},
                {"accept", s.accept},
                {"reject", s.reject},
                {"timeout", s.timeout},
                {"accept_freq", s.accept_freq},
                {"reject_freq", s.reject_freq},
                {"accept_ci", interval_json(s.accept_ci)},
                {"reject_ci", interval_json(s.reject_ci)},
                {"total_iterations", s.total_iterations},
                {"total_steps", s.total_steps},
                {"mean_steps", s.mean_steps},
                {"median_steps", s.median_steps},
                {"p90_steps", s.p90_steps},
                {"max_halting_steps", s.max_halting_steps}};
}

Json machine_json(const MachineSpec &ms) {
    return Json{{"spec", ms.spec}, {"kind", is_pfa(ms.machine) ? "pfa2" : "qcfa2"}, {"params", ms.params}};
}

Json base_record(std::string_view command) {
    return Json{{"command", command}, {"tool_version", tool_version()}};
}

const std::string &require_input(const Options &o, const Machine &m) {
    if (!o.input) throw UsageError("--input is required");
    if (!control_of(m).accepts_input(*o.input))
        throw UsageError("input '" + *o.input + "' has symbols outside the alphabet '" + control_of(m).alphabet() + "'");
    return *o.input;
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

std::string stats_summary(const RunStats &s) {
    std::ostringstream os;
    os << "trials=" << s.trials << " accept=" << s.accept << " reject=" << s.reject << " timeout=" << s.timeout
       << " accept_freq=" << fmt(s.accept_freq) << " [" << fmt(s.accept_ci.low) << ", " << fmt(s.accept_ci.high)
       << "] mean_steps=" << fmt(s.mean_steps) << " iterations=" << s.total_iterations;
    return os.str();
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    std::string name;
    bool passed;
    double measured;
    double threshold;
    std::string detail;
};

Check check_below(std::string name, double measured, double threshold, std::string detail = {}) {
    return {std::move(name), measured < threshold, measured, threshold, std::move(detail)};
}

Check check_unitarity() {
    const auto gadget = lm::coin_flip_gadget();
    const double err = std::max({lm::ua().unitarity_error(), lm::uc().unitarity_error(),
                                 gadget.unitary.unitarity_error(), gadget.measurement.completeness_error(),
                                 gadget.measurement.projector_error()});
    return check_below("operator_unitarity", err, 1e-12, "ua, uc, gadget unitary and gadget measurement");
}

Check check_rotation_closed_forms() {
    double err = 0.0;
    Matrix power = Matrix::identity(4);
    std::vector<Matrix> powers;
    for (int k = 0; k <= 40; ++k) {
        powers.push_back(power);
        err = std::max(err, max_abs_diff(power, lm::ua_power(k).matrix()));
        power = lm::ua().matrix() * power;
    }
    for (int l = 0; l <= 40; l += 3)
        for (int k = 0; k <= 40; k += 5)
            err = std::max(err, max_abs_diff(powers[l] * lm::uc().matrix() * powers[k], lm::sandwich_power(l, k).matrix()));
    return check_below("rotation_closed_forms", err, 1e-9, "max entry error against repeated products, exponents <= 40");
}

Check check_step3_bound() {
    double margin = 1.0;
    std::int64_t worst = 1;
    for (std::int64_t d = 1; d <= 10'000; ++d) {
        const double gap = lm::step3_reject_prob(d) - lm::lemma2_lower_bound(d);
        if (gap < margin) {
            margin = gap;
            worst = d;
        }
    }
    return {"step3_reject_lower_bound", margin > 0.0, margin, 0.0,
            "min of sin^2(sqrt2 d pi) - 1/(2d^2+1) over d <= 10^4, attained at d=" + std::to_string(worst)};
}

Check check_walk_law() {
    const auto walk = lm::build_walk_pfa();
    double err = 0.0;
    for (int n_absorb = 2; n_absorb <= 200; ++n_absorb) {
        const auto r = absorption_probs(build_config_chain(walk, std::string(n_absorb - 1, 'a')));
        err = std::max(err, std::abs(r.p_accept - lm::walk_right_absorption(n_absorb)));
    }
    return check_below("walk_absorption_law", err, 1e-10, "max |1/N - solved| for N in [2, 200]");
}

Check check_gadget_distribution() {
    const auto g = lm::coin_flip_gadget();
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto psi = apply_unitary(g.unitary, StateVector::basis(4, i));
        for (double p : outcome_probabilities(g.measurement, psi)) err = std::max(err, std::abs(p - 0.5));
    }
    return check_below("coin_gadget_distribution", err, 1e-12, "max |p - 1/2| over basis inputs");
}

Check check_qcfa_one_sided() {
    const auto q = lm::build_lm_qcfa_with_k(2);
    double worst = 0.0;
    for (int n = 0; n <= 2; ++n) {
        const auto w = std::string(n, 'a') + "c" + std::string(n, 'a');
        const auto r = qcfa_forward(q, w, 1e-9, 200'000);
        worst = std::max(worst, r.reject);
    }
    return check_below("qcfa_member_reject_mass", worst, 1e-12, "a^n c a^n, n <= 2, bounded forward propagation");
}

Check check_pfa_first_iteration() {
    int mismatches = 0;
    for (int k = 1; k <= 2; ++k) {
        const auto p = lm::build_lm_pfa(k);
        for (int n = 0; n <= 3; ++n) {
            const auto split = first_iteration_exact(p, std::string(n, 'a') + "c" + std::string(n, 'b'));
            const BigRational expected(BigRational(1) / pow(boost::multiprecision::cpp_int(2), k * (2 * n + 2)));
            if (split.reject != expected) ++mismatches;
        }
    }
    return {"pfa_first_iteration_reject", mismatches == 0, static_cast<double>(mismatches), 0.0,
            "exact P_r == 2^-k(2n+2), n <= 3, k <= 2"};
}

Check check_built_machines_valid() {
    int failures = 0;
    for (int k = 1; k <= 3; ++k) {
        failures += !validate(Machine{lm::build_lm_pfa(k)}).ok();
        failures += !validate(Machine{lm::build_lm_qcfa_with_k(k)}).ok();
    }
    failures += !validate(Machine{lm::build_walk_pfa()}).ok();
    return {"built_machines_valid", failures == 0, static_cast<double>(failures), 0.0, "validator on built machines"};
}

Check check_json_round_trip() {
    int failures = 0;
    for (const Machine &m : {Machine{lm::build_lm_pfa(2)}, Machine{lm::build_lm_qcfa_with_k(2)}}) {
        const auto text = machine_to_json(m);
        failures += machine_to_json(machine_from_json(text)) != text;
    }
    return {"machine_json_round_trip", failures == 0, static_cast<double>(failures), 0.0, "serialize, parse, serialize"};
}

Check check_sqrt2_reduction() {
    const double err = std::abs(sin2_sqrt2_pi(1) - 0.929108092834409);
    return check_below("sqrt2_angle_reduction", err, 1e-14, "sin^2(sqrt2 pi) against a 30-digit reference");
}

Check check_pfa_decides() {
    const auto p = lm::build_lm_pfa(2);
    int wrong = 0, words = 0;
    std::vector<std::string> level{""};
    for (int len = 0; len <= 5; ++len) {
        std::vector<std::string> next;
        for (const auto &w : level) {
            const auto r = absorption_probs(build_config_chain(p, w));
            const bool member = lm::lm_membership(w);
            wrong += member ? !(r.p_accept > 0.5) : !(r.p_reject > 0.5);
            ++words;
            for (char c : {'a', 'b', 'c'}) next.push_back(w + c);
        }
        level = std::move(next);
    }
    return {"pfa_decides_lm", wrong == 0, static_cast<double>(wrong), 0.0,
            "exact acceptance on the correct side of 1/2 for all " + std::to_string(words) + " words up to length 5"};
}

// ---------------------------------------------------------------------------
// helpers for analyze / sweep

Json exact_record(const Machine &m, const std::string &input, double tail_tol, std::uint64_t max_steps,
                  std::string &summary) {
    if (const auto *p = std::get_if<Pfa2>(&m)) {
        const auto chain = build_config_chain(*p, input);
        const auto r = absorption_probs(chain);
        Json j{{"method", "absorption"},
               {"p_accept", r.p_accept},
               {"p_reject", r.p_reject},
               {"p_diverge", r.p_diverge},
               {"expected_steps", r.expected_steps ? Json(*r.expected_steps) : Json(nullptr)},
               {"configurations", chain.configs.size()}};
        if (!p->loop_states().empty()) {
            try {
                const auto split = first_iteration_exact(*p, input);
                j["first_iteration"] = Json{{"accept", split.accept.str()},
                                            {"reject", split.reject.str()},
                                            {"next_iteration", split.next_iteration.str()}};
            } catch (const UsageError &) {
                // Iteration structure is not acyclic; only the chain solution applies.
            }
        }
        summary = "p_accept=" + fmt(r.p_accept, 10) + " p_reject=" + fmt(r.p_reject, 10) +
                  " p_diverge=" + fmt(r.p_diverge, 3) +
                  (r.expected_steps ? " expected_steps=" + fmt(*r.expected_steps) : std::string(" expected_steps=undefined"));
        return j;
    }
    const auto &q = std::get<Qcfa2>(m);
    const auto r = qcfa_forward(q, input, tail_tol, max_steps);
    summary = "p_accept=" + fmt(r.accept, 10) + " p_reject=" + fmt(r.reject, 10) + " residual=" + fmt(r.residual, 3) +
              " steps=" + std::to_string(r.steps);
    return Json{{"method", "forward"},
                {"p_accept", r.accept},
                {"p_reject", r.reject},
                {"residual", r.residual},
                {"steps", r.steps}};
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view tool_version() { return QCFA_TOOL_VERSION; }
std::string_view record_schema() { return kExperimentRecordSchema; }
std::string_view machine_schema() { return kMachineSchema; }

MachineSpec resolve_machine(std::string_view spec, std::optional<double> epsilon, std::optional<int> k) {
    const auto colon = spec.find(':');
    const auto head = spec.substr(0, colon);
    const std::optional<std::string_view> arg =
        colon == std::string_view::npos ? std::nullopt : std::optional(spec.substr(colon + 1));
    MachineSpec out{std::string(spec), Pfa2{""}, Json::object()};

    if (head == "qcfa-lm") {
        const double eps = arg ? parse_double(*arg, "epsilon") : epsilon ? *epsilon : throw UsageError("qcfa-lm needs an epsilon");
        const int kk = lm::k_for_epsilon(eps);
        out.machine = lm::build_lm_qcfa_with_k(kk);
        out.params = Json{{"epsilon", eps}, {"k", kk}};
    } else if (head == "qcfa-lm-k" || head == "pfa-lm") {
        const int kk = arg ? parse_number<int>(*arg, "k") : k ? *k : throw UsageError(std::string(head) + " needs k");
        if (kk < 1 || kk > 64) throw UsageError("k must be in [1, 64]");
        if (head == "pfa-lm") out.machine = lm::build_lm_pfa(kk);
        else out.machine = lm::build_lm_qcfa_with_k(kk);
        out.params = Json{{"k", kk}};
    } else if (head == "file") {
        if (!arg || arg->empty()) throw UsageError("file: needs a path");
        out.machine = load_machine_file(std::string(*arg));
        out.params = Json{{"path", *arg}};
        const auto report = validate(out.machine);
        if (!report.ok()) {
            std::string msg = "machine file fails validation:";
            for (const auto &v : report.violations) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.detail;
            throw UsageError(msg);
        }
    } else {
        throw UsageError("unknown machine spec '" + std::string(spec) + "' (expected qcfa-lm:EPS, qcfa-lm-k:K, pfa-lm:K or file:PATH)");
    }
    return out;
}

std::vector<std::int64_t> parse_sizes(std::string_view text) {
    std::vector<std::int64_t> out;
    auto range = [&](std::string_view sep) {
        const auto pos = text.find(sep);
        if (pos == std::string_view::npos || pos == 0) return false;
        const auto lo = parse_number<std::int64_t>(text.substr(0, pos), "size");
        const auto hi = parse_number<std::int64_t>(text.substr(pos + sep.size()), "size");
        if (lo < 0 || hi < lo || hi - lo > 10'000) throw UsageError("invalid size range '" + std::string(text) + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
        return true;
    };
    if (!range("..") && !range("-")) {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = std::min(text.find(',', start), text.size());
            const auto v = parse_number<std::int64_t>(text.substr(start, end - start), "size");
            if (v < 0) throw UsageError("sizes must be non-negative");
            out.push_back(v);
            start = end + 1;
        }
    }
    if (out.empty()) throw UsageError("no sizes given");
    return out;
}

std::string Family::word(std::int64_t n) const {
    const auto m = n + (member ? 0 : d);
    if (m < 0) throw UsageError("family produces a negative suffix length");
    return std::string(static_cast<std::size_t>(n), 'a') + "c" + std::string(static_cast<std::size_t>(m), 'a');
}

Family parse_family(std::string_view text) {
    if (text == "member") return {true, 0};
    if (text == "nonmember") return {false, 1};
    if (text.starts_with("nonmember:")) {
        const auto d = parse_number<std::int64_t>(text.substr(10), "d");
        if (d == 0) throw UsageError("nonmember family needs d != 0");
        return {false, d};
    }
    throw UsageError("unknown family '" + std::string(text) + "' (expected member or nonmember[:d])");
}

LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (x.size() < 2 || sxx == 0.0) throw UsageError("fit needs at least two distinct sizes");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

CommandResult cmd_verify() {
    const std::vector<Check> checks{check_unitarity(),          check_rotation_closed_forms(), check_step3_bound(),
                                    check_walk_law(),           check_gadget_distribution(),   check_qcfa_one_sided(),
                                    check_pfa_first_iteration(), check_built_machines_valid(), check_json_round_trip(),
                                    check_sqrt2_reduction(),    check_pfa_decides()};
    CommandResult res{0, base_record("verify"), {}};
    Json arr = Json::array();
    bool all = true;
    for (const auto &c : checks) {
        all = all && c.passed;
        arr.push_back(Json{{"name", c.name},
                           {"passed", c.passed},
                           {"measured", c.measured},
                           {"threshold", c.threshold},
                           {"detail", c.detail}});
        res.summary += std::string(c.passed ? "PASS " : "FAIL ") + c.name + " measured=" + fmt(c.measured, 4) + " (" +
                       c.detail + ")\n";
    }
    res.record["passed"] = all;
    res.record["checks"] = std::move(arr);
    res.exit_code = all ? 0 : 1;
    return res;
}

CommandResult cmd_run(const Options &o) {
    const auto ms = resolve_machine(o.machine, o.epsilon, o.k);
    const auto &input = require_input(o, ms.machine);
    if (o.trials == 0) throw UsageError("--trials must be positive");
    RunConfig cfg;
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.max_steps = o.max_steps.value_or(kRunMaxSteps);
    const auto stats = run_trials(ms.machine, input, cfg);

    CommandResult res{0, base_record("run"), {}};
    res.record["machine"] = machine_json(ms);
    res.record["input"] = input;
    res.record["seed"] = cfg.seed;
    res.record["trials"] = cfg.trials;
    res.record["max_steps"] = cfg.max_steps;
    res.record["stats"] = stats_json(stats);
    res.summary = ms.spec + " on '" + input + "': " + stats_summary(stats) + "\n";
    return res;
}

CommandResult cmd_analyze(const Options &o) {
    const auto ms = resolve_machine(o.machine, o.epsilon, o.k);
    const auto &input = require_input(o, ms.machine);
    if (!(o.tail_tol > 0.0)) throw UsageError("--tail-tol must be positive");
    const auto max_steps = o.max_steps.value_or(kDefaultForwardSteps);

    CommandResult res{0, base_record("analyze"), {}};
    res.record["machine"] = machine_json(ms);
    res.record["input"] = input;
    res.record["tail_tol"] = o.tail_tol;
    res.record["max_steps"] = max_steps;
    std::string line;
    res.record["exact"] = exact_record(ms.machine, input, o.tail_tol, max_steps, line);
    res.summary = ms.spec + " on '" + input + "': " + line + "\n";
    return res;
}

CommandResult cmd_sweep(const Options &o) {
    const auto ms = resolve_machine(o.machine, o.epsilon, o.k);
    if (o.trials == 0) throw UsageError("--trials must be positive");
    const auto family = parse_family(o.family);
    const auto sizes = parse_sizes(o.sizes);
    RunConfig cfg;
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.max_steps = o.max_steps.value_or(kSweepMaxSteps);
    const bool loglog = !is_pfa(ms.machine);

    CommandResult res{0, base_record("sweep"), {}};
    res.record["machine"] = machine_json(ms);
    res.record["family"] = o.family;
    res.record["sizes"] = sizes;
    res.record["seed"] = cfg.seed;
    res.record["trials"] = cfg.trials;
    res.record["max_steps"] = cfg.max_steps;

    std::ostringstream csv;
    csv << kCsvHeader << "\n";
    csv.precision(17);
    Json rows = Json::array();
    std::vector<double> xs, ys;
    for (const auto n : sizes) {
        const auto w = family.word(n);
        if (!control_of(ms.machine).accepts_input(w))
            throw UsageError("family word '" + w + "' is outside the machine alphabet");
        const auto m = n + (family.member ? 0 : family.d);
        const auto l = static_cast<std::int64_t>(w.size());
        const auto stats = run_trials(ms.machine, w, cfg);
        const double mean_iterations = static_cast<double>(stats.total_iterations) / static_cast<double>(stats.trials);
        rows.push_back(Json{{"n", n}, {"m", m}, {"l", l}, {"stats", stats_json(stats)}});
        csv << "size," << n << "," << m << "," << l << "," << stats.trials << "," << stats.accept << "," << stats.reject
            << "," << stats.timeout << "," << stats.mean_steps << "," << mean_iterations << "," << stats.accept_ci.low
            << "," << stats.accept_ci.high << ",,,\n";
        res.summary += "l=" + std::to_string(l) + " " + stats_summary(stats) + "\n";
        if (stats.mean_steps > 0.0) {
            xs.push_back(loglog ? std::log(static_cast<double>(l)) : static_cast<double>(l));
            ys.push_back(loglog ? std::log(stats.mean_steps) : std::log2(stats.mean_steps));
        }
    }
    res.record["rows"] = std::move(rows);

    const char *model = loglog ? "loglog" : "log2_linear";
    std::set<double> distinct(xs.begin(), xs.end());
    if (distinct.size() >= 2) {
        const auto fit = fit_line(xs, ys);
        res.record["fit"] = Json{{"model", model}, {"slope", fit.slope}, {"intercept", fit.intercept}};
        csv << "fit,,,,,,,,,,,," << model << "," << fit.slope << "," << fit.intercept << "\n";
        res.summary += std::string("fit ") + model + " slope=" + fmt(fit.slope) + "\n";
    } else {
        res.record["fit"] = nullptr;
    }

    if (o.out) {
        std::ofstream f(*o.out, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + *o.out + "' for writing");
        f << csv.str();
        f.flush();
        if (!f) throw IoError("failed writing '" + *o.out + "'");
    }
    return res;
}

CommandResult cmd_formulas(const Options &o) {
    lm::FormulaQuery q{o.d, o.n, o.m, o.k, o.epsilon, o.reps};
    const auto report = lm::evaluate_formulas(q);
    if (report.empty()) throw UsageError("no formula applies to the given parameters (use --d, --n, --m, --k, --epsilon, --reps)");
    CommandResult res{0, base_record("formulas"), {}};
    Json query = Json::object();
    if (o.d) query["d"] = *o.d;
    if (o.n) query["n"] = *o.n;
    if (o.m) query["m"] = *o.m;
    if (o.k) query["k"] = *o.k;
    if (o.epsilon) query["epsilon"] = *o.epsilon;
    if (o.reps) query["reps"] = *o.reps;
    res.record["query"] = std::move(query);
    Json arr = Json::array();
    for (const auto &f : report) {
        arr.push_back(Json{{"name", f.name}, {"equation_tag", f.equation_tag}, {"value", f.value}});
        res.summary += f.name + " [" + f.equation_tag + "] = " + fmt(f.value, 12) + "\n";
    }
    res.record["formulas"] = std::move(arr);
    return res;
}

std::string cmd_export(const Options &o) {
    const auto ms = resolve_machine(o.machine, o.epsilon, o.k);
    if (o.out) {
        save_machine_file(ms.machine, *o.out);
        return {};
    }
    return machine_to_json(ms.machine);
}

}  // namespace qcfa::cli

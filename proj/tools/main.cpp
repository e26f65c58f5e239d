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

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qcfa/errors.hpp"

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

const char *kSweepHelp =
    "Monte Carlo scaling sweep over a word family. CSV columns (--out):\n"
    "  row            'size' for data rows, 'fit' for the summary row\n"
    "  n, m, l        prefix length, suffix length, total input length\n"
    "  trials         trajectories per size\n"
    "  accept, reject, timeout  outcome counts\n"
    "  mean_steps     mean steps over halting trajectories\n"
    "  mean_iterations  mean outer iterations per trajectory\n"
    "  accept_ci_low, accept_ci_high  Wilson 95% interval of the accept frequency\n"
    "  fit_model      loglog (ln steps vs ln l, 2qcfa) or log2_linear (log2 steps vs l, 2pfa)\n"
    "  fit_slope, fit_intercept  least-squares fit over the data rows";

void add_machine_flags(CLI::App *sub, qcfa::cli::Options &o) {
    sub->add_option("--machine", o.machine, "qcfa-lm:EPS | qcfa-lm-k:K | pfa-lm:K | file:PATH")->required();
    sub->add_option("--epsilon", o.epsilon, "error bound when --machine is plain qcfa-lm");
    sub->add_option("--k", o.k, "repetition exponent when --machine is plain pfa-lm or qcfa-lm-k");
    sub->add_option("--max-steps", o.max_steps, "step budget per trajectory or forward propagation");
}

}  // namespace

int main(int argc, char **argv) {
    using namespace qcfa::cli;
    CLI::App app{"Simulator and analyzer for two-way probabilistic and quantum-classical finite automata"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(0, 1);

    Options o;
    std::string schema_name;
    app.add_option("--schema", schema_name, "print a bundled JSON schema (record or machine) and exit")
        ->expected(0, 1)
        ->default_str("record");

    auto *verify = app.add_subcommand("verify", "run the built-in invariant suite; exit 1 on any failure");

    auto *run = app.add_subcommand("run", "Monte Carlo trials on one input");
    add_machine_flags(run, o);
    run->add_option("--input", o.input, "input word")->required();
    run->add_option("--trials", o.trials, "number of trajectories")->capture_default_str();
    run->add_option("--seed", o.seed, "RNG seed; trial i uses stream (seed, i)")->capture_default_str();

    auto *analyze = app.add_subcommand("analyze", "exact acceptance probabilities for one input");
    add_machine_flags(analyze, o);
    analyze->add_option("--input", o.input, "input word")->required();
    analyze->add_option("--tail-tol", o.tail_tol, "stop forward propagation once live mass is below this")
        ->capture_default_str();

    auto *sweep = app.add_subcommand("sweep", kSweepHelp);
    add_machine_flags(sweep, o);
    sweep->add_option("--family", o.family, "member (a^n c a^n) or nonmember[:d] (a^n c a^(n+d))")
        ->capture_default_str();
    sweep->add_option("--sizes", o.sizes, "values of n: A..B, A-B or A,B,C")->capture_default_str();
    sweep->add_option("--trials", o.trials, "trajectories per size")->capture_default_str();
    sweep->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    sweep->add_option("--out", o.out, "write the CSV table to this path");

    auto *formulas = app.add_subcommand("formulas", "evaluate closed-form quantities for L_m");
    formulas->add_option("--d", o.d, "length difference n - m");
    formulas->add_option("--n", o.n, "prefix length");
    formulas->add_option("--m", o.m, "suffix length");
    formulas->add_option("--k", o.k, "repetition exponent");
    formulas->add_option("--epsilon", o.epsilon, "error bound");
    formulas->add_option("--reps", o.reps, "iteration count");

    auto *exporter = app.add_subcommand("export", "write a machine as JSON (machine schema)");
    exporter->add_option("--machine", o.machine, "qcfa-lm:EPS | qcfa-lm-k:K | pfa-lm:K | file:PATH")->required();
    exporter->add_option("--epsilon", o.epsilon, "error bound when --machine is plain qcfa-lm");
    exporter->add_option("--k", o.k, "repetition exponent when --machine is plain pfa-lm or qcfa-lm-k");
    exporter->add_option("--out", o.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.count("--schema") > 0) {
            if (schema_name.empty() || schema_name == "record") std::cout << record_schema();
            else if (schema_name == "machine") std::cout << machine_schema();
            else throw qcfa::UsageError("unknown schema '" + schema_name + "' (expected record or machine)");
            return EXIT_SUCCESS;
        }
        if (*exporter) {
            std::cout << cmd_export(o);
            return EXIT_SUCCESS;
        }
        CommandResult res;
        if (*verify) res = cmd_verify();
        else if (*run) res = cmd_run(o);
        else if (*analyze) res = cmd_analyze(o);
        else if (*sweep) res = cmd_sweep(o);
        else if (*formulas) res = cmd_formulas(o);
        else {
            std::cerr << app.help();
            return kExitUsage;
        }
        std::cout << res.record.dump(2) << "\n";
        std::cerr << res.summary;
        return res.exit_code;
    } catch (const qcfa::UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qcfa::IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitVerify;
    }
}

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

#include "json.hpp"

#include "qcfa/machines.hpp"

namespace qcfa::cli {

using Json = nlohmann::ordered_json;

/// A machine resolved from a --machine argument:
///   qcfa-lm:EPS   2QCFA for L_m with error bound EPS
///   qcfa-lm-k:K   same machine with K final coin flips
///   pfa-lm:K      2PFA for L_m with repetition exponent K
///   file:PATH     machine JSON file
/// "qcfa-lm" and "pfa-lm" without a parameter take --epsilon / --k.
struct MachineSpec {
    std::string spec;
    Machine machine;
    Json params;
};

MachineSpec resolve_machine(std::string_view spec, std::optional<double> epsilon = std::nullopt,
                            std::optional<int> k = std::nullopt);

struct Options {
    std::string machine;
    std::optional<std::string> input;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> max_steps;
    double tail_tol = 1e-9;
    std::optional<double> epsilon;
    std::optional<int> k;
    std::string family = "member";
    std::string sizes = "1..6";
    std::optional<std::string> out;
    std::optional<std::int64_t> d;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> m;
    std::optional<std::int64_t> reps;
};

struct CommandResult {
    int exit_code = 0;
    Json record;
    std::string summary;
};

inline constexpr std::string_view kCsvHeader =
    "row,n,m,l,trials,accept,reject,timeout,mean_steps,mean_iterations,accept_ci_low,accept_ci_high,fit_model,"
    "fit_slope,fit_intercept";

CommandResult cmd_verify();
CommandResult cmd_run(const Options &o);
CommandResult cmd_analyze(const Options &o);
CommandResult cmd_sweep(const Options &o);
CommandResult cmd_formulas(const Options &o);

/// Machine JSON for --machine. Written to --out when given (and an empty
/// string returned), otherwise returned.
std::string cmd_export(const Options &o);

/// Parses "1..6", "1-6" or "1,3,5" into a non-empty list of sizes.
std::vector<std::int64_t> parse_sizes(std::string_view text);

struct Family {
    bool member = true;
    std::int64_t d = 0;
    std::string word(std::int64_t n) const;
};
Family parse_family(std::string_view text);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
/// Least-squares line through (x, y). Requires at least two distinct x.
LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

std::string_view record_schema();
std::string_view machine_schema();
std::string_view tool_version();

}  // namespace qcfa::cli

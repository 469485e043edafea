// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "treecert/report.hpp"

namespace treecert {

struct RunConfig {
    std::filesystem::path tree;
    std::filesystem::path attacker;
    std::filesystem::path data;
    std::string label_column = "label";
    Mode mode = Mode::Verify;
    AnalysisOptions analysis;
    std::size_t oracle_max_states = 1'000'000;
    std::optional<std::filesystem::path> out_json;
    std::optional<std::filesystem::path> out_csv;
    bool dump_ir = false;
    bool dump_summary = false;
    /// Leave wall-clock times out of the report.
    bool timing = true;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_input_error = 2,
    exit_soundness_error = 3,
};

struct RunOutcome {
    int exit_code = exit_ok;
    /// Set only on success.
    std::optional<Report> report;
    /// Text meant for stdout: optional IR/summary dumps, then the table.
    std::string output;
    /// Error message on failure.
    std::string diagnostics;
};

/// Runs the analysis (and in compare mode the oracle) on in-memory inputs.
/// Throws InputError / SoundnessError.
Report build_report(const DecisionTree& tree, const Attacker& attacker, const LabeledDataset& data,
                    const RunConfig& config);

/// Loads the inputs, builds the report and writes the requested files.
/// Files are written only when every step succeeded.
RunOutcome run(const RunConfig& config);

inline RunOutcome run_verify(RunConfig config) {
    config.mode = Mode::Verify;
    return run(config);
}

inline RunOutcome run_compare(RunConfig config) {
    config.mode = Mode::Compare;
    return run(config);
}

} // namespace treecert

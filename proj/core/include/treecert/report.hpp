// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treecert/analyzer.hpp"
#include "treecert/evaluation.hpp"
#include "treecert/oracle.hpp"

namespace treecert {

enum class Mode { Verify, Compare };

std::string_view to_string(Mode mode);

struct RowReport {
    std::size_t row = 0;
    Label label;
    Verdict verdict;
    std::optional<OracleResult> oracle;
};

struct Report {
    Mode mode = Mode::Verify;

    // Settings, recorded so a run can be reproduced.
    AnalysisOptions analysis;
    std::size_t oracle_max_states = 0;
    std::string label_column;
    std::size_t prune_cap = 0;

    std::vector<std::string> label_names;
    std::vector<std::string> feature_names;

    /// Absent in per-instance mode.
    std::optional<AttackerSummary> summary;

    Rational clean_loss;
    Rational approx_loss;
    std::optional<OracleLoss> oracle_loss;
    std::optional<ConfusionCounts> confusion;
    /// Every oracle search ran exhaustively and in exact mode.
    bool oracle_complete = true;

    std::optional<double> analysis_seconds;
    std::optional<double> oracle_seconds;

    std::vector<RowReport> rows;
    std::vector<std::string> notes;
};

/// Pretty-printed JSON. Rationals are exact strings ("1/2", "0.25", "3");
/// undefined ratios are "n/a".
std::string to_json(const Report& report);

/// Aligned plain-text summary followed by one line per row.
std::string to_table(const Report& report);

/// Columns row, clean_label, predicted, verdict, oracle_attacked, witness;
/// the last two are empty in verify mode.
std::string to_csv(const Report& report);

} // namespace treecert

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "treecert/model.hpp"

namespace treecert {

// Tree document:
//   {"dimension": 2, "feature_names": [...], "labels": [...],
//    "root": {"feature": 1, "threshold": "10", "left": {...}, "right": {"leaf": 1}}}
// Thresholds are decimal strings (integer JSON numbers are also accepted).
// Errors carry a path such as "root.left.threshold".
DecisionTree load_tree(std::string_view json_text);
std::string dump_tree(const DecisionTree& tree);

// Attacker document:
//   {"budget": "10", "rules": [{"feature": 0, "pre": ["0", "10"], "cost": "5",
//                               "delta": ["-1", "0"]}]}
// "pre" endpoints may be "-inf" / "inf"; a missing "pre" means unrestricted.
Attacker load_attacker(std::string_view json_text);
std::string dump_attacker(const Attacker& attacker);

/// CSV with a header row. Every column except `label_column` is a feature,
/// in file order. Label cells are matched against `label_names` first and
/// otherwise read as numeric ids.
LabeledDataset load_dataset(std::string_view csv_text, std::string_view label_column = "label",
                            std::span<const std::string> label_names = {});

/// Throws InputError if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

} // namespace treecert

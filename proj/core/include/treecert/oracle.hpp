// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "treecert/model.hpp"

namespace treecert {

// Concrete attack enumeration. Perturbations are discretized to the interval
// endpoints plus the points that land on, or just past, a tree threshold;
// the search explores every order of such rule applications breadth first.

struct AttackState {
    Instance instance;
    Rational budget;
    /// Applications per rule index.
    std::vector<std::size_t> applied;
};

struct AttackStep {
    std::size_t rule = 0;
    Rational delta;
    /// Instance after this step.
    Instance result;
};

struct OracleResult {
    Label clean_label;
    /// Labels predicted on some discovered attack, the clean label included.
    LabelSet attacked_labels;
    /// Shortest discovered sequence reaching a label other than clean_label.
    std::optional<std::vector<AttackStep>> witness;
    /// False when max_states cut the search short.
    bool exhaustive = true;
    /// False when some visited state had an affordable rule whose
    /// precondition failed, which the discretization may not cover exactly.
    bool exact_mode = true;
    std::size_t visited_states = 0;

    [[nodiscard]] bool found_label_other_than(Label y) const {
        return attacked_labels.size() > 1 || !attacked_labels.contains(y);
    }
};

/// Perturbations tried for `rule` on instance x, sorted and unique.
/// `thresholds` are the tree thresholds on rule.feature.
std::vector<Rational> candidate_deltas(const RewritingRule& rule, std::span<const Rational> x,
                                       std::span<const Rational> thresholds);

OracleResult enumerate_attacks(const Attacker& attacker, const DecisionTree& tree, std::span<const Rational> x,
                               std::size_t max_states = 1'000'000);

/// Replays a witness from x: checks preconditions, budget and the recorded
/// intermediate instances. Returns the final instance, or nullopt if invalid.
std::optional<Instance> replay(const Attacker& attacker, std::span<const Rational> x,
                               std::span<const AttackStep> steps);

struct OracleLoss {
    Rational loss;
    /// Some row was searched non-exhaustively, so `loss` is only a lower bound.
    bool lower_bound = false;
};

/// Fraction of rows where the oracle reached a label other than the true one.
OracleLoss oracle_loss(std::span<const OracleResult> results, const LabeledDataset& data);

OracleLoss loss_under_attack(const DecisionTree& tree, const LabeledDataset& data, const Attacker& attacker,
                             std::size_t max_states = 1'000'000, std::size_t jobs = 0);

/// enumerate_attacks over every row, in row order.
std::vector<OracleResult> enumerate_dataset(const DecisionTree& tree, const LabeledDataset& data,
                                            const Attacker& attacker, std::size_t max_states = 1'000'000,
                                            std::size_t jobs = 0);

} // namespace treecert

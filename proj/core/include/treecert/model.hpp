// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "treecert/rational.hpp"

namespace treecert {

using FeatureIndex = std::size_t;

/// A point x = (x_0, ..., x_{d-1}) of the feature space.
using Instance = std::vector<Rational>;

/// Opaque class label. Ids are dense in [0, label count).
struct Label {
    std::uint32_t id{};

    friend auto operator<=>(const Label&, const Label&) = default;
};

using LabelSet = std::set<Label>;

/// Binary threshold tree. A sample goes left at a split iff x_f <= threshold.
///
/// Nodes live in a flat arena; children are created before their parents
/// through Builder, which validates that the result is a proper tree.
class DecisionTree {
  public:
    using NodeId = std::size_t;

    struct Leaf {
        Label label;
    };
    struct Split {
        FeatureIndex feature;
        Rational threshold;
        NodeId left;
        NodeId right;
    };
    using Node = std::variant<Leaf, Split>;

    class Builder {
      public:
        NodeId leaf(Label label);
        NodeId split(FeatureIndex feature, Rational threshold, NodeId left, NodeId right);

        /// Throws InputError when a node is shared, a feature index is out of
        /// range, or a label id is not below the label count. When label_names
        /// is empty, names "0", "1", ... are synthesized (at least two).
        [[nodiscard]] DecisionTree build(NodeId root, std::size_t dimension, std::vector<std::string> label_names = {},
                                         std::vector<std::string> feature_names = {}) &&;

      private:
        std::vector<Node> nodes_;
    };

    [[nodiscard]] std::size_t dimension() const { return dimension_; }
    [[nodiscard]] NodeId root() const { return root_; }
    [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t leaf_count() const;
    [[nodiscard]] std::size_t split_count() const { return node_count() - leaf_count(); }
    [[nodiscard]] std::size_t label_count() const { return label_names_.size(); }
    [[nodiscard]] const std::vector<std::string>& label_names() const { return label_names_; }
    [[nodiscard]] const std::vector<std::string>& feature_names() const { return feature_names_; }
    [[nodiscard]] const std::string& label_name(Label label) const { return label_names_.at(label.id); }

    /// Labels that appear on some leaf.
    [[nodiscard]] LabelSet leaf_labels() const;

    /// Sorted, duplicate-free split thresholds on one feature.
    [[nodiscard]] std::vector<Rational> thresholds(FeatureIndex feature) const;

    /// Throws InputError on a dimension mismatch.
    [[nodiscard]] Label predict(std::span<const Rational> x) const;

    /// Structural equality (same shape, features, thresholds and labels).
    [[nodiscard]] bool same_structure(const DecisionTree& other) const;

  private:
    DecisionTree() = default;

    std::size_t dimension_ = 0;
    std::vector<Node> nodes_;
    NodeId root_ = 0;
    std::vector<std::string> label_names_;
    std::vector<std::string> feature_names_;
};

/// `[low, high] -> f, cost, [delta_low, delta_high]`: when x_f lies in the
/// precondition interval and at least `cost` budget is left, the attacker may
/// add any delta in the perturbation interval to x_f.
struct RewritingRule {
    ExtendedRational pre_low = ExtendedRational::minus_infinity();
    ExtendedRational pre_high = ExtendedRational::plus_infinity();
    FeatureIndex feature = 0;
    Rational cost;
    Rational delta_low;
    Rational delta_high;

    [[nodiscard]] bool precondition_holds(const Rational& value) const {
        return pre_low <= value && value <= pre_high;
    }
    [[nodiscard]] bool applicable(std::span<const Rational> x, const Rational& budget) const {
        return cost <= budget && precondition_holds(x[feature]);
    }
};

/// A budgeted set of rewriting rules, A = (R, K).
class Attacker {
  public:
    /// Throws InputError if a rule has an empty interval or negative cost, or
    /// if the budget is negative.
    Attacker(std::vector<RewritingRule> rules, Rational budget);

    [[nodiscard]] const std::vector<RewritingRule>& rules() const { return rules_; }
    [[nodiscard]] const Rational& budget() const { return budget_; }
    [[nodiscard]] Attacker with_budget(Rational budget) const { return {rules_, std::move(budget)}; }

    /// Throws InputError if some rule perturbs a feature outside [0, dimension).
    void check_dimension(std::size_t dimension) const;

  private:
    std::vector<RewritingRule> rules_;
    Rational budget_;
};

struct LabeledRow {
    Instance x;
    Label y;
};

struct LabeledDataset {
    std::vector<std::string> feature_names;
    std::vector<LabeledRow> rows;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] bool empty() const { return rows.empty(); }

    /// Throws InputError naming the first row whose width differs from
    /// `dimension` or whose label id is not below `label_count`.
    void check_against(std::size_t dimension, std::size_t label_count) const;
};

} // namespace treecert

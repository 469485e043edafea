// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/model.hpp"

#include <algorithm>

#include "treecert/errors.hpp"

namespace treecert {

DecisionTree::NodeId DecisionTree::Builder::leaf(Label label) {
    nodes_.emplace_back(Leaf{label});
    return nodes_.size() - 1;
}

DecisionTree::NodeId DecisionTree::Builder::split(FeatureIndex feature, Rational threshold, NodeId left, NodeId right) {
    nodes_.emplace_back(Split{feature, std::move(threshold), left, right});
    return nodes_.size() - 1;
}

DecisionTree DecisionTree::Builder::build(NodeId root, std::size_t dimension, std::vector<std::string> label_names,
                                          std::vector<std::string> feature_names) && {
    if (root >= nodes_.size()) {
        throw InputError("tree root does not exist");
    }
    std::uint32_t max_label = 0;
    std::vector<int> parents(nodes_.size(), 0);
    for (const Node& n : nodes_) {
        if (const auto* s = std::get_if<Split>(&n)) {
            if (s->feature >= dimension) {
                throw InputError("split on feature " + std::to_string(s->feature) + " but dimension is " +
                                 std::to_string(dimension));
            }
            for (const NodeId child : {s->left, s->right}) {
                if (child >= nodes_.size()) {
                    throw InputError("split refers to a missing child node");
                }
                ++parents[child];
            }
        } else {
            max_label = std::max(max_label, std::get<Leaf>(n).label.id);
        }
    }
    if (parents[root] != 0) {
        throw InputError("tree root has a parent");
    }
    // Reachable nodes must have exactly one parent (or none, for the root).
    std::vector<NodeId> stack{root};
    std::vector<bool> seen(nodes_.size(), false);
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (seen[id] || (id != root && parents[id] != 1)) {
            throw InputError("tree nodes must not be shared");
        }
        seen[id] = true;
        if (const auto* s = std::get_if<Split>(&nodes_[id])) {
            stack.push_back(s->left);
            stack.push_back(s->right);
        }
    }

    if (label_names.empty()) {
        const std::uint32_t count = std::max<std::uint32_t>(2, max_label + 1);
        for (std::uint32_t i = 0; i < count; ++i) {
            label_names.push_back(std::to_string(i));
        }
    }
    if (label_names.size() < 2) {
        throw InputError("a classifier needs at least two labels");
    }
    if (max_label >= label_names.size()) {
        throw InputError("leaf label " + std::to_string(max_label) + " is not a declared label");
    }
    if (feature_names.empty()) {
        for (std::size_t i = 0; i < dimension; ++i) {
            feature_names.push_back("x" + std::to_string(i));
        }
    }
    if (feature_names.size() != dimension) {
        throw InputError("expected " + std::to_string(dimension) + " feature names, got " +
                         std::to_string(feature_names.size()));
    }
    if (dimension == 0) {
        throw InputError("tree dimension must be positive");
    }

    // Compact to reachable nodes so node_count() reflects the tree.
    DecisionTree tree;
    std::vector<NodeId> remap(nodes_.size());
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        if (seen[i]) {
            remap[i] = tree.nodes_.size();
            tree.nodes_.push_back(nodes_[i]);
        }
    }
    for (Node& n : tree.nodes_) {
        if (auto* s = std::get_if<Split>(&n)) {
            s->left = remap[s->left];
            s->right = remap[s->right];
        }
    }
    tree.root_ = remap[root];
    tree.dimension_ = dimension;
    tree.label_names_ = std::move(label_names);
    tree.feature_names_ = std::move(feature_names);
    return tree;
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return std::holds_alternative<Leaf>(n); }));
}

LabelSet DecisionTree::leaf_labels() const {
    LabelSet labels;
    for (const Node& n : nodes_) {
        if (const auto* l = std::get_if<Leaf>(&n)) {
            labels.insert(l->label);
        }
    }
    return labels;
}

std::vector<Rational> DecisionTree::thresholds(FeatureIndex feature) const {
    std::vector<Rational> out;
    for (const Node& n : nodes_) {
        if (const auto* s = std::get_if<Split>(&n); s != nullptr && s->feature == feature) {
            out.push_back(s->threshold);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Label DecisionTree::predict(std::span<const Rational> x) const {
    if (x.size() != dimension_) {
        throw InputError("instance has " + std::to_string(x.size()) + " features, tree expects " +
                         std::to_string(dimension_));
    }
    NodeId id = root_;
    while (const auto* s = std::get_if<Split>(&nodes_[id])) {
        id = x[s->feature] <= s->threshold ? s->left : s->right;
    }
    return std::get<Leaf>(nodes_[id]).label;
}

bool DecisionTree::same_structure(const DecisionTree& other) const {
    if (dimension_ != other.dimension_ || label_names_ != other.label_names_) {
        return false;
    }
    std::vector<std::pair<NodeId, NodeId>> stack{{root_, other.root_}};
    while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const Node& na = nodes_[a];
        const Node& nb = other.nodes_[b];
        if (na.index() != nb.index()) {
            return false;
        }
        if (const auto* la = std::get_if<Leaf>(&na)) {
            if (la->label != std::get<Leaf>(nb).label) {
                return false;
            }
            continue;
        }
        const auto& sa = std::get<Split>(na);
        const auto& sb = std::get<Split>(nb);
        if (sa.feature != sb.feature || sa.threshold != sb.threshold) {
            return false;
        }
        stack.emplace_back(sa.left, sb.left);
        stack.emplace_back(sa.right, sb.right);
    }
    return true;
}

Attacker::Attacker(std::vector<RewritingRule> rules, Rational budget) : rules_(std::move(rules)), budget_(std::move(budget)) {
    if (budget_ < 0) {
        throw InputError("attacker budget must be non-negative");
    }
    for (std::size_t j = 0; j < rules_.size(); ++j) {
        const RewritingRule& r = rules_[j];
        const std::string where = "rule " + std::to_string(j) + ": ";
        if (!(r.pre_low <= r.pre_high)) {
            throw InputError(where + "precondition lower bound exceeds upper bound");
        }
        if (r.delta_low > r.delta_high) {
            throw InputError(where + "perturbation lower bound exceeds upper bound");
        }
        if (r.cost < 0) {
            throw InputError(where + "cost must be non-negative");
        }
    }
}

void Attacker::check_dimension(std::size_t dimension) const {
    for (std::size_t j = 0; j < rules_.size(); ++j) {
        if (rules_[j].feature >= dimension) {
            throw InputError("rule " + std::to_string(j) + " perturbs feature " + std::to_string(rules_[j].feature) +
                             " but the dimension is " + std::to_string(dimension));
        }
    }
}

void LabeledDataset::check_against(std::size_t dimension, std::size_t label_count) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].x.size() != dimension) {
            throw InputError("row " + std::to_string(i) + ": has " + std::to_string(rows[i].x.size()) +
                             " features, expected " + std::to_string(dimension));
        }
        if (rows[i].y.id >= label_count) {
            throw InputError("row " + std::to_string(i) + ": unknown label id " + std::to_string(rows[i].y.id));
        }
    }
}

} // namespace treecert

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "treecert/linear.hpp"
#include "treecert/model.hpp"

namespace treecert {

// A small imperative IR for the attacker loop and the tree. Statements are
// plain values; the only non-determinism is Choice, AssignInterval and the
// exit of Loop (which may run its body zero or more times).

struct Stmt;
using StmtSeq = std::vector<Stmt>;

struct Assume {
    std::vector<LinearConstraint> constraints;
};

struct AssignAffine {
    Var target;
    AffineExpr value;
};

/// target := some w with low <= w <= high, both evaluated on the pre-state.
struct AssignInterval {
    Var target;
    AffineExpr low;
    AffineExpr high;
};

struct Choice {
    std::vector<StmtSeq> branches;
};

/// Runs `body` any number of times, then exits. Bodies never contain loops.
struct Loop {
    StmtSeq body;
};

struct Stmt {
    std::variant<Assume, AssignAffine, AssignInterval, Choice, Loop> node;
};

/// Loop-free nested conditionals mirroring a DecisionTree node for node.
class TreeProgram {
  public:
    using NodeId = std::size_t;

    /// if (xp_feature <= threshold) then ... else ...
    struct Cond {
        FeatureIndex feature;
        Rational threshold;
        NodeId then_branch;
        NodeId else_branch;

        [[nodiscard]] LinearConstraint guard() const;
        /// Closed relaxation of the else branch, xp_feature >= threshold.
        [[nodiscard]] LinearConstraint relaxed_negation() const;
    };
    struct ReturnLabel {
        Label label;
    };
    using Node = std::variant<Cond, ReturnLabel>;

    TreeProgram(std::vector<Node> nodes, NodeId root, std::size_t dimension)
        : nodes_(std::move(nodes)), root_(root), dimension_(dimension) {}

    [[nodiscard]] NodeId root() const { return root_; }
    [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t dimension() const { return dimension_; }

  private:
    std::vector<Node> nodes_;
    NodeId root_;
    std::size_t dimension_;
};

/// init sets xp_i := x_i, r_j := 0, B := K; the loop body chooses one
/// guarded rule application per iteration.
struct AttackerProgram {
    std::size_t dimension = 0;
    std::size_t rule_count = 0;
    StmtSeq init;
    Loop loop;
};

TreeProgram encode_tree(const DecisionTree& tree);

/// `dimension` is the number of features of the instances being attacked.
AttackerProgram encode_attacker(const Attacker& attacker, std::size_t dimension);

/// Pseudo-code listing, one statement per line, stable across runs.
std::string dump_ir(const TreeProgram& program, const std::vector<std::string>& label_names = {});
std::string dump_ir(const AttackerProgram& program);

} // namespace treecert

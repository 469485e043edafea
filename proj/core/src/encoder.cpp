// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/encoder.hpp"

#include <sstream>

namespace treecert {

LinearConstraint TreeProgram::Cond::guard() const {
    return LinearConstraint::le(Var::attacked(feature), AffineExpr(threshold));
}

LinearConstraint TreeProgram::Cond::relaxed_negation() const {
    return LinearConstraint::ge(Var::attacked(feature), AffineExpr(threshold));
}

TreeProgram encode_tree(const DecisionTree& tree) {
    // Same node ids as the tree arena, so the program is isomorphic by construction.
    std::vector<TreeProgram::Node> nodes;
    nodes.reserve(tree.node_count());
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
        const auto& n = tree.node(id);
        if (const auto* leaf = std::get_if<DecisionTree::Leaf>(&n)) {
            nodes.emplace_back(TreeProgram::ReturnLabel{leaf->label});
        } else {
            const auto& s = std::get<DecisionTree::Split>(n);
            nodes.emplace_back(TreeProgram::Cond{s.feature, s.threshold, s.left, s.right});
        }
    }
    return {std::move(nodes), tree.root(), tree.dimension()};
}

AttackerProgram encode_attacker(const Attacker& attacker, std::size_t dimension) {
    attacker.check_dimension(dimension);
    AttackerProgram prog;
    prog.dimension = dimension;
    prog.rule_count = attacker.rules().size();

    for (std::size_t i = 0; i < dimension; ++i) {
        prog.init.push_back({AssignAffine{Var::attacked(i), Var::initial(i)}});
    }
    for (std::size_t j = 0; j < prog.rule_count; ++j) {
        prog.init.push_back({AssignAffine{Var::counter(j), 0}});
    }
    prog.init.push_back({AssignAffine{Var::budget(), attacker.budget()}});

    Choice choice;
    for (std::size_t j = 0; j < prog.rule_count; ++j) {
        const RewritingRule& r = attacker.rules()[j];
        const Var xp = Var::attacked(r.feature);
        const Var counter = Var::counter(j);
        const Var budget = Var::budget();

        Assume guard;
        if (r.pre_low.is_finite()) {
            guard.constraints.push_back(LinearConstraint::ge(xp, r.pre_low.value()));
        }
        if (r.pre_high.is_finite()) {
            guard.constraints.push_back(LinearConstraint::le(xp, r.pre_high.value()));
        }
        guard.constraints.push_back(LinearConstraint::ge(budget, r.cost));

        StmtSeq branch;
        branch.push_back({std::move(guard)});
        branch.push_back({AssignInterval{xp, AffineExpr(xp) + r.delta_low, AffineExpr(xp) + r.delta_high}});
        branch.push_back({AssignAffine{budget, AffineExpr(budget) - r.cost}});
        branch.push_back({AssignAffine{counter, AffineExpr(counter) + 1}});
        choice.branches.push_back(std::move(branch));
    }
    prog.loop.body.push_back({std::move(choice)});
    return prog;
}

namespace {

void dump_seq(std::ostream& out, const StmtSeq& seq, int depth);

void indent(std::ostream& out, int depth) {
    for (int i = 0; i < depth; ++i) {
        out << "  ";
    }
}

void dump_stmt(std::ostream& out, const Stmt& stmt, int depth) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Assume>) {
                indent(out, depth);
                out << "assume";
                for (std::size_t i = 0; i < s.constraints.size(); ++i) {
                    out << (i == 0 ? " " : " && ") << s.constraints[i].to_string();
                }
                out << "\n";
            } else if constexpr (std::is_same_v<T, AssignAffine>) {
                indent(out, depth);
                out << s.target.name() << " := " << s.value.to_string() << "\n";
            } else if constexpr (std::is_same_v<T, AssignInterval>) {
                indent(out, depth);
                out << s.target.name() << " :in [" << s.low.to_string() << ", " << s.high.to_string() << "]\n";
            } else if constexpr (std::is_same_v<T, Choice>) {
                indent(out, depth);
                out << "choose {\n";
                for (std::size_t b = 0; b < s.branches.size(); ++b) {
                    indent(out, depth + 1);
                    out << "branch " << b << ":\n";
                    dump_seq(out, s.branches[b], depth + 2);
                }
                indent(out, depth);
                out << "}\n";
            } else {
                indent(out, depth);
                out << "loop {\n";
                dump_seq(out, s.body, depth + 1);
                indent(out, depth + 1);
                out << "or exit\n";
                indent(out, depth);
                out << "}\n";
            }
        },
        stmt.node);
}

void dump_seq(std::ostream& out, const StmtSeq& seq, int depth) {
    for (const Stmt& s : seq) {
        dump_stmt(out, s, depth);
    }
}

void dump_tree_node(std::ostream& out, const TreeProgram& prog, TreeProgram::NodeId id,
                    const std::vector<std::string>& label_names, int depth) {
    const auto& n = prog.node(id);
    indent(out, depth);
    if (const auto* ret = std::get_if<TreeProgram::ReturnLabel>(&n)) {
        out << "return ";
        if (ret->label.id < label_names.size()) {
            out << label_names[ret->label.id];
        } else {
            out << "label#" << ret->label.id;
        }
        out << "\n";
        return;
    }
    const auto& c = std::get<TreeProgram::Cond>(n);
    out << "if " << c.guard().to_string() << " {\n";
    dump_tree_node(out, prog, c.then_branch, label_names, depth + 1);
    indent(out, depth);
    out << "} else {\n";
    dump_tree_node(out, prog, c.else_branch, label_names, depth + 1);
    indent(out, depth);
    out << "}\n";
}

} // namespace

std::string dump_ir(const TreeProgram& program, const std::vector<std::string>& label_names) {
    std::ostringstream out;
    out << "tree(dimension " << program.dimension() << ")\n";
    dump_tree_node(out, program, program.root(), label_names, 1);
    return out.str();
}

std::string dump_ir(const AttackerProgram& program) {
    std::ostringstream out;
    out << "attacker(dimension " << program.dimension << ", rules " << program.rule_count << ")\n";
    dump_seq(out, program.init, 1);
    dump_stmt(out, Stmt{program.loop}, 1);
    return out.str();
}

} // namespace treecert

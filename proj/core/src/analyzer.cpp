// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/analyzer.hpp"

#include <string>
#include <type_traits>
#include <variant>

#include "parallel.hpp"
#include "treecert/errors.hpp"

namespace treecert {

std::string_view to_string(JoinKind kind) { return kind == JoinKind::Hull ? "hull" : "weak"; }

std::string_view to_string(VerdictKind kind) {
    switch (kind) {
    case VerdictKind::CertifiedRobust:
        return "CertifiedRobust";
    case VerdictKind::PossiblyVulnerable:
        return "PossiblyVulnerable";
    case VerdictKind::MisclassifiedClean:
        return "MisclassifiedClean";
    }
    return "?";
}

namespace {

constexpr std::size_t max_ascending_iterations = 10'000;

struct Fixpoint {
    Polyhedron invariant;
    bool widened = false;
    std::size_t iterations = 0;
};

bool is_inductive(const AbstractInterpreter& interp, const Polyhedron& entry, const StmtSeq& body,
                  const Polyhedron& h) {
    return entry.entails(h) && interp.post(h, body).entails(h);
}

Fixpoint loop_fixpoint(const AbstractInterpreter& interp, const Polyhedron& entry, const StmtSeq& body,
                       const AnalysisOptions& options) {
    Fixpoint fp{entry, false, 0};
    Polyhedron& h = fp.invariant;
    while (true) {
        if (++fp.iterations > max_ascending_iterations) {
            throw SoundnessError("loop fixpoint did not stabilize");
        }
        const Polyhedron next = interp.join(h, interp.post(h, body));
        if (next.entails(h)) {
            break;
        }
        if (fp.iterations <= options.widening_delay) {
            h = next;
        } else {
            h = h.widen(next);
            fp.widened = true;
        }
    }
    for (std::size_t k = 0; k < options.narrowing_iterations; ++k) {
        const Polyhedron candidate = interp.join(entry, interp.post(h, body));
        if (h.entails(candidate) && candidate.entails(h)) {
            break;
        }
        if (!is_inductive(interp, entry, body, candidate)) {
            break;
        }
        h = candidate;
    }
    if (!is_inductive(interp, entry, body, h)) {
        throw SoundnessError("loop invariant is not inductive:\n" + h.to_string());
    }
    h = h.normalized();
    return fp;
}

} // namespace

Polyhedron AbstractInterpreter::join(const Polyhedron& a, const Polyhedron& b) const {
    return options_.join == JoinKind::Hull ? a.join(b) : a.weak_join(b);
}

Polyhedron AbstractInterpreter::post(const Polyhedron& state, const StmtSeq& seq) const {
    Polyhedron s = state;
    for (const Stmt& stmt : seq) {
        if (s.is_bottom()) {
            break;
        }
        s = post(s, stmt);
    }
    return s;
}

Polyhedron AbstractInterpreter::post(const Polyhedron& state, const Stmt& stmt) const {
    if (state.is_bottom()) {
        return state;
    }
    return std::visit(
        [&](const auto& s) -> Polyhedron {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Assume>) {
                return state.meet(s.constraints);
            } else if constexpr (std::is_same_v<T, AssignAffine>) {
                return state.assign_affine(s.target, s.value);
            } else if constexpr (std::is_same_v<T, AssignInterval>) {
                if (!state.entails(LinearConstraint::le(s.low, s.high))) {
                    throw SoundnessError("empty interval in assignment to " + s.target.name());
                }
                return state.assign_interval(s.target, s.low, s.high);
            } else if constexpr (std::is_same_v<T, Choice>) {
                Polyhedron out = Polyhedron::bottom();
                for (const StmtSeq& branch : s.branches) {
                    out = join(out, post(state, branch));
                }
                return out;
            } else {
                return loop_fixpoint(*this, state, s.body, options_).invariant;
            }
        },
        stmt.node);
}

AttackerSummary attacker_summary(const AttackerProgram& program, const AnalysisOptions& options,
                                 const Polyhedron& entry) {
    const AbstractInterpreter interp(options);
    const Polyhedron start = interp.post(Polyhedron::top(), program.init).meet(entry);
    if (start.is_bottom()) {
        return {start, true, 0};
    }
    Fixpoint fp = loop_fixpoint(interp, start, program.loop.body, options);
    return {std::move(fp.invariant), !fp.widened, fp.iterations};
}

LabelSet reachable_labels(const AttackerSummary& summary, const TreeProgram& tree, std::span<const Rational> x) {
    if (x.size() != tree.dimension()) {
        throw InputError("instance has " + std::to_string(x.size()) + " features, the tree expects " +
                         std::to_string(tree.dimension()));
    }
    Polyhedron start = summary.invariant.meet(abstract_instance(x));
    if (start.is_bottom()) {
        throw SoundnessError("attacker summary excludes the unattacked instance");
    }
    // The guards only mention attacked features, so keeping just those is exact.
    std::set<Var> attacked;
    for (std::size_t i = 0; i < x.size(); ++i) {
        attacked.insert(Var::attacked(i));
    }
    start = start.project_onto(attacked);

    LabelSet labels;
    std::vector<std::pair<TreeProgram::NodeId, Polyhedron>> stack{{tree.root(), std::move(start)}};
    while (!stack.empty()) {
        auto [id, state] = std::move(stack.back());
        stack.pop_back();
        if (const auto* leaf = std::get_if<TreeProgram::ReturnLabel>(&tree.node(id))) {
            labels.insert(leaf->label);
            continue;
        }
        const auto& cond = std::get<TreeProgram::Cond>(tree.node(id));
        Polyhedron then_state = state.meet(cond.guard());
        // The else branch needs xp_f > v somewhere; descend with its closure.
        if (!state.entails(cond.guard())) {
            stack.emplace_back(cond.else_branch, state.meet(cond.relaxed_negation()));
        }
        if (!then_state.is_bottom()) {
            stack.emplace_back(cond.then_branch, std::move(then_state));
        }
    }
    if (labels.empty()) {
        throw SoundnessError("no leaf is reachable");
    }
    return labels;
}

Verdict verdict(const LabelSet& reachable, const DecisionTree& tree, std::span<const Rational> x, Label y) {
    Verdict v;
    v.reachable = reachable;
    v.predicted = tree.predict(x);
    if (v.predicted != y) {
        v.kind = VerdictKind::MisclassifiedClean;
    } else if (reachable.size() == 1 && *reachable.begin() == y) {
        v.kind = VerdictKind::CertifiedRobust;
    } else {
        v.kind = VerdictKind::PossiblyVulnerable;
    }
    return v;
}

DatasetAnalysis analyze_dataset(const DecisionTree& tree, const Attacker& attacker, const LabeledDataset& data,
                                const AnalysisOptions& options) {
    data.check_against(tree.dimension(), tree.label_count());
    const AttackerProgram program = encode_attacker(attacker, tree.dimension());
    const TreeProgram tree_program = encode_tree(tree);

    DatasetAnalysis out;
    if (!options.per_instance_summary) {
        out.summary = attacker_summary(program, options);
    }
    out.verdicts = detail::parallel_map(data.size(), options.jobs, [&](std::size_t i) {
        const LabeledRow& row = data.rows[i];
        try {
            LabelSet reachable;
            if (out.summary) {
                reachable = reachable_labels(*out.summary, tree_program, row.x);
            } else {
                const AttackerSummary local = attacker_summary(program, options, abstract_instance(row.x));
                reachable = reachable_labels(local, tree_program, row.x);
            }
            return verdict(reachable, tree, row.x, row.y);
        } catch (const InputError& e) {
            throw InputError("row " + std::to_string(i) + ": " + e.what());
        } catch (const SoundnessError& e) {
            throw SoundnessError("row " + std::to_string(i) + ": " + e.what());
        }
    });
    return out;
}

} // namespace treecert

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "treecert/encoder.hpp"
#include "treecert/model.hpp"
#include "treecert/polyhedron.hpp"

namespace treecert {

/// Upper bound used when merging control-flow paths and loop iterates.
enum class JoinKind {
    Hull, ///< closed convex hull
    Weak, ///< mutual-entailment join
};

std::string_view to_string(JoinKind kind);

struct AnalysisOptions {
    /// Loop iterations joined plainly before widening kicks in.
    std::size_t widening_delay = 5;
    /// Decreasing iterations run after the widened fixpoint.
    std::size_t narrowing_iterations = 1;
    JoinKind join = JoinKind::Hull;
    /// Re-run the attacker fixpoint per row with the instance fixed up front.
    bool per_instance_summary = false;
    /// Worker threads for per-row work; 0 means one per hardware thread.
    std::size_t jobs = 0;
};

/// Abstract semantics of the IR over polyhedra.
class AbstractInterpreter {
  public:
    explicit AbstractInterpreter(const AnalysisOptions& options) : options_(options) {}

    [[nodiscard]] Polyhedron post(const Polyhedron& state, const StmtSeq& seq) const;
    [[nodiscard]] Polyhedron post(const Polyhedron& state, const Stmt& stmt) const;
    [[nodiscard]] Polyhedron join(const Polyhedron& a, const Polyhedron& b) const;

  private:
    AnalysisOptions options_;
};

struct AttackerSummary {
    /// Loop-exit invariant over x_i, xp_i, r_j and B.
    Polyhedron invariant;
    bool converged_without_widening = true;
    /// Ascending iterations until the fixpoint was reached.
    std::size_t iterations = 0;
};

/// Fixpoint of the attacker loop. `entry` is met with the state after the
/// init block (top gives the instance-independent summary). The result is
/// checked to be inductive; a failed check throws SoundnessError.
AttackerSummary attacker_summary(const AttackerProgram& program, const AnalysisOptions& options = {},
                                 const Polyhedron& entry = Polyhedron::top());

/// Labels of the leaves reachable by some state of summary /\ alpha({x}).
LabelSet reachable_labels(const AttackerSummary& summary, const TreeProgram& tree, std::span<const Rational> x);

enum class VerdictKind { CertifiedRobust, PossiblyVulnerable, MisclassifiedClean };

std::string_view to_string(VerdictKind kind);

struct Verdict {
    VerdictKind kind = VerdictKind::PossiblyVulnerable;
    LabelSet reachable;
    Label predicted;
};

Verdict verdict(const LabelSet& reachable, const DecisionTree& tree, std::span<const Rational> x, Label y);

struct DatasetAnalysis {
    /// Absent in per-instance mode.
    std::optional<AttackerSummary> summary;
    std::vector<Verdict> verdicts;
};

/// One verdict per row, in row order. Row failures are rethrown with the row
/// index in the message.
DatasetAnalysis analyze_dataset(const DecisionTree& tree, const Attacker& attacker, const LabeledDataset& data,
                                const AnalysisOptions& options = {});

} // namespace treecert

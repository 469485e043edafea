// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "treecert/encoder.hpp"
#include "treecert/model.hpp"
#include "treecert/polyhedron.hpp"

namespace treecert::testing {

using Rng = std::mt19937_64;

std::filesystem::path fixture(const std::string& name);
DecisionTree example_tree();
Attacker example_attacker();
LabeledDataset example_data();

Rational q(long num, long den = 1);

// ---- concrete semantics -------------------------------------------------

/// Runs `seq` on `state`, resolving each non-deterministic choice with rng.
/// Loops run a random number of iterations up to `max_loop`. Returns false
/// when an assume fails (the path is infeasible).
bool run_concrete(const StmtSeq& seq, Valuation& state, Rng& rng, std::size_t max_loop = 8);

/// A random valid attack sequence of x under the attacker, applied
/// concretely; the final state holds xp_i, r_j, B and x_i.
Valuation random_attack_run(const Attacker& attacker, const Instance& x, Rng& rng);

// ---- random inputs ---------------------------------------------------------

struct TreeShape {
    std::size_t dimension = 2;
    std::size_t max_depth = 4;
    std::size_t labels = 2;
    /// Thresholds are multiples of 1/2 in [0, threshold_range].
    long threshold_range = 10;
};

DecisionTree random_tree(Rng& rng, const TreeShape& shape);

struct AttackerShape {
    std::size_t max_rules = 3;
    /// Costs are drawn from {1, ..., max_cost}.
    long max_cost = 3;
    /// Upper bound on the total number of rule applications the budget allows.
    long max_applications = 6;
    /// Probability of a finite, narrow precondition.
    double narrow_precondition = 0.0;
};

Attacker random_attacker(Rng& rng, std::size_t dimension, const AttackerShape& shape);

/// Instances whose features lie near the tree thresholds (never exactly on them).
Instance random_instance(Rng& rng, const DecisionTree& tree);

/// Rows labeled with the clean prediction, except a `noise` fraction.
LabeledDataset random_dataset(Rng& rng, const DecisionTree& tree, std::size_t rows, double noise);

// ---- polyhedra and points --------------------------------------------------

/// Random non-empty polyhedron over `vars`; small integer coefficients.
Polyhedron random_polyhedron(Rng& rng, const std::vector<Var>& vars, std::size_t constraints);

/// Points of gamma(p) found by rejection sampling on a grid of step 1/4 in
/// [-box, box]^n plus points of a few random lines. May return fewer than
/// `count` points when p is thin.
std::vector<Valuation> sample_points(Rng& rng, const Polyhedron& p, const std::vector<Var>& vars,
                                     std::size_t count, long box = 6);

/// Uniform grid points in [-box, box]^n, step 1/4, not filtered.
Valuation random_grid_point(Rng& rng, const std::vector<Var>& vars, long box = 6);

// ---- brute-force attack oracle --------------------------------------------

/// Labels of every instance reached by sequences whose deltas are taken from
/// a grid of `steps` + 1 evenly spaced points of each rule's interval.
/// Independent of the library oracle; exhaustive over that grid.
LabelSet grid_attack_labels(const Attacker& attacker, const DecisionTree& tree, const Instance& x,
                            std::size_t steps = 4);

} // namespace treecert::testing

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treecert/linear.hpp"
#include "treecert/model.hpp"

namespace treecert {

/// Closed convex polyhedron: a conjunction of linear constraints over exact
/// rationals, or Bottom.
///
/// Values are immutable; every operation returns a new polyhedron. A
/// non-Bottom value is always satisfiable: meet() checks feasibility and
/// collapses to Bottom. Variables that no constraint mentions are
/// unconstrained.
///
/// All decisions reduce to Fourier-Motzkin elimination. Entailment of
/// `e <= 0` is checked as infeasibility of the system plus the strict
/// inequality `e > 0`.
class Polyhedron {
  public:
    Polyhedron() = default;

    static Polyhedron top() { return {}; }
    static Polyhedron bottom();
    static Polyhedron of(std::span<const LinearConstraint> constraints) { return top().meet(constraints); }
    static Polyhedron of(std::initializer_list<LinearConstraint> constraints) {
        return of(std::span<const LinearConstraint>(constraints.begin(), constraints.size()));
    }

    [[nodiscard]] bool is_bottom() const { return bottom_; }
    [[nodiscard]] bool is_top() const { return !bottom_ && constraints_.empty(); }
    [[nodiscard]] const std::vector<LinearConstraint>& constraints() const { return constraints_; }
    [[nodiscard]] std::set<Var> variables() const;

    /// Decides satisfiability from the constraints alone.
    [[nodiscard]] bool is_feasible() const;

    [[nodiscard]] bool entails(const LinearConstraint& c) const;
    /// gamma(this) is a subset of gamma(other).
    [[nodiscard]] bool entails(const Polyhedron& other) const;
    [[nodiscard]] bool equivalent(const Polyhedron& other) const { return entails(other) && other.entails(*this); }

    /// Throws std::out_of_range if a constrained variable has no value.
    [[nodiscard]] bool contains(const Valuation& point) const;

    [[nodiscard]] Polyhedron meet(std::span<const LinearConstraint> constraints) const;
    [[nodiscard]] Polyhedron meet(const LinearConstraint& c) const { return meet(std::span(&c, 1)); }
    [[nodiscard]] Polyhedron meet(std::initializer_list<LinearConstraint> constraints) const {
        return meet(std::span<const LinearConstraint>(constraints.begin(), constraints.size()));
    }
    [[nodiscard]] Polyhedron meet(const Polyhedron& other) const;

    /// Existential quantification (exact projection).
    [[nodiscard]] Polyhedron project(Var v) const { return project(std::span(&v, 1)); }
    [[nodiscard]] Polyhedron project(std::span<const Var> vars) const;
    /// Projects away every variable not in `keep`.
    [[nodiscard]] Polyhedron project_onto(const std::set<Var>& keep) const;

    /// Strongest postcondition of v := e.
    [[nodiscard]] Polyhedron assign_affine(Var v, const AffineExpr& e) const;
    /// Strongest postcondition of v := w for some w in [low, high], with the
    /// bounds evaluated on the pre-state.
    [[nodiscard]] Polyhedron assign_interval(Var v, const AffineExpr& low, const AffineExpr& high) const;

    /// Keeps each operand's constraints (equalities split into two
    /// inequalities) that the other operand entails.
    [[nodiscard]] Polyhedron weak_join(const Polyhedron& other) const;
    /// Closed convex hull of the union.
    [[nodiscard]] Polyhedron join(const Polyhedron& other) const;
    /// Standard widening: the constraints of *this (equalities split) that
    /// `newer` entails.
    [[nodiscard]] Polyhedron widen(const Polyhedron& newer) const;

    /// Canonical minimal form: implicit equalities made explicit and reduced
    /// to echelon form (pivot = greatest variable), pivots substituted out of
    /// the inequalities, and redundant inequalities removed. Equivalent
    /// polyhedra normalize to identical constraint lists.
    [[nodiscard]] Polyhedron normalized() const;

    /// Tightest bounds of e over the polyhedron; nullopt when unbounded.
    [[nodiscard]] std::pair<std::optional<Rational>, std::optional<Rational>> bounds(const AffineExpr& e) const;

    /// One canonical constraint per line ("bottom" / "top" for the extremes).
    [[nodiscard]] std::string to_string() const;

    /// Row-count threshold for redundancy pruning inside elimination.
    static void set_prune_cap(std::size_t cap);
    static std::size_t prune_cap();

  private:
    explicit Polyhedron(std::vector<LinearConstraint> constraints) : constraints_(std::move(constraints)) {}
    // Canonical rewriting; the LP searches for implied equalities and
    // redundant rows are skipped when the caller already knows the answer.
    [[nodiscard]] Polyhedron canonical(bool search_implied) const;

    [[nodiscard]] Polyhedron rename(Var from, Var to) const;
    [[nodiscard]] Polyhedron hull_of_normalized(const Polyhedron& other) const;

    bool bottom_ = false;
    std::vector<LinearConstraint> constraints_; // sorted, unique, no tautologies
};

/// alpha({x}): the conjunction x_i = value_i over the initial-feature variables.
Polyhedron abstract_instance(std::span<const Rational> x);

} // namespace treecert

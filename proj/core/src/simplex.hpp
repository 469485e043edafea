// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact two-phase simplex over the rationals with Bland's pivoting rule.
// Variables are free. Internal to the polyhedra domain.

#include <cstddef>
#include <span>

#include "fourier_motzkin.hpp"

namespace treecert::lp {

enum class Status { Infeasible, Unbounded, Optimal };

struct Result {
    Status status = Status::Infeasible;
    /// objective . x at the optimum; meaningful only for Optimal.
    Rational value;
};

/// Maximizes objective . x subject to the rows, with Lt rows relaxed to Le.
Result maximize(std::span<const fm::Row> rows, std::size_t num_vars, std::span<const Integer> objective);

/// Rational feasibility; strict rows are supported.
bool feasible(std::span<const fm::Row> rows, std::size_t num_vars);

/// True iff every solution of `rows` satisfies `row` (Le or Eq). An
/// infeasible system entails everything.
bool entails(std::span<const fm::Row> rows, std::size_t num_vars, const fm::Row& row);

} // namespace treecert::lp

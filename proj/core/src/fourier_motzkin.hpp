// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense-row Fourier-Motzkin elimination over integer-scaled rational rows.
// Internal to the polyhedra domain.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "treecert/rational.hpp"

namespace treecert::fm {

enum class Kind : std::uint8_t { Le, Lt, Eq }; // coef . x + constant (<=, <, =) 0

struct Row {
    std::vector<Integer> coef;
    Integer constant;
    Kind kind = Kind::Le;
};

struct Options {
    // Above this many inequalities, rows implied by the others are dropped
    // after each elimination step.
    std::size_t prune_cap = 64;
};

/// Existentially quantifies every column with `drop[col]` set. Returned rows
/// have zero coefficients on those columns. nullopt iff the system has no
/// rational solution.
std::optional<std::vector<Row>> eliminate(std::vector<Row> rows, const std::vector<bool>& drop, const Options& options);

bool feasible(std::vector<Row> rows, std::size_t num_vars, const Options& options);

/// Negation of an inequality row (<= becomes >, < becomes >=).
Row negate(const Row& row);

} // namespace treecert::fm

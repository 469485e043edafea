// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Double description method: generators of a polyhedral cone given by
// homogeneous constraints. Internal to the polyhedra domain.

#include <cstddef>
#include <span>
#include <vector>

#include "treecert/rational.hpp"

namespace treecert::dd {

using Vec = std::vector<Integer>;

/// coef . z <= 0, or coef . z = 0 when `equality`.
struct Constraint {
    Vec coef;
    bool equality = false;
};

/// cone(rays) + span(lines), with a minimal set of extreme rays.
struct Generators {
    std::vector<Vec> rays;
    std::vector<Vec> lines;
};

Generators generators(std::span<const Constraint> constraints, std::size_t dim);

} // namespace treecert::dd

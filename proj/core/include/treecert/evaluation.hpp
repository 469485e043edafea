// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "treecert/analyzer.hpp"
#include "treecert/oracle.hpp"

namespace treecert {

/// Fraction of rows the tree mispredicts; 0 for an empty dataset.
Rational clean_loss(const DecisionTree& tree, const LabeledDataset& data);

/// Fraction of rows not certified robust; 0 for no rows.
Rational approx_loss(std::span<const Verdict> verdicts);

/// Verifier flags against oracle ground truth over rows the tree classifies
/// correctly. A row is positive when it is flagged PossiblyVulnerable and
/// the oracle-found attack makes it truly vulnerable.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    /// MisclassifiedClean rows, left out of the four counts above.
    std::size_t excluded = 0;

    /// FP / (FP + TN); nullopt when the denominator is 0.
    [[nodiscard]] std::optional<Rational> fpr() const;
    /// FP / (FP + TP); nullopt when the denominator is 0.
    [[nodiscard]] std::optional<Rational> fdr() const;

    ConfusionCounts& operator+=(const ConfusionCounts& other);
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Throws InputError when the three sequences differ in length.
ConfusionCounts confusion(std::span<const Verdict> verdicts, std::span<const OracleResult> oracle,
                          const LabeledDataset& data);

} // namespace treecert

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/evaluation.hpp"

#include <string>

#include "treecert/errors.hpp"

namespace treecert {

namespace {

Rational ratio(std::size_t num, std::size_t den) { return {Integer(num), Integer(den)}; }

} // namespace

Rational clean_loss(const DecisionTree& tree, const LabeledDataset& data) {
    if (data.empty()) {
        return 0;
    }
    std::size_t wrong = 0;
    for (const LabeledRow& row : data.rows) {
        if (tree.predict(row.x) != row.y) {
            ++wrong;
        }
    }
    return ratio(wrong, data.size());
}

Rational approx_loss(std::span<const Verdict> verdicts) {
    if (verdicts.empty()) {
        return 0;
    }
    std::size_t flagged = 0;
    for (const Verdict& v : verdicts) {
        if (v.kind != VerdictKind::CertifiedRobust) {
            ++flagged;
        }
    }
    return ratio(flagged, verdicts.size());
}

std::optional<Rational> ConfusionCounts::fpr() const {
    if (fp + tn == 0) {
        return std::nullopt;
    }
    return ratio(fp, fp + tn);
}

std::optional<Rational> ConfusionCounts::fdr() const {
    if (fp + tp == 0) {
        return std::nullopt;
    }
    return ratio(fp, fp + tp);
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
    tp += other.tp;
    fp += other.fp;
    tn += other.tn;
    fn += other.fn;
    excluded += other.excluded;
    return *this;
}

ConfusionCounts confusion(std::span<const Verdict> verdicts, std::span<const OracleResult> oracle,
                          const LabeledDataset& data) {
    if (verdicts.size() != data.size() || oracle.size() != data.size()) {
        throw InputError("confusion needs one verdict and one oracle result per row (" +
                         std::to_string(verdicts.size()) + ", " + std::to_string(oracle.size()) + ", " +
                         std::to_string(data.size()) + ")");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (verdicts[i].kind == VerdictKind::MisclassifiedClean) {
            ++c.excluded;
            continue;
        }
        const bool flagged = verdicts[i].kind == VerdictKind::PossiblyVulnerable;
        const bool attacked = oracle[i].found_label_other_than(data.rows[i].y);
        if (flagged) {
            ++(attacked ? c.tp : c.fp);
        } else {
            ++(attacked ? c.fn : c.tn);
        }
    }
    return c;
}

} // namespace treecert

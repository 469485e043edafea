// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "parallel.hpp"
#include "treecert/errors.hpp"

namespace treecert {

std::vector<Rational> candidate_deltas(const RewritingRule& rule, std::span<const Rational> x,
                                       std::span<const Rational> thresholds) {
    const Rational& value = x[rule.feature];
    const Rational& lo = rule.delta_low;
    const Rational& hi = rule.delta_high;

    std::vector<Rational> points(thresholds.begin(), thresholds.end());
    points.push_back(value);
    points.push_back(value + lo);
    points.push_back(value + hi);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::optional<Rational> gap;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const Rational g = points[i] - points[i - 1];
        if (!gap || g < *gap) {
            gap = g;
        }
    }
    const Rational eps = gap ? Rational(*gap / 2) : Rational(1);

    std::vector<Rational> out{lo, hi};
    for (const Rational& v : thresholds) {
        for (const Rational& d : {Rational(v - value), Rational(v + eps - value)}) {
            if (lo <= d && d <= hi) {
                out.push_back(d);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

OracleResult enumerate_attacks(const Attacker& attacker, const DecisionTree& tree, std::span<const Rational> x,
                               std::size_t max_states) {
    attacker.check_dimension(tree.dimension());
    const auto& rules = attacker.rules();

    struct Node {
        AttackState state;
        std::optional<std::size_t> parent;
        std::optional<AttackStep> step;
    };
    std::vector<Node> nodes;
    std::map<std::pair<Instance, Rational>, std::size_t> seen;

    OracleResult result;
    result.clean_label = tree.predict(x);
    result.attacked_labels.insert(result.clean_label);
    std::optional<std::size_t> witness_node;

    std::vector<std::vector<Rational>> thresholds(tree.dimension());
    for (std::size_t f = 0; f < tree.dimension(); ++f) {
        thresholds[f] = tree.thresholds(f);
    }

    const Instance start(x.begin(), x.end());
    nodes.push_back({{start, attacker.budget(), std::vector<std::size_t>(rules.size(), 0)}, std::nullopt, std::nullopt});
    seen.emplace(std::pair{start, attacker.budget()}, 0);

    for (std::size_t cursor = 0; cursor < nodes.size() && result.exhaustive; ++cursor) {
        for (std::size_t j = 0; j < rules.size() && result.exhaustive; ++j) {
            const RewritingRule& rule = rules[j];
            const AttackState& cur = nodes[cursor].state;
            if (rule.cost > cur.budget) {
                continue;
            }
            if (!rule.precondition_holds(cur.instance[rule.feature])) {
                result.exact_mode = false;
                continue;
            }
            for (const Rational& delta : candidate_deltas(rule, cur.instance, thresholds[rule.feature])) {
                AttackState next = nodes[cursor].state;
                next.instance[rule.feature] += delta;
                next.budget -= rule.cost;
                ++next.applied[j];
                auto key = std::pair{next.instance, next.budget};
                if (seen.contains(key)) {
                    continue;
                }
                if (nodes.size() >= max_states) {
                    result.exhaustive = false;
                    break;
                }
                const Label label = tree.predict(next.instance);
                result.attacked_labels.insert(label);
                const std::size_t id = nodes.size();
                seen.emplace(std::move(key), id);
                AttackStep step{j, delta, next.instance};
                nodes.push_back({std::move(next), cursor, std::move(step)});
                if (!witness_node && label != result.clean_label) {
                    witness_node = id;
                }
            }
        }
    }
    result.visited_states = nodes.size();

    if (witness_node) {
        std::vector<AttackStep> steps;
        for (std::size_t id = *witness_node; nodes[id].parent; id = *nodes[id].parent) {
            steps.push_back(*nodes[id].step);
        }
        std::reverse(steps.begin(), steps.end());
        result.witness = std::move(steps);
    }
    return result;
}

std::optional<Instance> replay(const Attacker& attacker, std::span<const Rational> x,
                               std::span<const AttackStep> steps) {
    Instance cur(x.begin(), x.end());
    Rational budget = attacker.budget();
    for (const AttackStep& s : steps) {
        if (s.rule >= attacker.rules().size()) {
            return std::nullopt;
        }
        const RewritingRule& rule = attacker.rules()[s.rule];
        if (rule.feature >= cur.size() || !rule.applicable(cur, budget) || s.delta < rule.delta_low ||
            rule.delta_high < s.delta) {
            return std::nullopt;
        }
        cur[rule.feature] += s.delta;
        budget -= rule.cost;
        if (cur != s.result) {
            return std::nullopt;
        }
    }
    return cur;
}

OracleLoss oracle_loss(std::span<const OracleResult> results, const LabeledDataset& data) {
    if (results.size() != data.size()) {
        throw InputError("oracle results cover " + std::to_string(results.size()) + " rows, dataset has " +
                         std::to_string(data.size()));
    }
    OracleLoss out{Rational(0), false};
    if (data.empty()) {
        return out;
    }
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].found_label_other_than(data.rows[i].y)) {
            ++wrong;
        }
        out.lower_bound = out.lower_bound || !results[i].exhaustive;
    }
    out.loss = Rational(Integer(wrong), Integer(data.size()));
    return out;
}

std::vector<OracleResult> enumerate_dataset(const DecisionTree& tree, const LabeledDataset& data,
                                            const Attacker& attacker, std::size_t max_states, std::size_t jobs) {
    data.check_against(tree.dimension(), tree.label_count());
    return detail::parallel_map(data.size(), jobs, [&](std::size_t i) {
        return enumerate_attacks(attacker, tree, data.rows[i].x, max_states);
    });
}

OracleLoss loss_under_attack(const DecisionTree& tree, const LabeledDataset& data, const Attacker& attacker,
                             std::size_t max_states, std::size_t jobs) {
    const std::vector<OracleResult> results = enumerate_dataset(tree, data, attacker, max_states, jobs);
    return oracle_loss(results, data);
}

} // namespace treecert

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <variant>

#include "treecert/io.hpp"

namespace treecert::testing {

namespace {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(items.size()) - 1))];
}

Rational random_between(Rng& rng, const Rational& lo, const Rational& hi) {
    switch (uniform(rng, 0, 3)) {
    case 0: return lo;
    case 1: return hi;
    default: return lo + (hi - lo) * q(uniform(rng, 0, 16), 16);
    }
}

bool run_stmt(const Stmt& stmt, Valuation& state, Rng& rng, std::size_t max_loop);

bool run_seq(const StmtSeq& seq, Valuation& state, Rng& rng, std::size_t max_loop) {
    for (const Stmt& s : seq) {
        if (!run_stmt(s, state, rng, max_loop)) {
            return false;
        }
    }
    return true;
}

bool run_stmt(const Stmt& stmt, Valuation& state, Rng& rng, std::size_t max_loop) {
    if (const auto* a = std::get_if<Assume>(&stmt.node)) {
        for (const LinearConstraint& c : a->constraints) {
            if (!c.satisfied_by(state)) {
                return false;
            }
        }
        return true;
    }
    if (const auto* a = std::get_if<AssignAffine>(&stmt.node)) {
        state[a->target] = a->value.evaluate(state);
        return true;
    }
    if (const auto* a = std::get_if<AssignInterval>(&stmt.node)) {
        const Rational lo = a->low.evaluate(state);
        const Rational hi = a->high.evaluate(state);
        if (hi < lo) {
            throw std::logic_error("empty interval");
        }
        state[a->target] = random_between(rng, lo, hi);
        return true;
    }
    if (const auto* c = std::get_if<Choice>(&stmt.node)) {
        if (c->branches.empty()) {
            return false;
        }
        return run_seq(pick(rng, c->branches), state, rng, max_loop);
    }
    const auto& loop = std::get<Loop>(stmt.node);
    const long rounds = uniform(rng, 0, static_cast<long>(max_loop));
    for (long i = 0; i < rounds; ++i) {
        Valuation next = state;
        if (!run_seq(loop.body, next, rng, max_loop)) {
            break; // that iteration is infeasible; exit the loop here
        }
        state = std::move(next);
    }
    return true;
}

void grid_search(const Attacker& attacker, const DecisionTree& tree, const Instance& x, const Rational& budget,
                 std::size_t steps, std::set<std::pair<Instance, Rational>>& seen, LabelSet& labels) {
    if (!seen.emplace(x, budget).second) {
        return;
    }
    labels.insert(tree.predict(x));
    for (const RewritingRule& r : attacker.rules()) {
        if (!r.applicable(x, budget)) {
            continue;
        }
        for (std::size_t k = 0; k <= steps; ++k) {
            Instance next = x;
            next[r.feature] += r.delta_low + (r.delta_high - r.delta_low) * q(static_cast<long>(k), static_cast<long>(steps));
            grid_search(attacker, tree, next, budget - r.cost, steps, seen, labels);
        }
    }
}

} // namespace

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(TREECERT_FIXTURE_DIR) / name; }

DecisionTree example_tree() { return load_tree(read_file(fixture("example_tree.json"))); }

Attacker example_attacker() { return load_attacker(read_file(fixture("example_attacker.json"))); }

LabeledDataset example_data() {
    return load_dataset(read_file(fixture("example_data.csv")), "label", example_tree().label_names());
}

Rational q(long num, long den) { return {Integer(num), Integer(den)}; }

bool run_concrete(const StmtSeq& seq, Valuation& state, Rng& rng, std::size_t max_loop) {
    return run_seq(seq, state, rng, max_loop);
}

Valuation random_attack_run(const Attacker& attacker, const Instance& x, Rng& rng) {
    Instance cur = x;
    Rational budget = attacker.budget();
    std::vector<long> counts(attacker.rules().size(), 0);
    while (!chance(rng, 0.2)) {
        std::vector<std::size_t> usable;
        for (std::size_t j = 0; j < attacker.rules().size(); ++j) {
            if (attacker.rules()[j].applicable(cur, budget)) {
                usable.push_back(j);
            }
        }
        if (usable.empty()) {
            break;
        }
        const std::size_t j = pick(rng, usable);
        const RewritingRule& r = attacker.rules()[j];
        cur[r.feature] += random_between(rng, r.delta_low, r.delta_high);
        budget -= r.cost;
        ++counts[j];
    }
    Valuation v;
    for (std::size_t i = 0; i < x.size(); ++i) {
        v[Var::initial(i)] = x[i];
        v[Var::attacked(i)] = cur[i];
    }
    for (std::size_t j = 0; j < counts.size(); ++j) {
        v[Var::counter(j)] = counts[j];
    }
    v[Var::budget()] = budget;
    return v;
}

DecisionTree random_tree(Rng& rng, const TreeShape& shape) {
    DecisionTree::Builder b;
    const auto build = [&](const auto& self, std::size_t depth) -> DecisionTree::NodeId {
        const bool leaf = depth == shape.max_depth || (depth > 0 && chance(rng, 0.15 + 0.15 * static_cast<double>(depth)));
        if (leaf) {
            return b.leaf(Label{static_cast<std::uint32_t>(uniform(rng, 0, static_cast<long>(shape.labels) - 1))});
        }
        const auto feature = static_cast<FeatureIndex>(uniform(rng, 0, static_cast<long>(shape.dimension) - 1));
        const Rational threshold = q(uniform(rng, 0, 2 * shape.threshold_range), 2);
        const auto left = self(self, depth + 1);
        const auto right = self(self, depth + 1);
        return b.split(feature, threshold, left, right);
    };
    const auto root = build(build, 0);
    std::vector<std::string> names;
    for (std::size_t l = 0; l < shape.labels; ++l) {
        names.push_back("c" + std::to_string(l));
    }
    return std::move(b).build(root, shape.dimension, names);
}

Attacker random_attacker(Rng& rng, std::size_t dimension, const AttackerShape& shape) {
    const long count = uniform(rng, 1, static_cast<long>(shape.max_rules));
    std::vector<RewritingRule> rules;
    long lcm = 1;
    long min_cost = shape.max_cost;
    for (long j = 0; j < count; ++j) {
        RewritingRule r;
        r.feature = static_cast<FeatureIndex>(uniform(rng, 0, static_cast<long>(dimension) - 1));
        const long cost = uniform(rng, 1, shape.max_cost);
        r.cost = cost;
        lcm = std::lcm(lcm, cost);
        min_cost = std::min(min_cost, cost);
        const Rational a = q(uniform(rng, 1, 4), 2);
        switch (uniform(rng, 0, 3)) {
        case 0: r.delta_low = -a; r.delta_high = 0; break;
        case 1: r.delta_low = 0; r.delta_high = a; break;
        case 2: r.delta_low = -a; r.delta_high = a; break;
        default: r.delta_low = a / 2; r.delta_high = a; break;
        }
        if (chance(rng, shape.narrow_precondition)) {
            const Rational c = q(uniform(rng, 0, 20), 2);
            r.pre_low = ExtendedRational(Rational(c - 3));
            r.pre_high = ExtendedRational(Rational(c + 3));
        } else if (chance(rng, 0.3)) {
            r.pre_low = ExtendedRational(Rational(-100));
            r.pre_high = ExtendedRational(Rational(100));
        }
        rules.push_back(r);
    }
    // Keep the budget a multiple of every cost so counter vertices stay integral.
    const long max_multiple = std::max(1L, shape.max_applications * min_cost / lcm);
    const long budget = lcm * uniform(rng, 1, max_multiple);
    return {std::move(rules), Rational(budget)};
}

Instance random_instance(Rng& rng, const DecisionTree& tree) {
    static const std::vector<Rational> offsets{q(-3, 2), q(-1), q(-3, 4), q(-1, 2), q(-1, 4),
                                               q(1, 4),  q(1, 2), q(3, 4), q(1),    q(3, 2)};
    Instance x(tree.dimension());
    for (std::size_t f = 0; f < x.size(); ++f) {
        const std::vector<Rational> ts = tree.thresholds(f);
        if (ts.empty() || chance(rng, 0.1)) {
            x[f] = q(uniform(rng, 0, 40), 4) + q(1, 8);
        } else {
            x[f] = pick(rng, ts) + pick(rng, offsets);
        }
    }
    return x;
}

LabeledDataset random_dataset(Rng& rng, const DecisionTree& tree, std::size_t rows, double noise) {
    LabeledDataset d;
    d.feature_names = tree.feature_names();
    for (std::size_t i = 0; i < rows; ++i) {
        LabeledRow row;
        row.x = random_instance(rng, tree);
        row.y = tree.predict(row.x);
        if (chance(rng, noise)) {
            row.y = Label{static_cast<std::uint32_t>(uniform(rng, 0, static_cast<long>(tree.label_count()) - 1))};
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

Polyhedron random_polyhedron(Rng& rng, const std::vector<Var>& vars, std::size_t constraints) {
    Valuation center;
    for (const Var v : vars) {
        center[v] = q(uniform(rng, -4, 4), 2);
    }
    std::vector<LinearConstraint> cs;
    while (cs.size() < constraints) {
        AffineExpr e;
        for (const Var v : vars) {
            if (chance(rng, 0.6)) {
                e += AffineExpr::term(v, Rational(uniform(rng, -3, 3)));
            }
        }
        if (e.is_constant()) {
            continue;
        }
        const Rational at_center = e.evaluate(center);
        if (chance(rng, 0.1)) {
            cs.push_back(LinearConstraint::eq(e, at_center));
        } else {
            cs.push_back(LinearConstraint::le(e, at_center + uniform(rng, 0, 6)));
        }
    }
    return Polyhedron::of(cs);
}

Valuation random_grid_point(Rng& rng, const std::vector<Var>& vars, long box) {
    Valuation p;
    for (const Var v : vars) {
        p[v] = q(uniform(rng, -4 * box, 4 * box), 4);
    }
    return p;
}

std::vector<Valuation> sample_points(Rng& rng, const Polyhedron& p, const std::vector<Var>& vars,
                                     std::size_t count, long box) {
    std::vector<Valuation> out;
    if (p.is_bottom()) {
        return out;
    }
    // Equalities of the canonical form define their greatest variable.
    const Polyhedron n = p.normalized();
    std::vector<std::pair<Var, AffineExpr>> defs;
    for (const LinearConstraint& c : n.constraints()) {
        if (c.is_equality()) {
            const Var pivot = c.expr().terms().rbegin()->first;
            const Rational k = c.expr().coeff(pivot);
            defs.emplace_back(pivot, (c.expr() - AffineExpr::term(pivot, k)) * Rational(-1 / k));
        }
    }
    for (std::size_t attempt = 0; attempt < count * 400 && out.size() < count; ++attempt) {
        Valuation pt = random_grid_point(rng, vars, box);
        for (const auto& [pivot, def] : defs) {
            pt[pivot] = def.evaluate(pt);
        }
        if (p.contains(pt)) {
            out.push_back(std::move(pt));
        }
    }
    return out;
}

LabelSet grid_attack_labels(const Attacker& attacker, const DecisionTree& tree, const Instance& x, std::size_t steps) {
    std::set<std::pair<Instance, Rational>> seen;
    LabelSet labels;
    grid_search(attacker, tree, x, attacker.budget(), steps, seen, labels);
    return labels;
}

} // namespace treecert::testing

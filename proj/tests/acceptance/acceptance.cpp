// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "treecert/analyzer.hpp"
#include "treecert/evaluation.hpp"
#include "treecert/io.hpp"
#include "treecert/oracle.hpp"

namespace tc = treecert;
using tc::testing::q;
using LC = tc::LinearConstraint;

namespace {

// Pinned tolerances.
constexpr double kExampleSeconds = 1.0;
constexpr double kSoundnessSeconds = 300.0;
constexpr double kEfficiencySeconds = 600.0;
constexpr std::size_t kSoundnessConfigs = 200;
constexpr std::size_t kRowsPerConfig = 10;
constexpr double kMaxFpr = 0.10;
constexpr std::size_t kStateGrowth = 2;   // per budget doubling, at least
constexpr double kMaxVerifyTimeRatio = 2.0; // across the sweep, below
constexpr std::size_t kMinDomainSamples = 10'000;
constexpr std::size_t kOracleMaxStates = 1'000'000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Result {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const Result& r) {
    std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) {
        ++failures;
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool subset(const tc::LabelSet& a, const tc::LabelSet& b) {
    return std::ranges::all_of(a, [&](tc::Label l) { return b.contains(l); });
}

// ---------------------------------------------------------------------------

Result running_example() {
    const auto start = Clock::now();
    Result r;
    std::vector<std::string> problems;
    const tc::DecisionTree tree = tc::testing::example_tree();
    const tc::Attacker attacker = tc::testing::example_attacker();
    const tc::Label minus{0};
    const tc::Label plus{1};
    const std::vector<tc::Rational> x{q(6), q(8)};

    const tc::AttackerSummary s = tc::attacker_summary(tc::encode_attacker(attacker, 2));
    const tc::LabelSet reach = tc::reachable_labels(s, tc::encode_tree(tree), x);
    const tc::Verdict v = tc::verdict(reach, tree, x, minus);
    if (v.kind != tc::VerdictKind::PossiblyVulnerable || reach != tc::LabelSet{minus, plus}) {
        problems.emplace_back("verdict for (6,8)");
    }

    const tc::OracleResult o = tc::enumerate_attacks(attacker, tree, x);
    const tc::Instance target{q(5), q(8)};
    if (!o.witness || o.witness->back().result != target || tree.predict(target) != plus ||
        !tc::replay(attacker, x, *o.witness)) {
        problems.emplace_back("oracle witness");
    }

    const tc::Var x0 = tc::Var::initial(0);
    const tc::Var x1 = tc::Var::initial(1);
    const tc::Var p0 = tc::Var::attacked(0);
    const tc::Var p1 = tc::Var::attacked(1);
    const tc::Var r0 = tc::Var::counter(0);
    const tc::Var r1 = tc::Var::counter(1);
    const std::vector<LC> invariants{
        LC::ge(p0, tc::AffineExpr(x0) - r0), LC::le(p0, x0),
        LC::ge(p1, x1), LC::le(p1, tc::AffineExpr(x1) + r1),
        LC::ge(r0, 0), LC::ge(r1, 0),
        LC::le(tc::AffineExpr(r0) * q(5) + tc::AffineExpr(r1) * q(4), 10),
    };
    for (const LC& c : invariants) {
        if (!s.invariant.entails(c)) {
            problems.push_back("summary misses " + c.to_string());
        }
    }
    const double secs = seconds_since(start);
    if (secs >= kExampleSeconds) {
        problems.emplace_back("too slow");
    }
    r.pass = problems.empty();
    r.detail = fmt("(6,8) reachable {-1,+1}, witness (5,8), %zu invariants entailed, %.3fs", invariants.size(), secs);
    for (const auto& p : problems) {
        r.detail += "; " + p;
    }
    return r;
}

// ---------------------------------------------------------------------------

struct SuiteTotals {
    std::size_t configs = 0;
    std::size_t rows = 0;
    std::size_t non_exhaustive_rows = 0;
    std::size_t inexact_rows = 0;
    std::size_t false_negatives = 0;
    std::size_t labels_missed = 0;
    std::size_t bound_violations = 0;
    tc::ConfusionCounts exact; // rows searched exhaustively in exact mode
    double seconds = 0;
};

SuiteTotals run_soundness_suite() {
    SuiteTotals t;
    tc::testing::Rng rng(20240611);
    const auto start = Clock::now();
    for (std::size_t i = 0; i < kSoundnessConfigs; ++i) {
        tc::testing::TreeShape ts;
        ts.dimension = 1 + rng() % 4;
        ts.max_depth = 2 + rng() % 4; // at most 32 leaves
        ts.labels = 2 + rng() % 2;
        const tc::DecisionTree tree = tc::testing::random_tree(rng, ts);
        tc::testing::AttackerShape as;
        as.max_rules = 3;
        as.max_applications = 6;
        const tc::Attacker attacker = tc::testing::random_attacker(rng, ts.dimension, as);
        const tc::LabeledDataset data = tc::testing::random_dataset(rng, tree, kRowsPerConfig, 0.1);

        const tc::DatasetAnalysis analysis = tc::analyze_dataset(tree, attacker, data);
        const auto oracle = tc::enumerate_dataset(tree, data, attacker, kOracleMaxStates);
        ++t.configs;
        t.rows += data.size();
        for (std::size_t k = 0; k < data.size(); ++k) {
            const tc::OracleResult& o = oracle[k];
            const tc::Verdict& v = analysis.verdicts[k];
            t.non_exhaustive_rows += o.exhaustive ? 0 : 1;
            t.inexact_rows += o.exact_mode ? 0 : 1;
            if (!subset(o.attacked_labels, v.reachable)) {
                ++t.labels_missed;
            }
            const std::vector<tc::Verdict> one_v{v};
            const std::vector<tc::OracleResult> one_o{o};
            tc::LabeledDataset one_row;
            one_row.rows.push_back(data.rows[k]);
            const tc::ConfusionCounts c = tc::confusion(one_v, one_o, one_row);
            t.false_negatives += c.fn;
            if (o.exhaustive && o.exact_mode) {
                t.exact += c;
            }
        }
        const tc::Rational oracle_loss = tc::oracle_loss(oracle, data).loss;
        if (!(oracle_loss <= tc::approx_loss(analysis.verdicts))) {
            ++t.bound_violations;
        }
    }
    t.seconds = seconds_since(start);
    return t;
}

Result soundness(const SuiteTotals& t) {
    Result r;
    r.pass = t.false_negatives == 0 && t.labels_missed == 0 && t.non_exhaustive_rows == 0 &&
             t.seconds < kSoundnessSeconds;
    r.detail = fmt("%zu configs, %zu rows, FN=%zu, oracle labels outside reachable set=%zu, "
                   "non-exhaustive rows=%zu, %.1fs",
                   t.configs, t.rows, t.false_negatives, t.labels_missed, t.non_exhaustive_rows, t.seconds);
    return r;
}

Result over_approximation(const SuiteTotals& t) {
    Result r;
    r.pass = t.bound_violations == 0 && t.non_exhaustive_rows == 0;
    r.detail = fmt("oracle loss <= approx loss on %zu/%zu configs", t.configs - t.bound_violations, t.configs);
    return r;
}

Result precision(const SuiteTotals& t) {
    Result r;
    const auto fpr = t.exact.fpr();
    const auto fdr = t.exact.fdr();
    r.pass = fpr.has_value() && fpr->convert_to<double>() <= kMaxFpr;
    r.detail = fmt("exact-mode rows tp=%zu fp=%zu tn=%zu fn=%zu excluded=%zu, FPR=%s (%.4f), FDR=%s, "
                   "inexact rows left out=%zu",
                   t.exact.tp, t.exact.fp, t.exact.tn, t.exact.fn, t.exact.excluded,
                   fpr ? tc::to_string(*fpr).c_str() : "n/a", fpr ? fpr->convert_to<double>() : 0.0,
                   fdr ? tc::to_string(*fdr).c_str() : "n/a", t.inexact_rows);
    return r;
}

// ---------------------------------------------------------------------------

struct Family {
    tc::DecisionTree tree;
    tc::Attacker attacker;
    tc::LabeledDataset data;
};

Family load_family(const std::string& tree, const std::string& attacker, const std::string& data) {
    using tc::testing::fixture;
    tc::DecisionTree t = tc::load_tree(tc::read_file(fixture(tree)));
    tc::Attacker a = tc::load_attacker(tc::read_file(fixture(attacker)));
    tc::LabeledDataset d = tc::load_dataset(tc::read_file(fixture(data)), "label", t.label_names());
    return {std::move(t), std::move(a), std::move(d)};
}

Result efficiency() {
    const auto start = Clock::now();
    const Family f = load_family("efficiency_tree.json", "efficiency_attacker.json", "efficiency_data.csv");
    const std::vector<long> budgets{10, 20, 40, 80};
    std::vector<std::size_t> states;
    std::vector<double> verify_times;
    tc::AnalysisOptions options;
    options.jobs = 1;
    for (const long k : budgets) {
        const tc::Attacker a = f.attacker.with_budget(tc::Rational(k));
        std::size_t total = 0;
        bool exhaustive = true;
        for (const auto& o : tc::enumerate_dataset(f.tree, f.data, a, 20'000'000, 1)) {
            total += o.visited_states;
            exhaustive = exhaustive && o.exhaustive;
        }
        states.push_back(exhaustive ? total : 0);
        std::vector<double> runs;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = Clock::now();
            (void)tc::analyze_dataset(f.tree, a, f.data, options);
            runs.push_back(seconds_since(t0));
        }
        std::ranges::sort(runs);
        verify_times.push_back(runs[runs.size() / 2]);
    }
    bool growth = true;
    for (std::size_t i = 1; i < states.size(); ++i) {
        growth = growth && states[i - 1] > 0 && states[i] >= kStateGrowth * states[i - 1];
    }
    const auto [lo, hi] = std::ranges::minmax(verify_times);
    const double ratio = hi / lo;
    const double secs = seconds_since(start);
    Result r;
    r.pass = growth && ratio < kMaxVerifyTimeRatio && secs < kEfficiencySeconds;
    std::ostringstream d;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        d << "K=" << budgets[i] << " states=" << states[i] << " verify=" << fmt("%.4fs", verify_times[i]) << "; ";
    }
    d << fmt("verify max/min=%.2f, total %.1fs", ratio, secs);
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------

struct PropertyCount {
    std::size_t samples = 0;
    std::size_t violations = 0;
    void check(bool ok) {
        ++samples;
        violations += ok ? 0 : 1;
    }
};

Result domain_properties() {
    tc::testing::Rng rng(77);
    const std::vector<tc::Var> vars{tc::Var::initial(0), tc::Var::initial(1), tc::Var::attacked(0),
                                    tc::Var::counter(0)};
    const auto poly = [&] { return tc::testing::random_polyhedron(rng, vars, 2 + rng() % 4); };
    const auto points = [&](const tc::Polyhedron& p) { return tc::testing::sample_points(rng, p, vars, 60); };
    const auto small = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)); };
    const auto affine = [&] {
        tc::AffineExpr e(tc::Rational(small(-3, 3)));
        for (const tc::Var v : vars) {
            e += tc::AffineExpr::term(v, q(small(-2, 2), 2));
        }
        return e;
    };
    const auto constraint = [&] {
        tc::AffineExpr e;
        while (e.is_constant()) {
            for (const tc::Var v : vars) {
                e += tc::AffineExpr::term(v, tc::Rational(small(-2, 2)));
            }
        }
        return LC::le(e, tc::Rational(small(-2, 6)));
    };

    PropertyCount meet, project, affine_assign, interval_assign, weak_join, hull_join, widen, stabilize;
    while (meet.samples < kMinDomainSamples || project.samples < kMinDomainSamples ||
           affine_assign.samples < kMinDomainSamples || interval_assign.samples < kMinDomainSamples ||
           weak_join.samples < kMinDomainSamples || hull_join.samples < kMinDomainSamples ||
           widen.samples < kMinDomainSamples) {
        const tc::Polyhedron p = poly();
        const tc::Polyhedron other = poly();
        const auto pts = points(p);
        const auto other_pts = points(other);

        const LC c = constraint();
        const tc::Polyhedron m = p.meet(c);
        for (int k = 0; k < 60; ++k) {
            const tc::Valuation g = tc::testing::random_grid_point(rng, vars, 4);
            meet.check(m.contains(g) == (p.contains(g) && c.satisfied_by(g)));
        }

        const tc::Var v = vars[rng() % vars.size()];
        const tc::Polyhedron shadow = p.project(v);
        const tc::AffineExpr e = affine();
        const tc::Polyhedron post = p.assign_affine(v, e);
        const tc::AffineExpr hi = e + tc::Rational(small(0, 2));
        const tc::Polyhedron ipost = p.assign_interval(v, e, hi);
        for (const tc::Valuation& pt : pts) {
            tc::Valuation moved = pt;
            moved[v] = tc::Rational(small(-50, 50));
            project.check(shadow.contains(moved));
            moved[v] = e.evaluate(pt);
            affine_assign.check(post.contains(moved));
            const tc::Rational lo = e.evaluate(pt);
            moved[v] = lo + (hi.evaluate(pt) - lo) * q(small(0, 4), 4);
            interval_assign.check(ipost.contains(moved));
        }

        const tc::Polyhedron wj = p.weak_join(other);
        const tc::Polyhedron hj = p.join(other);
        const tc::Polyhedron grown = hj;
        const tc::Polyhedron wd = p.widen(grown);
        for (const auto* src : {&pts, &other_pts}) {
            for (const tc::Valuation& pt : *src) {
                weak_join.check(wj.contains(pt));
                hull_join.check(hj.contains(pt));
                widen.check(wd.contains(pt));
            }
        }

        // Widening an ascending chain stabilizes within |constraints| + 1 steps.
        tc::Polyhedron acc = p.normalized();
        const std::size_t limit = acc.constraints().size() + 1;
        std::size_t steps = 0;
        for (int k = 0; k < 12; ++k) {
            const tc::Polyhedron next = acc.widen(acc.join(poly())).normalized();
            if (next.equivalent(acc)) {
                break;
            }
            acc = next;
            ++steps;
        }
        stabilize.check(steps <= limit);
    }

    Result r;
    const std::vector<std::pair<const char*, const PropertyCount*>> all{
        {"meet", &meet},           {"project", &project},     {"assign_affine", &affine_assign},
        {"assign_interval", &interval_assign}, {"weak_join", &weak_join}, {"join", &hull_join},
        {"widen", &widen},         {"widening chains", &stabilize}};
    std::ostringstream d;
    for (const auto& [name, count] : all) {
        d << name << " " << count->samples - count->violations << "/" << count->samples << "; ";
        r.pass = r.pass && count->violations == 0;
    }
    r.detail = d.str();
    r.detail.resize(r.detail.size() - 2);
    return r;
}

// ---------------------------------------------------------------------------

Result budget_monotonicity() {
    Result r;
    std::ostringstream d;
    const std::vector<std::pair<Family, std::vector<long>>> sweeps{
        {load_family("example_tree.json", "example_attacker.json", "sweep_data.csv"), {4, 10, 20, 40, 80}},
        {load_family("efficiency_tree.json", "efficiency_attacker.json", "efficiency_data.csv"), {10, 20, 40, 80}},
    };
    for (const auto& [f, budgets] : sweeps) {
        std::vector<bool> previous;
        d << "[";
        for (const long k : budgets) {
            const auto verdicts = tc::analyze_dataset(f.tree, f.attacker.with_budget(tc::Rational(k)), f.data).verdicts;
            std::vector<bool> certified;
            std::size_t count = 0;
            for (const auto& v : verdicts) {
                certified.push_back(v.kind == tc::VerdictKind::CertifiedRobust);
                count += certified.back() ? 1 : 0;
            }
            for (std::size_t i = 0; i < previous.size(); ++i) {
                if (certified[i] && !previous[i]) {
                    r.pass = false;
                }
            }
            d << "K=" << k << ":" << count << " ";
            previous = std::move(certified);
        }
        d.seekp(-1, std::ios_base::cur);
        d << "] ";
    }
    r.detail = "certified rows per budget " + d.str();
    r.detail.pop_back();
    return r;
}

void guarded(const std::string& name, const std::function<Result()>& fn) {
    try {
        report(name, fn());
    } catch (const std::exception& e) {
        report(name, {false, std::string("exception: ") + e.what()});
    }
}

} // namespace

int main() {
    guarded("running-example", running_example);
    SuiteTotals totals;
    bool suite_ok = true;
    try {
        totals = run_soundness_suite();
    } catch (const std::exception& e) {
        suite_ok = false;
        report("soundness-suite", {false, std::string("exception: ") + e.what()});
        report("over-approximation-bound", {false, "soundness suite did not complete"});
        report("precision", {false, "soundness suite did not complete"});
    }
    if (suite_ok) {
        report("soundness-suite", soundness(totals));
        report("over-approximation-bound", over_approximation(totals));
        report("precision", precision(totals));
    }
    guarded("efficiency-trend", efficiency);
    guarded("domain-properties", domain_properties);
    guarded("budget-monotonicity", budget_monotonicity);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

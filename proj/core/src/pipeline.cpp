// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/pipeline.hpp"

#include <chrono>
#include <fstream>

#include "treecert/errors.hpp"
#include "treecert/io.hpp"

namespace treecert {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
}

} // namespace

Report build_report(const DecisionTree& tree, const Attacker& attacker, const LabeledDataset& data,
                    const RunConfig& config) {
    Report r;
    r.mode = config.mode;
    r.analysis = config.analysis;
    r.oracle_max_states = config.oracle_max_states;
    r.label_column = config.label_column;
    r.prune_cap = Polyhedron::prune_cap();
    r.label_names = tree.label_names();
    r.feature_names = tree.feature_names();

    attacker.check_dimension(tree.dimension());
    data.check_against(tree.dimension(), tree.label_count());

    const auto analysis_start = Clock::now();
    DatasetAnalysis analysis = analyze_dataset(tree, attacker, data, config.analysis);
    if (config.timing) {
        r.analysis_seconds = seconds_since(analysis_start);
    }
    r.summary = std::move(analysis.summary);
    r.clean_loss = clean_loss(tree, data);
    r.approx_loss = approx_loss(analysis.verdicts);

    if (r.summary && !r.summary->converged_without_widening) {
        r.notes.emplace_back("widening was applied: invariants tied to the budget may be weaker than exact");
    }
    if (config.analysis.per_instance_summary) {
        r.notes.emplace_back("attacker fixpoint recomputed per row with the instance fixed");
    }

    std::vector<OracleResult> oracle;
    if (config.mode == Mode::Compare) {
        const auto oracle_start = Clock::now();
        oracle = enumerate_dataset(tree, data, attacker, config.oracle_max_states, config.analysis.jobs);
        if (config.timing) {
            r.oracle_seconds = seconds_since(oracle_start);
        }
        r.oracle_loss = oracle_loss(oracle, data);
        r.confusion = confusion(analysis.verdicts, oracle, data);
        for (const OracleResult& o : oracle) {
            r.oracle_complete = r.oracle_complete && o.exhaustive && o.exact_mode;
        }
        // Oracle attacks are concrete, so a missed one is a soundness bug
        // whatever the search mode.
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (analysis.verdicts[i].kind == VerdictKind::CertifiedRobust &&
                oracle[i].found_label_other_than(data.rows[i].y)) {
                throw SoundnessError("row " + std::to_string(i) + ": certified robust but the oracle found an attack");
            }
        }
        r.notes.emplace_back("rows misclassified without attack are excluded from tp/fp/tn/fn");
        if (r.oracle_loss->lower_bound) {
            r.notes.emplace_back("oracle search hit the state limit on some rows: its loss is a lower bound");
        }
        if (!r.oracle_complete) {
            r.notes.emplace_back("some oracle searches were cut off or hit a failed precondition: fpr and fdr are approximate");
        }
    }

    r.rows.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        RowReport row{i, data.rows[i].y, std::move(analysis.verdicts[i]), std::nullopt};
        if (!oracle.empty()) {
            row.oracle = std::move(oracle[i]);
        }
        r.rows.push_back(std::move(row));
    }
    return r;
}

RunOutcome run(const RunConfig& config) {
    RunOutcome outcome;
    try {
        const DecisionTree tree = load_tree(read_file(config.tree));
        const Attacker attacker = load_attacker(read_file(config.attacker));
        const LabeledDataset data = load_dataset(read_file(config.data), config.label_column, tree.label_names());

        std::string output;
        if (config.dump_ir) {
            output += dump_ir(encode_tree(tree), tree.label_names());
            output += dump_ir(encode_attacker(attacker, tree.dimension()));
            output += '\n';
        }
        Report report = build_report(tree, attacker, data, config);
        if (config.dump_summary) {
            output += "attacker summary:\n";
            output += report.summary ? report.summary->invariant.to_string() : "(per-instance mode)\n";
            output += '\n';
        }
        output += to_table(report);

        const std::string json = to_json(report);
        const std::string csv = to_csv(report);
        if (config.out_json) {
            write_file(*config.out_json, json);
        }
        if (config.out_csv) {
            write_file(*config.out_csv, csv);
        }
        outcome.output = std::move(output);
        outcome.report = std::move(report);
    } catch (const InputError& e) {
        outcome = {exit_input_error, std::nullopt, {}, std::string("input error: ") + e.what()};
    } catch (const SoundnessError& e) {
        outcome = {exit_soundness_error, std::nullopt, {}, std::string("soundness check failed: ") + e.what()};
    } catch (const std::exception& e) {
        outcome = {exit_internal, std::nullopt, {}, std::string("internal error: ") + e.what()};
    }
    return outcome;
}

} // namespace treecert

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
//
// treecert verify  --tree T.json --attacker A.json --data D.csv [options]
// treecert compare --tree T.json --attacker A.json --data D.csv [options]

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "treecert/pipeline.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("treecert");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TREECERT_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; only accept real names.
        if (level != spdlog::level::off || std::string(env) == "off") {
            spdlog::set_level(level);
        } else {
            spdlog::warn("ignoring TREECERT_LOG={}", env);
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();
    treecert::RunConfig cfg;

    CLI::App app{"Certify decision trees against budgeted rewriting attacks"};
    app.set_version_flag("--version", "treecert 0.1.0");

    std::string mode_name = "verify";
    std::string join_name = "hull";
    std::string out_json;
    std::string out_csv;
    bool no_timing = false;

    app.add_option("--tree", cfg.tree, "decision tree JSON")->required();
    app.add_option("--attacker", cfg.attacker, "attacker JSON")->required();
    app.add_option("--data", cfg.data, "labeled CSV test set")->required();
    app.add_option("--label-column", cfg.label_column, "name of the label column")->capture_default_str();
    app.add_option("--mode", mode_name, "verify or compare (a subcommand takes precedence)")
        ->check(CLI::IsMember({"verify", "compare"}))
        ->capture_default_str();
    app.add_option("--widening-delay", cfg.analysis.widening_delay, "loop iterations before widening")
        ->capture_default_str();
    app.add_option("--narrowing-iterations", cfg.analysis.narrowing_iterations,
                   "decreasing iterations after widening")
        ->capture_default_str();
    app.add_option("--join", join_name, "upper bound used by the analysis: hull or weak")
        ->check(CLI::IsMember({"hull", "weak"}))
        ->capture_default_str();
    app.add_flag("--per-instance-summary", cfg.analysis.per_instance_summary,
                 "recompute the attacker fixpoint for every row");
    app.add_option("--oracle-max-states", cfg.oracle_max_states, "state limit of each oracle search")
        ->capture_default_str();
    app.add_option("--out-json", out_json, "write the JSON report here");
    app.add_option("--out-csv", out_csv, "write the per-row CSV here");
    app.add_flag("--dump-ir", cfg.dump_ir, "print the tree and attacker programs");
    app.add_flag("--dump-summary", cfg.dump_summary, "print the attacker summary polyhedron");
    app.add_option("--jobs", cfg.analysis.jobs, "worker threads, 0 = all hardware threads")->capture_default_str();
    app.add_flag("--no-timing", no_timing, "omit wall-clock times from the report");

    auto* verify = app.add_subcommand("verify", "analysis only")->fallthrough();
    auto* compare = app.add_subcommand("compare", "analysis plus oracle ground truth")->fallthrough();
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return treecert::exit_input_error;
    }

    if (verify->parsed()) {
        mode_name = "verify";
    } else if (compare->parsed()) {
        mode_name = "compare";
    }
    cfg.mode = mode_name == "compare" ? treecert::Mode::Compare : treecert::Mode::Verify;
    cfg.analysis.join = join_name == "weak" ? treecert::JoinKind::Weak : treecert::JoinKind::Hull;
    if (!out_json.empty()) {
        cfg.out_json = out_json;
    }
    if (!out_csv.empty()) {
        cfg.out_csv = out_csv;
    }
    cfg.timing = !no_timing;

    spdlog::info("mode {}, tree {}, attacker {}, data {}", mode_name, cfg.tree.string(), cfg.attacker.string(),
                 cfg.data.string());
    const treecert::RunOutcome outcome = treecert::run(cfg);
    if (outcome.exit_code != treecert::exit_ok) {
        spdlog::error("{}", outcome.diagnostics);
        return outcome.exit_code;
    }
    if (outcome.report) {
        if (outcome.report->analysis_seconds) {
            spdlog::info("analysis took {:.3f} s", *outcome.report->analysis_seconds);
        }
        if (outcome.report->oracle_seconds) {
            spdlog::info("oracle took {:.3f} s", *outcome.report->oracle_seconds);
        }
    }
    std::cout << outcome.output;
    return treecert::exit_ok;
}

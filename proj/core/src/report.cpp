// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace treecert {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string label_text(const Report& r, Label l) {
    return l.id < r.label_names.size() ? r.label_names[l.id] : std::to_string(l.id);
}

ordered_json label_list(const Report& r, const LabelSet& labels) {
    ordered_json out = ordered_json::array();
    for (const Label l : labels) {
        out.push_back(label_text(r, l));
    }
    return out;
}

std::string ratio_text(const std::optional<Rational>& q) { return q ? to_string(*q) : "n/a"; }

ordered_json instance_json(const Instance& x) {
    ordered_json out = ordered_json::array();
    for (const Rational& v : x) {
        out.push_back(to_string(v));
    }
    return out;
}

std::string joined(const Report& r, const LabelSet& labels, std::string_view sep) {
    std::string out;
    for (const Label l : labels) {
        if (!out.empty()) {
            out += sep;
        }
        out += label_text(r, l);
    }
    return out;
}

std::string witness_text(const std::vector<AttackStep>& steps) {
    std::string out;
    for (const AttackStep& s : steps) {
        if (!out.empty()) {
            out += ' ';
        }
        out += "r" + std::to_string(s.rule) + "(" + to_string(s.delta) + ")";
    }
    return out;
}

std::string csv_cell(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Verify ? "verify" : "compare"; }

std::string to_json(const Report& r) {
    ordered_json doc;
    doc["mode"] = std::string(to_string(r.mode));

    ordered_json settings;
    settings["label_column"] = r.label_column;
    settings["widening_delay"] = r.analysis.widening_delay;
    settings["narrowing_iterations"] = r.analysis.narrowing_iterations;
    settings["join"] = std::string(to_string(r.analysis.join));
    settings["per_instance_summary"] = r.analysis.per_instance_summary;
    settings["prune_cap"] = r.prune_cap;
    settings["oracle_max_states"] = r.oracle_max_states;
    doc["settings"] = settings;

    if (r.summary) {
        ordered_json summary;
        summary["converged_without_widening"] = r.summary->converged_without_widening;
        summary["iterations"] = r.summary->iterations;
        ordered_json constraints = ordered_json::array();
        for (const LinearConstraint& c : r.summary->invariant.constraints()) {
            constraints.push_back(c.to_string());
        }
        summary["invariant"] = constraints;
        doc["summary"] = summary;
    }

    ordered_json metrics;
    metrics["rows"] = r.rows.size();
    metrics["clean_loss"] = to_string(r.clean_loss);
    metrics["approx_loss_under_attack"] = to_string(r.approx_loss);
    if (r.oracle_loss) {
        metrics["oracle_loss_under_attack"] = to_string(r.oracle_loss->loss);
        metrics["oracle_loss_is_lower_bound"] = r.oracle_loss->lower_bound;
    }
    if (r.confusion) {
        metrics["tp"] = r.confusion->tp;
        metrics["fp"] = r.confusion->fp;
        metrics["tn"] = r.confusion->tn;
        metrics["fn"] = r.confusion->fn;
        metrics["excluded_clean_errors"] = r.confusion->excluded;
        metrics["fpr"] = ratio_text(r.confusion->fpr());
        metrics["fdr"] = ratio_text(r.confusion->fdr());
        metrics["ratios_approximate"] = !r.oracle_complete;
    }
    doc["metrics"] = metrics;

    if (r.analysis_seconds || r.oracle_seconds) {
        ordered_json timing;
        if (r.analysis_seconds) {
            timing["analysis_seconds"] = *r.analysis_seconds;
        }
        if (r.oracle_seconds) {
            timing["oracle_seconds"] = *r.oracle_seconds;
        }
        doc["timing"] = timing;
    }

    ordered_json rows = ordered_json::array();
    for (const RowReport& row : r.rows) {
        ordered_json j;
        j["row"] = row.row;
        j["clean_label"] = label_text(r, row.label);
        j["predicted"] = label_text(r, row.verdict.predicted);
        j["verdict"] = std::string(to_string(row.verdict.kind));
        j["reachable"] = label_list(r, row.verdict.reachable);
        if (row.oracle) {
            ordered_json o;
            o["attacked"] = label_list(r, row.oracle->attacked_labels);
            o["exhaustive"] = row.oracle->exhaustive;
            o["exact_mode"] = row.oracle->exact_mode;
            o["visited_states"] = row.oracle->visited_states;
            if (row.oracle->witness) {
                ordered_json steps = ordered_json::array();
                for (const AttackStep& s : *row.oracle->witness) {
                    ordered_json step;
                    step["rule"] = s.rule;
                    step["delta"] = to_string(s.delta);
                    step["instance"] = instance_json(s.result);
                    steps.push_back(step);
                }
                o["witness"] = steps;
            } else {
                o["witness"] = nullptr;
            }
            j["oracle"] = o;
        }
        rows.push_back(j);
    }
    doc["rows"] = rows;
    doc["notes"] = r.notes;
    return doc.dump(2) + "\n";
}

std::string to_table(const Report& r) {
    std::ostringstream out;
    const auto line = [&out](std::string_view key, const std::string& value) {
        out << std::left << std::setw(28) << key << value << '\n';
    };
    line("mode", std::string(to_string(r.mode)));
    line("rows", std::to_string(r.rows.size()));
    line("clean loss", to_string(r.clean_loss));
    line("approx loss under attack", to_string(r.approx_loss));
    if (r.oracle_loss) {
        line("oracle loss under attack",
             to_string(r.oracle_loss->loss) + (r.oracle_loss->lower_bound ? " (lower bound)" : ""));
    }
    if (r.confusion) {
        const ConfusionCounts& c = *r.confusion;
        line("tp / fp / tn / fn", std::to_string(c.tp) + " / " + std::to_string(c.fp) + " / " + std::to_string(c.tn) +
                                      " / " + std::to_string(c.fn));
        line("excluded clean errors", std::to_string(c.excluded));
        const std::string approx = r.oracle_complete ? "" : " (approximate)";
        line("fpr", ratio_text(c.fpr()) + approx);
        line("fdr", ratio_text(c.fdr()) + approx);
    }
    if (r.summary) {
        line("summary iterations", std::to_string(r.summary->iterations) +
                                       (r.summary->converged_without_widening ? "" : " (widened)"));
    }
    if (r.analysis_seconds) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << *r.analysis_seconds << " s";
        line("analysis time", s.str());
    }
    if (r.oracle_seconds) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << *r.oracle_seconds << " s";
        line("oracle time", s.str());
    }
    for (const std::string& note : r.notes) {
        out << "note: " << note << '\n';
    }
    if (!r.rows.empty()) {
        std::vector<std::string> reachable;
        std::size_t width = std::string_view("reachable").size();
        for (const RowReport& row : r.rows) {
            reachable.push_back('{' + joined(r, row.verdict.reachable, ", ") + '}');
            width = std::max(width, reachable.back().size());
        }
        const bool with_oracle = r.mode == Mode::Compare;
        out << '\n'
            << std::left << std::setw(6) << "row" << std::setw(12) << "label" << std::setw(12) << "predicted"
            << std::setw(20) << "verdict";
        if (with_oracle) {
            out << std::setw(static_cast<int>(width)) << "reachable" << "  | attacked";
        } else {
            out << "reachable";
        }
        out << '\n';
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            const RowReport& row = r.rows[i];
            out << std::left << std::setw(6) << row.row << std::setw(12) << label_text(r, row.label) << std::setw(12)
                << label_text(r, row.verdict.predicted) << std::setw(20) << to_string(row.verdict.kind);
            if (row.oracle) {
                out << std::setw(static_cast<int>(width)) << reachable[i] << "  | {"
                    << joined(r, row.oracle->attacked_labels, ", ") << '}';
            } else {
                out << reachable[i];
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string to_csv(const Report& r) {
    std::ostringstream out;
    out << "row,clean_label,predicted,verdict,oracle_attacked,witness\n";
    for (const RowReport& row : r.rows) {
        out << row.row << ',' << csv_cell(label_text(r, row.label)) << ','
            << csv_cell(label_text(r, row.verdict.predicted)) << ',' << to_string(row.verdict.kind) << ',';
        if (row.oracle) {
            out << csv_cell(joined(r, row.oracle->attacked_labels, ";")) << ',';
            if (row.oracle->witness) {
                out << csv_cell(witness_text(*row.oracle->witness));
            }
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

} // namespace treecert

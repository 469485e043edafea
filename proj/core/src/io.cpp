// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treecert/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treecert/errors.hpp"

namespace treecert {

using nlohmann::json;

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
    throw InputError(path + ": " + what);
}

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) {
        fail_at(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail_at(path, std::string("missing \"") + key + "\"");
    }
    return *it;
}

std::size_t as_index(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail_at(path, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

Rational as_rational(const json& v, const std::string& path) {
    if (v.is_number_integer()) {
        return Rational(v.get<std::int64_t>());
    }
    if (!v.is_string()) {
        fail_at(path, "expected a decimal string");
    }
    try {
        return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
        fail_at(path, e.what());
    }
}

ExtendedRational as_extended(const json& v, const std::string& path) {
    if (v.is_string()) {
        try {
            return parse_extended_rational(v.get<std::string>());
        } catch (const InputError& e) {
            fail_at(path, e.what());
        }
    }
    return as_rational(v, path);
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& path) {
    std::vector<std::string> out;
    if (!obj.contains(key)) {
        return out;
    }
    const json& arr = obj.at(key);
    if (!arr.is_array()) {
        fail_at(path + "." + key, "expected an array of strings");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) {
            fail_at(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
        }
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

DecisionTree::NodeId read_node(const json& node, const std::string& path, std::size_t dimension,
                               DecisionTree::Builder& builder, int depth) {
    if (depth > 10000) {
        fail_at(path, "tree is too deep");
    }
    if (!node.is_object()) {
        fail_at(path, "expected a node object");
    }
    if (node.contains("leaf")) {
        const std::size_t id = as_index(node.at("leaf"), path + ".leaf");
        return builder.leaf(Label{static_cast<std::uint32_t>(id)});
    }
    const std::size_t feature = as_index(member(node, "feature", path), path + ".feature");
    if (feature >= dimension) {
        fail_at(path + ".feature",
                "feature index " + std::to_string(feature) + " out of range for dimension " + std::to_string(dimension));
    }
    Rational threshold = as_rational(member(node, "threshold", path), path + ".threshold");
    const auto left = read_node(member(node, "left", path), path + ".left", dimension, builder, depth + 1);
    const auto right = read_node(member(node, "right", path), path + ".right", dimension, builder, depth + 1);
    return builder.split(feature, std::move(threshold), left, right);
}

json write_node(const DecisionTree& tree, DecisionTree::NodeId id) {
    const auto& n = tree.node(id);
    if (const auto* leaf = std::get_if<DecisionTree::Leaf>(&n)) {
        return json{{"leaf", leaf->label.id}};
    }
    const auto& s = std::get<DecisionTree::Split>(n);
    return json{{"feature", s.feature},
                {"threshold", to_string(s.threshold)},
                {"left", write_node(tree, s.left)},
                {"right", write_node(tree, s.right)}};
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string cell(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

} // namespace

DecisionTree load_tree(std::string_view json_text) {
    const json doc = parse_json(json_text, "tree document");
    const std::size_t dimension = as_index(member(doc, "dimension", "tree"), "tree.dimension");
    if (dimension == 0) {
        fail_at("tree.dimension", "must be positive");
    }
    DecisionTree::Builder builder;
    const auto root = read_node(member(doc, "root", "tree"), "root", dimension, builder, 0);
    try {
        return std::move(builder).build(root, dimension, string_list(doc, "labels", "tree"),
                                        string_list(doc, "feature_names", "tree"));
    } catch (const InputError& e) {
        fail_at("tree", e.what());
    }
}

std::string dump_tree(const DecisionTree& tree) {
    const json doc{{"dimension", tree.dimension()},
                   {"feature_names", tree.feature_names()},
                   {"labels", tree.label_names()},
                   {"root", write_node(tree, tree.root())}};
    return doc.dump(2) + "\n";
}

Attacker load_attacker(std::string_view json_text) {
    const json doc = parse_json(json_text, "attacker document");
    Rational budget = as_rational(member(doc, "budget", "attacker"), "attacker.budget");
    const json& rules_json = member(doc, "rules", "attacker");
    if (!rules_json.is_array()) {
        fail_at("attacker.rules", "expected an array");
    }
    std::vector<RewritingRule> rules;
    for (std::size_t j = 0; j < rules_json.size(); ++j) {
        const std::string path = "attacker.rules[" + std::to_string(j) + "]";
        const json& r = rules_json[j];
        RewritingRule rule;
        rule.feature = as_index(member(r, "feature", path), path + ".feature");
        if (r.contains("pre")) {
            const json& pre = r.at("pre");
            if (!pre.is_array() || pre.size() != 2) {
                fail_at(path + ".pre", "expected [low, high]");
            }
            rule.pre_low = as_extended(pre[0], path + ".pre[0]");
            rule.pre_high = as_extended(pre[1], path + ".pre[1]");
        }
        rule.cost = as_rational(member(r, "cost", path), path + ".cost");
        const json& delta = member(r, "delta", path);
        if (!delta.is_array() || delta.size() != 2) {
            fail_at(path + ".delta", "expected [low, high]");
        }
        rule.delta_low = as_rational(delta[0], path + ".delta[0]");
        rule.delta_high = as_rational(delta[1], path + ".delta[1]");
        rules.push_back(std::move(rule));
    }
    return Attacker(std::move(rules), std::move(budget));
}

std::string dump_attacker(const Attacker& attacker) {
    json rules = json::array();
    for (const RewritingRule& r : attacker.rules()) {
        rules.push_back(json{{"feature", r.feature},
                             {"pre", {to_string(r.pre_low), to_string(r.pre_high)}},
                             {"cost", to_string(r.cost)},
                             {"delta", {to_string(r.delta_low), to_string(r.delta_high)}}});
    }
    const json doc{{"budget", to_string(attacker.budget())}, {"rules", rules}};
    return doc.dump(2) + "\n";
}

LabeledDataset load_dataset(std::string_view csv_text, std::string_view label_column,
                            std::span<const std::string> label_names) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= csv_text.size()) {
        const auto nl = csv_text.find('\n', start);
        std::string_view line = csv_text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (nl == std::string_view::npos) {
            break;
        }
        start = nl + 1;
    }
    while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw InputError("dataset: missing header row");
    }

    const std::vector<std::string> header = split_csv_line(lines[0]);
    const auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end()) {
        throw InputError("dataset: no column named \"" + std::string(label_column) + "\"");
    }
    const auto label_col = static_cast<std::size_t>(label_it - header.begin());

    LabeledDataset data;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col) {
            data.feature_names.push_back(header[c]);
        }
    }

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = "dataset line " + std::to_string(i + 1);
        const std::vector<std::string> cells = split_csv_line(lines[i]);
        if (cells.size() != header.size()) {
            throw InputError(where + ": expected " + std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        }
        LabeledRow row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string column_where = where + ", column \"" + header[c] + "\"";
            if (c == label_col) {
                const auto named = std::find(label_names.begin(), label_names.end(), cells[c]);
                if (named != label_names.end()) {
                    row.y = Label{static_cast<std::uint32_t>(named - label_names.begin())};
                    continue;
                }
                const bool numeric = !cells[c].empty() && std::all_of(cells[c].begin(), cells[c].end(), [](char ch) {
                    return ch >= '0' && ch <= '9';
                });
                if (!numeric || cells[c].size() > 9) {
                    throw InputError(column_where + ": unknown label \"" + cells[c] + "\"");
                }
                row.y = Label{static_cast<std::uint32_t>(std::stoul(cells[c]))};
                continue;
            }
            try {
                row.x.push_back(parse_rational(cells[c]));
            } catch (const InputError& e) {
                throw InputError(column_where + ": " + e.what());
            }
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace treecert

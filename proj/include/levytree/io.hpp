#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "levytree/errors.hpp"
#include "levytree/generators.hpp"
#include "levytree/measure.hpp"
#include "levytree/path.hpp"
#include "levytree/report.hpp"
#include "levytree/tree_coding.hpp"

namespace levytree {

// Shortest round-trip decimal for binary64; readers recover the exact bits.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("not a number: '" + s + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Path CSV: header `t,value`, one row per grid point, constant spacing.

inline void write_path_csv(const FinitePath& w, std::ostream& out) {
    out << "t,value\n";
    for (std::size_t i = 0; i < w.size(); ++i)
        out << format_double(static_cast<double>(i) * w.step()) << ','
            << format_double(w[i]) << '\n';
}

inline void write_path_csv(const FinitePath& w, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw InputError("cannot open for writing: " + file);
    write_path_csv(w, out);
}

inline FinitePath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || (line != "t,value" && line != "t,value\r"))
        throw InputError("path CSV must start with header 't,value'");
    std::vector<double> ts, vs;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("path CSV row missing comma");
        ts.push_back(parse_double(line.substr(0, comma)));
        vs.push_back(parse_double(line.substr(comma + 1)));
    }
    if (vs.empty()) throw InputError("path CSV has no rows");
    if (vs.size() == 1) return FinitePath(std::move(vs), 1.0);
    const double step = ts[1] - ts[0];
    if (!(step > 0.0)) throw InputError("path CSV time column must be strictly increasing");
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (std::abs(ts[i] - static_cast<double>(i) * step) > 1e-9 * std::max(1.0, std::abs(ts[i])))
            throw InputError("path CSV time column must have constant spacing");
    return FinitePath(std::move(vs), step);
}

inline FinitePath read_path_csv_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open: " + file);
    return read_path_csv(in);
}

// ---------------------------------------------------------------------------
// Plane trees: balanced-parentheses string, one tree per line. A vertex is
// "(" + children + ")"; the one-edge tree is "(())".

inline std::string tree_to_parens(const PlaneTree& tree) {
    std::string out;
    out.reserve(2 * tree.vertex_count());
    std::vector<std::int32_t> stack;
    std::size_t next = 0;
    out.push_back('(');
    stack.push_back(tree.child_counts[next++]);
    while (!stack.empty()) {
        if (stack.back() > 0) {
            --stack.back();
            out.push_back('(');
            stack.push_back(tree.child_counts[next++]);
        } else {
            stack.pop_back();
            out.push_back(')');
        }
    }
    return out;
}

inline PlaneTree tree_from_parens(const std::string& s) {
    PlaneTree tree;
    std::vector<std::size_t> stack;
    for (const char c : s) {
        if (c == '(') {
            if (!stack.empty()) ++tree.child_counts[stack.back()];
            else if (!tree.child_counts.empty())
                throw InputError("parens: multiple roots");
            tree.child_counts.push_back(0);
            stack.push_back(tree.child_counts.size() - 1);
        } else if (c == ')') {
            if (stack.empty()) throw InputError("parens: unbalanced");
            stack.pop_back();
        } else if (c != ' ' && c != '\t') {
            throw InputError("parens: unexpected character");
        }
    }
    if (!stack.empty() || tree.child_counts.empty()) throw InputError("parens: unbalanced");
    return tree;
}

// ---------------------------------------------------------------------------
// FiniteMeasure JSON: {S, drift:[{from,to,rate}], atoms:[{at,mass}]}

inline nlohmann::ordered_json measure_to_json(const FiniteMeasure& mu) {
    nlohmann::ordered_json j;
    j["S"] = mu.sup_support();
    nlohmann::ordered_json drift = nlohmann::ordered_json::array();
    for (const auto& d : mu.drift())
        drift.push_back({{"from", d.from}, {"to", d.to}, {"rate", d.rate}});
    j["drift"] = drift;
    nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
    for (const auto& a : mu.atoms()) atoms.push_back({{"at", a.pos}, {"mass", a.mass}});
    j["atoms"] = atoms;
    return j;
}

inline FiniteMeasure measure_from_json(const nlohmann::json& j) {
    std::vector<FiniteMeasure::Drift> drift;
    for (const auto& d : j.at("drift"))
        drift.push_back({d.at("from").get<double>(), d.at("to").get<double>(),
                         d.at("rate").get<double>()});
    std::vector<FiniteMeasure::Atom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({a.at("at").get<double>(), a.at("mass").get<double>()});
    FiniteMeasure mu(std::move(drift), std::move(atoms));
    if (j.contains("S")) {
        const double S = j.at("S").get<double>();
        if (std::abs(S - mu.sup_support()) > 1e-9)
            throw InputError("measure JSON: S does not match the drift coverage");
    }
    return mu;
}

// ---------------------------------------------------------------------------
// SpannedTree JSON: {vertices:[{id,label|null}], edges:[{parent,child,length}]}

inline nlohmann::ordered_json spanned_tree_to_json(const SpannedTree& tree) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json vertices = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
        nlohmann::ordered_json e;
        e["id"] = v;
        if (tree.vertices[v].label >= 0)
            e["label"] = tree.vertices[v].label;
        else
            e["label"] = nullptr;
        vertices.push_back(e);
    }
    j["vertices"] = vertices;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (std::size_t v = 1; v < tree.vertices.size(); ++v) {
        nlohmann::ordered_json e;
        e["parent"] = tree.vertices[v].parent;
        e["child"] = v;
        e["length"] = tree.vertices[v].edge_length;
        edges.push_back(e);
    }
    j["edges"] = edges;
    return j;
}

// ---------------------------------------------------------------------------
// Report persistence: append-only JSON lines.

inline void append_report(const TestReport& rep, const std::string& file) {
    std::ofstream out(file, std::ios::app);
    if (!out) throw InputError("cannot open report file: " + file);
    out << rep.to_jsonl() << '\n';
}

inline std::vector<TestReport> read_reports(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open report file: " + file);
    std::vector<TestReport> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(report_from_json(nlohmann::json::parse(line)));
    }
    return out;
}

}  // namespace levytree

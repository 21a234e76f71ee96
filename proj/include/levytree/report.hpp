#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levytree/errors.hpp"

namespace levytree {

inline constexpr int kReportVersion = 1;

// Monte Carlo suite configuration. `grid` is the excursion grid size for
// path-space samplers and the edge count for tree-based samplers. `workers`
// is a hint only: reports are byte-identical for any value.
struct McConfig {
    std::uint64_t seed = 7;
    std::size_t replicas = 1000;  // per side
    std::size_t grid = 1024;
    double alpha = 0.001;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const {
        if (replicas < 100) throw DomainError("McConfig: replicas must be >= 100");
        if (!(alpha > 0.0 && alpha <= 0.05)) throw DomainError("McConfig: alpha must be in (0, 0.05]");
    }
};

// One statistic row of a report; p is absent for exact or tolerance checks.
struct StatEntry {
    std::string functional;
    double statistic = 0.0;
    std::optional<double> p;
};

// Outcome of one verification suite. Exact-mode reports carry no p-values and
// no randomness; statistical reports are reproducible bit-exactly from
// (seed, params).
struct TestReport {
    std::string suite;
    std::string mode;  // "exact" | "statistical"
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    std::vector<StatEntry> stats;
    bool pass = false;
    std::int64_t runtime_ms = 0;
    int version = kReportVersion;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["mode"] = mode;
        j["params"] = params;
        j["seed"] = seed;
        nlohmann::ordered_json st = nlohmann::ordered_json::array();
        for (const auto& s : stats) {
            nlohmann::ordered_json e;
            e["functional"] = s.functional;
            e["statistic"] = s.statistic;
            if (s.p.has_value())
                e["p"] = *s.p;
            else
                e["p"] = nullptr;
            st.push_back(e);
        }
        j["stats"] = st;
        j["pass"] = pass;
        j["runtime_ms"] = runtime_ms;
        j["version"] = version;
        return j;
    }

    std::string to_jsonl() const { return to_json().dump(); }

    // Report bytes with the timing field zeroed; what the reproducibility
    // check compares (runtime is the one legitimately nondeterministic field).
    std::string canonical_bytes() const {
        nlohmann::ordered_json j = to_json();
        j["runtime_ms"] = 0;
        return j.dump();
    }

    double min_p() const {
        double m = 1.0;
        bool any = false;
        for (const auto& s : stats)
            if (s.p.has_value()) {
                m = std::min(m, *s.p);
                any = true;
            }
        return any ? m : 1.0;
    }
};

inline TestReport report_from_json(const nlohmann::json& j) {
    TestReport r;
    r.suite = j.at("suite").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.params = j.at("params");
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("stats")) {
        StatEntry s;
        s.functional = e.at("functional").get<std::string>();
        s.statistic = e.at("statistic").get<double>();
        if (!e.at("p").is_null()) s.p = e.at("p").get<double>();
        r.stats.push_back(std::move(s));
    }
    r.pass = j.at("pass").get<bool>();
    r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
    r.version = j.at("version").get<int>();
    return r;
}

}  // namespace levytree

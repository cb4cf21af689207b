#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsy/errors.hpp"
#include "dsy/stats.hpp"
#include "dsy/version.hpp"

namespace dsy::experiment {

using json = nlohmann::ordered_json;

/// An observed statistic checked against a bound. `observed <= bound + slack`
/// for upper bounds; for two-sided checks `|observed - bound| <= slack`.
struct comparison {
    std::string name;
    double bound = 0.0;
    double observed = 0.0;
    double slack = 0.0;
    bool two_sided = false;
    bool satisfied = false;

    static comparison at_most(std::string name, double observed, double bound, double slack = 0.0) {
        return {std::move(name), bound, observed, slack, false, observed <= bound + slack};
    }
    static comparison near(std::string name, double observed, double target, double slack) {
        return {std::move(name), target, observed, slack, true, std::abs(observed - target) <= slack};
    }
    static comparison holds(std::string name, bool ok) {
        return {std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0, true, ok};
    }
};

inline json to_json(const comparison& c) {
    return json{{"name", c.name},
                {"bound", c.bound},
                {"observed", c.observed},
                {"slack", c.slack},
                {"relation", c.two_sided ? "within" : "at_most"},
                {"satisfied", c.satisfied}};
}

inline json summary_json(const stats::summary& s) {
    return json{{"n", s.count},
                {"mean", s.mean},
                {"se", s.se},
                {"ci_lo", s.mean - 3.0 * s.se},
                {"ci_hi", s.mean + 3.0 * s.se}};
}

inline json proportion_json(std::size_t successes, std::size_t trials) {
    const auto w = stats::wilson(successes, trials, 3.0);
    return json{{"n", trials},
                {"successes", successes},
                {"mean", static_cast<double>(successes) / static_cast<double>(trials)},
                {"se", w.se},
                {"ci_lo", w.lo},
                {"ci_hi", w.hi}};
}

struct result_record {
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    std::string model;
    std::string probe;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    json aggregates = json::object();
    std::vector<comparison> comparisons;
    json notes = json::array();
    double wall_time_seconds = 0.0;

    bool all_satisfied() const {
        for (const auto& c : comparisons)
            if (!c.satisfied) return false;
        return true;
    }

    /// The deterministic part of the record: identical for identical configs.
    json data(bool include_rows = true) const {
        json per = json{{"columns", columns}};
        if (include_rows) {
            json r = json::array();
            for (const auto& row : rows) r.push_back(row);
            per["rows"] = std::move(r);
        } else {
            per["rows"] = json::array();
        }
        per["count"] = rows.size();
        json cmp = json::array();
        for (const auto& c : comparisons) cmp.push_back(experiment::to_json(c));
        return json{{"model", model},
                    {"probe", probe},
                    {"per_replica", std::move(per)},
                    {"aggregates", aggregates},
                    {"comparisons", std::move(cmp)},
                    {"all_satisfied", all_satisfied()},
                    {"notes", notes}};
    }

    json to_json(bool include_rows = true) const {
        json cfg = json::object();
        for (const auto& [k, v] : config) cfg[k] = v;
        return json{{"schema_version", result_schema_version},
                    {"library_version", library_version},
                    {"seed", seed},
                    {"config", std::move(cfg)},
                    {"data", data(include_rows)},
                    {"wall_time_seconds", wall_time_seconds}};
    }
};

/// Shortest round-trip decimal form; stable across runs and platforms.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline std::string to_csv(const result_record& rec) {
    std::string s = "# dsy " + std::string(library_version) + " seed=" + std::to_string(rec.seed) +
                    " model=" + rec.model + " probe=" + rec.probe + "\n";
    for (std::size_t i = 0; i < rec.columns.size(); ++i) s += (i ? "," : "") + rec.columns[i];
    s += "\n";
    for (const auto& row : rec.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_number(row[i]);
        s += "\n";
    }
    return s;
}

}  // namespace dsy::experiment

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsy/cascade.hpp"
#include "dsy/errors.hpp"
#include "dsy/models/catalog.hpp"

namespace dsy::experiment {

/// Parse or validation failure, carrying the offending line (0 when the
/// problem is a missing field) and field name.
class config_error : public precondition_error {
public:
    config_error(int line, std::string field, const std::string& message)
        : precondition_error(format(line, field, message)), line_(line), field_(std::move(field)) {}

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(int line, const std::string& field, const std::string& message) {
        std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string{};
        if (!field.empty()) out += "field '" + field + "': ";
        return out + message;
    }
    int line_;
    std::string field_;
};

enum class probe_kind { horizon, zeta_n, greedy, inspection, cutsets, constants, densities };

inline const char* to_string(probe_kind p) {
    switch (p) {
        case probe_kind::horizon: return "horizon";
        case probe_kind::zeta_n: return "zeta_n";
        case probe_kind::greedy: return "greedy";
        case probe_kind::inspection: return "inspection";
        case probe_kind::cutsets: return "cutsets";
        case probe_kind::constants: return "constants";
        case probe_kind::densities: return "densities";
    }
    return "unknown";
}

enum class output_format { csv, json };

struct experiment_config {
    std::string model;
    models::parameter_map model_parameters;
    probe_kind probe = probe_kind::horizon;
    std::optional<double> initial_state;
    std::size_t replicas = 1000;
    std::uint64_t seed = 1;
    double t = 1.0;
    int n = 20;
    int k = 1;
    std::optional<double> threshold;
    std::size_t vertex_cap = default_vertex_cap;
    int gen_cap = 50;
    int term_cap = 10000;
    double tail_tol = 1e-6;
    std::optional<double> psi_bound;
    std::optional<double> r;
    output_format format = output_format::json;
    std::string output = "result.json";
    std::optional<unsigned> threads;
    /// Every key = value pair as written, for the record's config echo.
    std::map<std::string, std::string> echo;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct field_reader {
    int line;
    std::string key;
    std::string value;

    double real() const {
        double v = 0.0;
        const auto* end = value.data() + value.size();
        const auto [ptr, ec] = std::from_chars(value.data(), end, v);
        if (ec != std::errc{} || ptr != end || !std::isfinite(v))
            throw config_error(line, key, "expected a real number, got '" + value + "'");
        return v;
    }

    long long integer() const {
        long long v = 0;
        const auto* end = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(value.data(), end, v);
        if (ec == std::errc{} && ptr != end) {
            // Accept integral scientific notation such as 1e6.
            const double d = real();
            if (d == std::floor(d) && std::abs(d) < 9e18) return static_cast<long long>(d);
        }
        if (ec != std::errc{} || ptr != end) throw config_error(line, key, "expected an integer, got '" + value + "'");
        return v;
    }

    std::uint64_t unsigned_integer() const {
        std::uint64_t v = 0;
        const auto* end = value.data() + value.size();
        const auto [ptr, ec] = std::from_chars(value.data(), end, v);
        if (ec != std::errc{} || ptr != end)
            throw config_error(line, key, "expected a nonnegative integer, got '" + value + "'");
        return v;
    }
};

}  // namespace detail

inline probe_kind parse_probe(const std::string& s, int line) {
    for (auto p : {probe_kind::horizon, probe_kind::zeta_n, probe_kind::greedy, probe_kind::inspection,
                   probe_kind::cutsets, probe_kind::constants, probe_kind::densities})
        if (s == to_string(p)) return p;
    throw config_error(line, "probe",
                       "unknown probe '" + s + "' (horizon, zeta_n, greedy, inspection, cutsets, constants, densities)");
}

/// Parses a flat `key = value` file. '#' starts a comment; model parameters
/// are written `model.<name> = value`. Values are checked against the probe
/// preconditions before anything is sampled.
inline experiment_config parse_config(std::istream& in) {
    experiment_config cfg;
    std::set<std::string> seen;
    std::map<std::string, int> lines;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = detail::trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw config_error(line, "", "expected 'key = value', got '" + text + "'");
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) throw config_error(line, "", "missing key before '='");
        if (value.empty()) throw config_error(line, key, "missing value");
        if (!seen.insert(key).second) throw config_error(line, key, "duplicate key");
        lines[key] = line;
        cfg.echo[key] = value;
        const detail::field_reader f{line, key, value};

        if (key.starts_with("model.")) {
            const auto name = key.substr(6);
            if (name.empty()) throw config_error(line, key, "empty model parameter name");
            cfg.model_parameters[name] = value;
        } else if (key == "model") {
            cfg.model = value;
        } else if (key == "probe") {
            cfg.probe = parse_probe(value, line);
        } else if (key == "initial_state") {
            cfg.initial_state = f.real();
        } else if (key == "replicas") {
            const auto v = f.integer();
            if (v < 1) throw config_error(line, key, "replicas must be at least 1");
            cfg.replicas = static_cast<std::size_t>(v);
        } else if (key == "seed") {
            cfg.seed = f.unsigned_integer();
        } else if (key == "t") {
            cfg.t = f.real();
            if (!(cfg.t > 0.0)) throw config_error(line, key, "t must be positive");
        } else if (key == "n") {
            const auto v = f.integer();
            if (v < 0 || v > max_zeta_depth)
                throw config_error(line, key, "n must lie in [0, " + std::to_string(max_zeta_depth) + "]");
            cfg.n = static_cast<int>(v);
        } else if (key == "k") {
            const auto v = f.integer();
            if (v < 1 || v > 64) throw config_error(line, key, "k must lie in [1, 64]");
            cfg.k = static_cast<int>(v);
        } else if (key == "threshold") {
            cfg.threshold = f.real();
        } else if (key == "vertex_cap") {
            const auto v = f.integer();
            if (v < 1) throw config_error(line, key, "vertex_cap must be at least 1");
            cfg.vertex_cap = static_cast<std::size_t>(v);
        } else if (key == "gen_cap") {
            const auto v = f.integer();
            if (v < 1 || v > 1000) throw config_error(line, key, "gen_cap must lie in [1, 1000]");
            cfg.gen_cap = static_cast<int>(v);
        } else if (key == "term_cap") {
            const auto v = f.integer();
            if (v < 1 || v > 1'000'000) throw config_error(line, key, "term_cap must lie in [1, 1000000]");
            cfg.term_cap = static_cast<int>(v);
        } else if (key == "tail_tol") {
            cfg.tail_tol = f.real();
            if (!(cfg.tail_tol > 0.0)) throw config_error(line, key, "tail_tol must be positive");
        } else if (key == "psi_bound") {
            cfg.psi_bound = f.real();
            if (!(*cfg.psi_bound > 0.0)) throw config_error(line, key, "psi_bound must be positive");
        } else if (key == "r") {
            cfg.r = f.real();
            if (!(*cfg.r > 2.0)) throw config_error(line, key, "r must exceed 2");
        } else if (key == "format") {
            if (value == "csv") cfg.format = output_format::csv;
            else if (value == "json") cfg.format = output_format::json;
            else throw config_error(line, key, "format must be csv or json");
        } else if (key == "output") {
            cfg.output = value;
        } else if (key == "threads") {
            const auto v = f.integer();
            if (v < 1 || v > 1024) throw config_error(line, key, "threads must lie in [1, 1024]");
            cfg.threads = static_cast<unsigned>(v);
        } else {
            throw config_error(line, key, "unknown key");
        }
    }
    if (cfg.model.empty()) throw config_error(0, "model", "required field is missing");
    if (!seen.contains("probe")) throw config_error(0, "probe", "required field is missing");
    // Build the model once so parameter errors surface with the config context.
    try {
        (void)models::make_model(cfg.model, cfg.model_parameters);
    } catch (const precondition_error& e) {
        const int l = lines.contains("model") ? lines["model"] : 0;
        throw config_error(l, "model", e.what());
    }
    return cfg;
}

inline experiment_config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error(0, "", "cannot open config file '" + path + "'");
    return parse_config(in);
}

inline experiment_config parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

}  // namespace dsy::experiment

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "dsy/dsy.hpp"

namespace {

namespace fs = std::filesystem;
namespace ex = dsy::experiment;

constexpr int exit_ok = 0;
constexpr int exit_statistical = 1;
constexpr int exit_error = 2;

int command_run(const std::string& path, std::optional<unsigned> threads) {
    auto cfg = ex::parse_config_file(path);
    if (threads) cfg.threads = *threads;
    const auto rec = ex::run_experiment(cfg);
    const auto written = ex::write_outputs(rec, cfg);
    std::size_t ok = 0;
    for (const auto& c : rec.comparisons) ok += c.satisfied;
    std::cout << rec.model << "/" << rec.probe << ": " << rec.rows.size() << " rows, " << ok << "/"
              << rec.comparisons.size() << " bounds satisfied, " << ex::format_number(rec.wall_time_seconds)
              << " s ->";
    for (const auto& p : written) std::cout << " " << p.string();
    std::cout << "\n";
    for (const auto& c : rec.comparisons)
        if (!c.satisfied)
            std::cout << "  violated: " << c.name << " (observed " << ex::format_number(c.observed) << ", bound "
                      << ex::format_number(c.bound) << ", slack " << ex::format_number(c.slack) << ")\n";
    return rec.all_satisfied() ? exit_ok : exit_statistical;
}

int command_reproduce(const std::string& out, double scale, std::uint64_t seed, std::optional<unsigned> threads,
                      std::vector<int> ids) {
    ex::acceptance_options opt;
    opt.replicas_scale = scale;
    opt.seed = seed;
    if (threads) opt.threads = *threads;
    if (ids.empty())
        for (std::size_t i = 1; i <= ex::criteria().size(); ++i) ids.push_back(static_cast<int>(i));
    fs::create_directories(out);
    ex::json summary = ex::json::array();
    std::vector<std::string> failed;
    for (int id : ids) {
        const auto r = ex::run_criteria(opt, {id}).front();
        char name[32];
        std::snprintf(name, sizeof name, "criterion_%02d.json", id);
        ex::write_text(fs::path(out) / name, r.to_json(opt).dump(2) + "\n");
        std::cout << ex::summary_line(r) << std::endl;
        summary.push_back(ex::json{{"criterion", id},
                                   {"title", r.title},
                                   {"passed", r.passed()},
                                   {"checks", r.checks.size()},
                                   {"failures", r.failures()},
                                   {"file", name}});
        if (!r.passed()) failed.push_back("C" + std::to_string(id));
    }
    ex::write_text(fs::path(out) / "summary.json",
                   ex::json{{"schema_version", dsy::result_schema_version},
                            {"library_version", dsy::library_version},
                            {"seed", seed},
                            {"replicas_scale", scale},
                            {"criteria", std::move(summary)}}
                           .dump(2) +
                       "\n");
    std::cout << (ids.size() - failed.size()) << "/" << ids.size() << " criteria passed";
    if (!failed.empty()) {
        std::cout << "; failed:";
        for (const auto& f : failed) std::cout << " " << f;
    }
    std::cout << "\n";
    return failed.empty() ? exit_ok : exit_statistical;
}

int command_list_models() {
    for (const auto& name : dsy::models::model_names()) {
        const auto m = dsy::models::make_model(name);
        std::cout << name << "\n  defaults:";
        for (const auto& [k, v] : m.parameters) std::cout << " " << k << "=" << v;
        std::cout << " initial_state=" << ex::format_number(m.default_initial_state)
                  << "\n  space: " << dsy::to_string(m.kernel.space())
                  << "\n  expected: " << dsy::models::to_string(m.expected) << "\n";
        for (const auto& r : m.known_regimes)
            std::cout << "  regime: " << r.region << " -> " << dsy::models::to_string(r.expected) << "\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explosion diagnostics for stochastic branching cascades"};
    app.set_version_flag("--version", std::string(dsy::library_version));
    app.require_subcommand(1);

    std::optional<unsigned> threads;
    app.add_option("--threads", threads, "worker threads (default: DSY_THREADS or hardware concurrency)")
        ->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "run one experiment config");
    std::string config_path;
    run->add_option("config", config_path, "key=value experiment file")->required();

    auto* reproduce = app.add_subcommand("reproduce-tables", "run every acceptance criterion and write records");
    std::string out = "tables";
    double scale = 1.0;
    std::uint64_t seed = 1;
    std::vector<int> only;
    reproduce->add_option("--out", out, "output directory");
    reproduce->add_option("--replicas-scale", scale, "multiply every replica count")->check(CLI::PositiveNumber);
    reproduce->add_option("--seed", seed, "master seed");
    reproduce->add_option("--criteria", only, "subset of criterion ids")->delimiter(',')->check(CLI::Range(1, 12));

    app.add_subcommand("list-models", "list catalog models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        if (*run) return command_run(config_path, threads);
        if (*reproduce) return command_reproduce(out, scale, seed, threads, only);
        return command_list_models();
    } catch (const ex::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return exit_error;
}

#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "dsy/cascade.hpp"
#include "dsy/cutsets.hpp"
#include "dsy/experiment/config.hpp"
#include "dsy/experiment/record.hpp"
#include "dsy/kernel_checks.hpp"
#include "dsy/models/catalog.hpp"
#include "dsy/numerics/densities.hpp"
#include "dsy/parallel.hpp"
#include "dsy/stats.hpp"

namespace dsy::experiment {

namespace detail {

inline std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

inline void run_horizon(const experiment_config& cfg, const models::catalog_entry& m, double a, unsigned threads,
                        result_record& rec) {
    rec.columns = {"replica", "population", "vertex_cap_hit", "last_event_time", "vertices_born"};
    rec.rows = map_replicas(
        cfg.replicas,
        [&](std::size_t i) {
            const auto tr = simulate_to_horizon(m.kernel, a, cfg.t, cfg.vertex_cap, rng::replica_seed(cfg.seed, i), false);
            return std::vector<double>{static_cast<double>(i), static_cast<double>(tr.population),
                                       tr.vertex_cap_hit ? 1.0 : 0.0, tr.last_event_time,
                                       static_cast<double>(tr.vertices_born)};
        },
        threads);
    std::size_t hits = 0;
    for (const auto& r : rec.rows) hits += r[2] > 0.0;
    rec.aggregates["population"] = summary_json(stats::summarize(column(rec.rows, 1)));
    rec.aggregates["explosion_likely_fraction"] = proportion_json(hits, cfg.replicas);
    rec.notes.push_back(
        "explosion-likely means the live population reached vertex_cap before t; this is a heuristic verdict");
    // Constant intensity lambda: N(t) is a rate-lambda binary Yule process with mean e^{lambda t}.
    if (m.name == "standard_yule" || (m.name == "alpha_riccati" && m.parameters.at("alpha") == "1")) {
        const auto s = stats::summarize(column(rec.rows, 1));
        if (hits == 0)
            rec.comparisons.push_back(comparison::near("mean population vs e^(lambda t)", s.mean, std::exp(a * cfg.t),
                                                       3.0 * s.se));
    }
}

inline void run_zeta(const experiment_config& cfg, const models::catalog_entry& m, double a, unsigned threads,
                     result_record& rec) {
    rec.columns = {"replica"};
    for (int j = 0; j <= cfg.n; ++j) rec.columns.push_back("zeta_" + std::to_string(j));
    rec.rows = map_replicas(
        cfg.replicas,
        [&](std::size_t i) {
            const auto z = zeta_profile(m.kernel, a, cfg.n, rng::replica_seed(cfg.seed, i));
            std::vector<double> row{static_cast<double>(i)};
            row.insert(row.end(), z.begin(), z.end());
            return row;
        },
        threads);
    std::size_t violations = 0;
    for (const auto& r : rec.rows)
        for (std::size_t j = 2; j < r.size(); ++j) violations += r[j] < r[j - 1];
    const auto last = column(rec.rows, rec.columns.size() - 1);
    rec.aggregates["zeta_n"] = summary_json(stats::summarize(last));
    rec.aggregates["zeta_n_median"] = stats::median(last);
    rec.comparisons.push_back(
        comparison::at_most("monotonicity violations of n -> zeta_n", static_cast<double>(violations), 0.0));
}

inline void run_greedy(const experiment_config& cfg, const models::catalog_entry& m, double a, unsigned threads,
                       result_record& rec) {
    rec.columns = {"replica", "partial_sum", "terms_used", "converged", "kappa_hat"};
    rec.rows = map_replicas(
        cfg.replicas,
        [&](std::size_t i) {
            const auto g = greedy_zeta(m.kernel, a, cfg.term_cap, cfg.tail_tol, rng::replica_seed(cfg.seed, i));
            return std::vector<double>{static_cast<double>(i), g.partial_sum, static_cast<double>(g.terms_used),
                                       g.converged ? 1.0 : 0.0, g.kappa_hat};
        },
        threads);
    const auto s = stats::summarize(column(rec.rows, 1));
    std::size_t conv = 0;
    for (const auto& r : rec.rows) conv += r[3] > 0.0;
    rec.aggregates["greedy_zeta"] = summary_json(s);
    rec.aggregates["converged_fraction"] = proportion_json(conv, cfg.replicas);
    rec.aggregates["kappa_hat"] = summary_json(stats::summarize(column(rec.rows, 4)));
    if (m.greedy) {
        const double bound = m.greedy->bound(m.kernel.intensity(a));
        rec.aggregates["kappa"] = m.greedy->kappa;
        rec.comparisons.push_back(comparison::at_most("mean greedy zeta <= 1/(lambda(a)(1-kappa))", s.mean, bound,
                                                      3.0 * s.se));
    }
}

inline models::state_law mean_field_law(const models::parameter_map& p) {
    using models::detail::number;
    const auto law = models::detail::text(p, "law", "exponential");
    if (law == "uniform") return models::state_law::uniform(number(p, "lo", 0.0), number(p, "hi", 1.0));
    if (law == "degenerate") return models::state_law::degenerate(number(p, "value", 1.0));
    return models::state_law::exponential(number(p, "rate", 1.0));
}

inline double threshold_for(const experiment_config& cfg, const models::catalog_entry& m) {
    if (cfg.threshold) return *cfg.threshold;
    if (m.recurrence) return m.recurrence->threshold;
    throw config_error(0, "threshold", "required for this model (A = {x <= threshold})");
}

inline void run_inspection_probe(const experiment_config& cfg, const models::catalog_entry& m, double a,
                                 unsigned threads, result_record& rec) {
    const double c = threshold_for(cfg, m);
    const auto A = state_set::at_most(c);
    rec.columns = {"replica", "stopped", "stop_generation", "truncated"};
    for (int g = 0; g <= cfg.gen_cap; ++g) rec.columns.push_back("Z_" + std::to_string(g));
    rec.rows = map_replicas(
        cfg.replicas,
        [&](std::size_t i) {
            const auto tr = run_inspection(m.kernel, a, A, cfg.gen_cap, rng::replica_seed(cfg.seed, i), cfg.vertex_cap);
            std::vector<double> row{static_cast<double>(i), tr.stopped ? 1.0 : 0.0,
                                    tr.stop_generation ? static_cast<double>(*tr.stop_generation) : -1.0,
                                    tr.truncated ? 1.0 : 0.0};
            for (int g = 0; g <= cfg.gen_cap; ++g)
                row.push_back(static_cast<std::size_t>(g) < tr.generations.size()
                                  ? static_cast<double>(tr.generations[static_cast<std::size_t>(g)])
                                  : 0.0);
            return row;
        },
        threads);
    std::size_t stopped = 0;
    for (const auto& r : rec.rows) stopped += r[1] > 0.0;
    rec.aggregates["stopped_fraction"] = proportion_json(stopped, cfg.replicas);
    json means = json::array();
    for (int g = 0; g <= cfg.gen_cap; ++g) means.push_back(summary_json(stats::summarize(column(rec.rows, 4 + g))));
    rec.aggregates["Z_n"] = std::move(means);
    rec.aggregates["A"] = A.description();
    if (m.name == "mean_field") {
        // Independent states: E Z_n = (2 q)^n with q = P(X > c).
        const double q = mean_field_law(cfg.model_parameters).tail(c);
        for (int g = 1; g <= std::min(cfg.gen_cap, 10); ++g) {
            const auto s = stats::summarize(column(rec.rows, 4 + g));
            rec.comparisons.push_back(comparison::near("E Z_" + std::to_string(g) + " = (2q)^" + std::to_string(g),
                                                       s.mean, std::pow(2.0 * q, g), 3.0 * s.se));
        }
    }
}

inline void run_cutsets_probe(const experiment_config& cfg, const models::catalog_entry& m, double a,
                              unsigned threads, result_record& rec) {
    const double c = threshold_for(cfg, m);
    const auto A = state_set::at_most(c);
    rec.columns = {"replica", "incomplete", "vertices_explored"};
    for (int j = 1; j <= cfg.k; ++j) rec.columns.push_back("card_" + std::to_string(j));
    for (int j = 1; j <= cfg.k; ++j) rec.columns.push_back("H_" + std::to_string(j));
    rec.rows = map_replicas(
        cfg.replicas,
        [&](std::size_t i) {
            const auto res = passage_cutsets(m.kernel, a, A, cfg.k, cfg.vertex_cap, rng::replica_seed(cfg.seed, i));
            std::vector<double> row{static_cast<double>(i), res.incomplete ? 1.0 : 0.0,
                                    static_cast<double>(res.vertices_explored)};
            for (int j = 0; j < cfg.k; ++j)
                row.push_back(static_cast<std::size_t>(j) < res.cutsets.size()
                                  ? static_cast<double>(res.cutsets[static_cast<std::size_t>(j)].cardinality())
                                  : -1.0);
            for (int j = 0; j < cfg.k; ++j)
                row.push_back(static_cast<std::size_t>(j) < res.cutsets.size()
                                  ? static_cast<double>(res.cutsets[static_cast<std::size_t>(j)].max_depth)
                                  : -1.0);
            return row;
        },
        threads);
    std::size_t incomplete = 0;
    std::vector<std::vector<double>> complete;
    for (const auto& r : rec.rows) {
        if (r[1] > 0.0) ++incomplete;
        else complete.push_back(r);
    }
    rec.aggregates["incomplete_fraction"] = proportion_json(incomplete, cfg.replicas);
    rec.aggregates["A"] = A.description();
    if (complete.size() < 2) return;
    json cards = json::array();
    for (int j = 1; j <= cfg.k; ++j) cards.push_back(summary_json(stats::summarize(column(complete, 2 + j))));
    rec.aggregates["cardinality"] = std::move(cards);
    const std::optional<double> psi = cfg.psi_bound ? cfg.psi_bound
                                      : (m.recurrence && m.recurrence->psi_bound) ? m.recurrence->psi_bound
                                                                                  : std::nullopt;
    const std::optional<double> r = cfg.r ? cfg.r : m.recurrence ? std::optional<double>(m.recurrence->r) : std::nullopt;
    if (psi && r && *r > 2.0) {
        const double mu = 2.0 + *psi * 2.0 * *r / (*r - 2.0);
        rec.aggregates["mu"] = mu;
        for (int j = 1; j <= cfg.k; ++j) {
            const auto s = stats::summarize(column(complete, 2 + j));
            rec.comparisons.push_back(comparison::at_most("E card Pi^(" + std::to_string(j) + ") <= mu^" +
                                                              std::to_string(j),
                                                          s.mean, std::pow(mu, j), 3.0 * s.se));
        }
    }
}

inline void run_constants(const experiment_config& cfg, const models::catalog_entry& m, result_record& rec) {
    if (m.name != "nse_selfsimilar")
        throw config_error(0, "probe", "the constants probe applies to model nse_selfsimilar");
    const int d = std::stoi(m.parameters.at("d"));
    (void)cfg;
    const double closed = numerics::alpha_d(d, numerics::alpha_method::closed_form);
    const double quad = numerics::alpha_d(d, numerics::alpha_method::quadrature);
    const double kappa = numerics::kappa_d(d);
    rec.aggregates["d"] = d;
    rec.aggregates["alpha_closed_form"] = closed;
    rec.aggregates["alpha_quadrature"] = quad;
    rec.aggregates["c_d"] = numerics::nse_c(d);
    rec.aggregates["kappa_d"] = kappa;
    rec.comparisons.push_back(comparison::near("alpha_d closed form vs quadrature", quad, closed, 1e-6));
    if (d >= 12) rec.comparisons.push_back(comparison::at_most("alpha_d < 1/2", closed, 0.5));
    if (d == 3) rec.comparisons.push_back(comparison::at_most("kappa_3 < 1", kappa, 1.0));
}

inline void run_densities(const experiment_config& cfg, const models::catalog_entry& m, double a,
                          result_record& rec) {
    if (!m.kernel.has_density())
        throw config_error(0, "model", "model '" + m.name + "' publishes no path-marginal density");
    const auto mass = density_mass(m.kernel, a, 1e-10);
    rec.aggregates["density_mass"] = mass.value;
    rec.aggregates["density_mass_error"] = mass.abs_error_estimate;
    rec.comparisons.push_back(comparison::near("integral of p(a, y) dy", mass.value, 1.0, 1e-6));
    auto sample = sample_marginal(m.kernel, a, cfg.replicas, cfg.seed, 1);
    rec.columns = {"replica", "first_child_state"};
    for (std::size_t i = 0; i < sample.size(); ++i) rec.rows.push_back({static_cast<double>(i), sample[i]});
    const auto ks = density_ks_test(m.kernel, a, sample);
    rec.aggregates["ks_statistic"] = ks.statistic;
    rec.aggregates["ks_p_value"] = ks.p_value;
    rec.comparisons.push_back(comparison::at_most("KS p-value >= 0.01", -ks.p_value, -0.01));
}

}  // namespace detail

/// Runs one experiment. Module errors propagate with the experiment context
/// prepended.
inline result_record run_experiment(const experiment_config& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const auto m = models::make_model(cfg.model, cfg.model_parameters);
    const double a = cfg.initial_state.value_or(m.default_initial_state);
    const unsigned threads = cfg.threads.value_or(default_thread_count());
    result_record rec;
    rec.config = cfg.echo;
    rec.seed = cfg.seed;
    rec.model = m.name;
    rec.probe = to_string(cfg.probe);
    rec.aggregates["initial_state"] = a;
    rec.aggregates["expected_regime"] = models::to_string(m.expected);
    try {
        switch (cfg.probe) {
            case probe_kind::horizon: detail::run_horizon(cfg, m, a, threads, rec); break;
            case probe_kind::zeta_n: detail::run_zeta(cfg, m, a, threads, rec); break;
            case probe_kind::greedy: detail::run_greedy(cfg, m, a, threads, rec); break;
            case probe_kind::inspection: detail::run_inspection_probe(cfg, m, a, threads, rec); break;
            case probe_kind::cutsets: detail::run_cutsets_probe(cfg, m, a, threads, rec); break;
            case probe_kind::constants: detail::run_constants(cfg, m, rec); break;
            case probe_kind::densities: detail::run_densities(cfg, m, a, rec); break;
        }
    } catch (const config_error&) {
        throw;
    } catch (const sampling_failure& e) {
        throw sampling_failure("experiment " + rec.model + "/" + rec.probe + ": " + e.reason(), e.address());
    } catch (const precondition_error& e) {
        throw precondition_error("experiment " + rec.model + "/" + rec.probe + ": " + e.what());
    } catch (const convergence_error& e) {
        throw convergence_error("experiment " + rec.model + "/" + rec.probe + ": " + e.what());
    }
    rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

/// Writes the record. JSON format: one file with everything. CSV format:
/// per-replica rows at `output` plus the aggregates record next to it with a
/// .json extension. Returns the paths written.
inline std::vector<std::filesystem::path> write_outputs(const result_record& rec, const experiment_config& cfg) {
    std::filesystem::path out(cfg.output);
    if (cfg.format == output_format::json) {
        write_text(out, rec.to_json(true).dump(2) + "\n");
        return {out};
    }
    std::filesystem::path agg = out;
    agg.replace_extension(".json");
    if (agg == out) agg += ".json";
    write_text(out, to_csv(rec));
    auto j = rec.to_json(false);
    j["data"]["per_replica"]["file"] = out.filename().string();
    write_text(agg, j.dump(2) + "\n");
    return {out, agg};
}

}  // namespace dsy::experiment

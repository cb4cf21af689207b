#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dsy/cascade.hpp"
#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/numerics/quadrature.hpp"
#include "dsy/parallel.hpp"
#include "dsy/rng.hpp"
#include "dsy/stats.hpp"

namespace dsy {

/// How a single path s is followed when estimating I_n.
enum class path_mode {
    /// Path-marginal sampler p(x, dy) only.
    marginal,
    /// Joint child sampler, always the first child (s = 111...).
    first_child,
    /// Joint child sampler, alternating children (s = 1212...).
    alternating,
};

inline const char* to_string(path_mode m) {
    switch (m) {
        case path_mode::marginal: return "marginal";
        case path_mode::first_child: return "first_child";
        case path_mode::alternating: return "alternating";
    }
    return "unknown";
}

/// First n in 1..n_max with X_{s|n} in A along one path, or n_max + 1.
template <branching_kernel K>
int first_entry(const K& kernel, state_type a, const state_set& A, int n_max, std::uint64_t seed, path_mode mode) {
    std::uint64_t key = rng::root_key;
    state_type x = a;
    for (int n = 1; n <= n_max; ++n) {
        if (mode == path_mode::marginal) {
            rng::stream s(seed, key, rng::purpose::path_step);
            x = kernel.sample_step(x, s);
            key = rng::child_key(key, 1);
        } else {
            const int symbol = mode == path_mode::first_child || n % 2 == 1 ? 1 : 2;
            const auto kids = vertex_children(kernel, seed, key, x);
            x = symbol == 1 ? kids.first : kids.second;
            key = rng::child_key(key, symbol);
        }
        if (A(x)) return n;
    }
    return n_max + 1;
}

struct avoidance_point {
    int n = 0;
    std::size_t avoided = 0;
    std::size_t trials = 0;
    double estimate = 0.0;
    stats::interval ci;
};

/// Monte Carlo estimate of I_n(a, A) = P_a(X_{s|1}, ..., X_{s|n} not in A),
/// n = 1..n_max, with Wilson intervals (z = 3).
template <branching_kernel K>
std::vector<avoidance_point> estimate_avoidance(const K& kernel, state_type a, const state_set& A, int n_max,
                                                std::size_t replicas, std::uint64_t seed,
                                                path_mode mode = path_mode::marginal,
                                                unsigned threads = default_thread_count()) {
    require(n_max >= 1, "avoidance: n_max must be at least 1");
    require(replicas >= 1, "avoidance: need at least one replica");
    const auto entries = map_replicas(
        replicas, [&](std::size_t i) { return first_entry(kernel, a, A, n_max, rng::replica_seed(seed, i), mode); },
        threads);
    std::vector<std::size_t> survive(static_cast<std::size_t>(n_max) + 2, 0);
    for (int e : entries) ++survive[static_cast<std::size_t>(e)];
    // survive[e] counts first entries at e; avoided through n means e > n.
    std::vector<avoidance_point> out;
    std::size_t beyond = replicas;
    for (int n = 1; n <= n_max; ++n) {
        beyond -= survive[static_cast<std::size_t>(n)];
        avoidance_point p;
        p.n = n;
        p.avoided = beyond;
        p.trials = replicas;
        p.estimate = static_cast<double>(beyond) / static_cast<double>(replicas);
        p.ci = stats::wilson(beyond, replicas, 3.0);
        out.push_back(p);
    }
    return out;
}

struct e_condition_row {
    state_type a = 0.0;
    avoidance_point point;
    double bound = 0.0;
    bool satisfied = false;
};

struct e_condition_report {
    /// The condition quantifies over all a; only these states were checked.
    std::vector<state_type> checked_states;
    std::string set_description;
    double r = 0.0;
    path_mode mode = path_mode::marginal;
    std::vector<e_condition_row> rows;
    bool satisfied() const {
        for (const auto& row : rows)
            if (!row.satisfied) return false;
        return !rows.empty();
    }
};

/// Spot-check of I_n(a, A) <= psi(a) r^{-n}: a row is satisfied when the
/// lower Wilson limit does not exceed the bound.
template <branching_kernel K>
e_condition_report verify_E_condition(const K& kernel, const std::vector<state_type>& states, const state_set& A,
                                      const std::function<double(state_type)>& psi, double r, int n_max,
                                      std::size_t replicas, std::uint64_t seed, path_mode mode = path_mode::marginal,
                                      unsigned threads = default_thread_count()) {
    require(r > 2.0, "condition E: r must exceed 2");
    require(!states.empty(), "condition E: need at least one initial state");
    require(static_cast<bool>(psi), "condition E: psi is required");
    e_condition_report rep;
    rep.checked_states = states;
    rep.set_description = A.description();
    rep.r = r;
    rep.mode = mode;
    for (std::size_t si = 0; si < states.size(); ++si) {
        const auto points =
            estimate_avoidance(kernel, states[si], A, n_max, replicas, rng::mix64(seed + si), mode, threads);
        for (const auto& p : points) {
            const double bound = psi(states[si]) * std::pow(r, -p.n);
            rep.rows.push_back({states[si], p, bound, p.ci.lo <= bound});
        }
    }
    return rep;
}

/// Draws n independent children of x (first child, second child or the path
/// step sampler), one stream per draw.
template <branching_kernel K>
std::vector<double> sample_marginal(const K& kernel, state_type x, std::size_t n, std::uint64_t seed, int which = 1) {
    require(which >= 0 && which <= 2, "sample_marginal: which must be 0 (step), 1 or 2");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (which == 0) {
            rng::stream s(seed, i, rng::purpose::path_step);
            out[i] = kernel.sample_step(x, s);
        } else {
            rng::stream s(seed, i, rng::purpose::children);
            const auto kids = kernel.sample_children(x, s);
            out[i] = which == 1 ? kids.first : kids.second;
        }
    }
    return out;
}

/// int p(x, y) dy over the state space.
template <branching_kernel K>
numerics::quadrature_result density_mass(const K& kernel, state_type x, double tol = 1e-10) {
    require(has_density(kernel), "density_mass: kernel publishes no density");
    auto f = [&](double y) { return kernel.density(x, y); };
    const double lo = support_lower(kernel.space());
    return numerics::integrate(f, lo, std::numeric_limits<double>::infinity(), kernel.density_breakpoints(x),
                               numerics::quadrature_options{tol, tol, 8000});
}

/// Kolmogorov-Smirnov test of a sample against the CDF of p(x, .). The CDF
/// at each sorted sample point is accumulated by integrating the density
/// between consecutive points.
template <branching_kernel K>
stats::ks_result density_ks_test(const K& kernel, state_type x, std::vector<double> sample) {
    require(has_density(kernel), "density_ks_test: kernel publishes no density");
    require(!sample.empty(), "density_ks_test: empty sample");
    std::sort(sample.begin(), sample.end());
    auto f = [&](double y) { return kernel.density(x, y); };
    const auto cuts = kernel.density_breakpoints(x);
    const numerics::quadrature_options opt{1e-12, 1e-10, 2000};
    std::vector<double> cdf(sample.size());
    double acc = numerics::integrate(f, support_lower(kernel.space()), sample.front(), cuts, opt).value;
    cdf[0] = acc;
    for (std::size_t i = 1; i < sample.size(); ++i) {
        if (sample[i] > sample[i - 1]) acc += numerics::integrate(f, sample[i - 1], sample[i], cuts, opt).value;
        cdf[i] = acc;
    }
    // Map sample values to their CDF values so ks_test sees a uniform sample.
    std::vector<double> u(cdf.begin(), cdf.end());
    return stats::ks_test(std::move(u), [](double v) { return std::clamp(v, 0.0, 1.0); });
}

/// Lag-1 autocorrelation of log ratios X_{j+1}/X_j along the first-child
/// path of one realization, for self-similar kernels.
template <branching_kernel K>
stats::correlation path_log_ratio_autocorrelation(const K& kernel, state_type a, int steps, std::uint64_t seed) {
    require(steps >= 3, "autocorrelation needs at least three steps");
    std::vector<double> logs;
    std::uint64_t key = rng::root_key;
    state_type x = a;
    for (int j = 0; j < steps; ++j) {
        const auto kids = vertex_children(kernel, seed, key, x);
        logs.push_back(std::log(kids.first / x));
        x = kids.first;
        key = rng::child_key(key, 1);
        // Renormalize so long paths stay in floating range; ratios are scale-free.
        if (std::abs(std::log(x)) > 200.0) x = a;
    }
    return stats::lag1_autocorrelation(logs);
}

}  // namespace dsy

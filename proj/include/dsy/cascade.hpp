#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/rng.hpp"
#include "dsy/vertex.hpp"

namespace dsy {

/// Largest depth accepted by zeta_n: the full tree has 2^{n+1} - 1 vertices.
inline constexpr int max_zeta_depth = 25;

inline constexpr std::size_t default_vertex_cap = 1'000'000;

/// One born vertex of a realization.
struct cascade_event {
    vertex v;
    state_type state = 0.0;
    double clock = 0.0;
    double intensity = 0.0;
    double birth_time = 0.0;
    double death_time = 0.0;
};

/// Unit exponential clock T_v of the vertex with stream key `key`.
inline double vertex_clock(std::uint64_t seed, std::uint64_t key) {
    rng::stream s(seed, key, rng::purpose::clock);
    return s.exponential();
}

/// Child states of the vertex with stream key `key` and state x. The clock
/// and the children come from distinct streams, so clocks are independent of
/// the state chain.
template <branching_kernel K>
std::pair<state_type, state_type> vertex_children(const K& kernel, std::uint64_t seed, std::uint64_t key,
                                                  state_type x) {
    rng::stream s(seed, key, rng::purpose::children);
    return kernel.sample_children(x, s);
}

namespace detail {

inline double checked_intensity(double lambda) {
    if (!(lambda > 0.0) || std::isnan(lambda))
        throw precondition_error("kernel produced a non-positive intensity");
    return lambda;
}

// Expanded vertices, linked to their parents so addresses can be rebuilt.
struct arena_node {
    state_type state;
    std::uint64_t key;
    std::uint32_t parent;
    std::uint16_t generation;
    std::uint8_t symbol;
};

class arena {
public:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t add(arena_node n) {
        nodes_.push_back(n);
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    }
    const arena_node& operator[](std::uint32_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }

    vertex address(std::uint32_t i) const {
        std::vector<std::uint8_t> symbols;
        for (; nodes_[i].parent != none; i = nodes_[i].parent) symbols.push_back(nodes_[i].symbol);
        vertex v;
        for (auto it = symbols.rbegin(); it != symbols.rend(); ++it) v = v.child(*it);
        return v;
    }

private:
    std::vector<arena_node> nodes_;
};

struct timed {
    double time;
    std::uint32_t index;
    bool operator>(const timed& o) const { return time != o.time ? time > o.time : index > o.index; }
};

using min_heap = std::priority_queue<timed, std::vector<timed>, std::greater<>>;

template <branching_kernel K>
std::pair<state_type, state_type> children_at(const K& kernel, std::uint64_t seed, const arena& a, std::uint32_t i) {
    try {
        return vertex_children(kernel, seed, a[i].key, a[i].state);
    } catch (const sampling_failure& e) {
        throw sampling_failure(e.reason(), a.address(i).to_string());
    }
}

}  // namespace detail

struct population_trace {
    double horizon = 0.0;
    /// N(t): vertices with birth < t <= death (the root counts while alive).
    std::size_t population = 1;
    bool vertex_cap_hit = false;
    /// (birth_time, generation) of every born vertex, root first.
    std::vector<std::pair<double, int>> births;
    /// Time of the last processed death, 0 if none.
    double last_event_time = 0.0;
    std::size_t vertices_born = 1;
};

/// Expands the cascade in birth-time order up to horizon t. Each death before
/// t replaces a live vertex by its two children. Stops with vertex_cap_hit
/// once the live population reaches vertex_cap while deaths before t remain.
template <branching_kernel K>
population_trace simulate_to_horizon(const K& kernel, state_type initial_state, double t,
                                     std::size_t vertex_cap, std::uint64_t seed, bool record_births = true) {
    require(t > 0.0, "simulate_to_horizon: t must be positive");
    require(vertex_cap >= 1, "simulate_to_horizon: vertex_cap must be at least 1");
    population_trace trace;
    trace.horizon = t;
    detail::arena nodes;
    nodes.reserve(std::min<std::size_t>(2 * vertex_cap + 1, 1u << 16));
    detail::min_heap live;
    const auto root = nodes.add({initial_state, rng::root_key, detail::arena::none, 0, 0});
    live.push({vertex_clock(seed, rng::root_key) / detail::checked_intensity(kernel.intensity(initial_state)), root});
    if (record_births) trace.births.emplace_back(0.0, 0);

    while (!live.empty() && live.top().time < t) {
        if (live.size() >= vertex_cap) {
            trace.vertex_cap_hit = true;
            break;
        }
        const auto [death, i] = live.top();
        live.pop();
        trace.last_event_time = death;
        const auto [x1, x2] = detail::children_at(kernel, seed, nodes, i);
        const auto parent = nodes[i];
        int symbol = 1;
        for (const state_type x : {x1, x2}) {
            const std::uint64_t key = rng::child_key(parent.key, symbol);
            const double lambda = detail::checked_intensity(kernel.intensity(x));
            const auto c = nodes.add({x, key, i, static_cast<std::uint16_t>(parent.generation + 1),
                                      static_cast<std::uint8_t>(symbol)});
            live.push({death + vertex_clock(seed, key) / lambda, c});
            if (record_births) trace.births.emplace_back(death, parent.generation + 1);
            ++symbol;
        }
        trace.vertices_born += 2;
    }
    trace.population = live.size();
    return trace;
}

enum class explosion_verdict { explosion_likely, non_explosion_likely };

inline const char* to_string(explosion_verdict v) {
    return v == explosion_verdict::explosion_likely ? "explosion-likely" : "non-explosion-likely";
}

/// Heuristic, not a decision procedure: a replica is explosion-likely iff the
/// live population reaches vertex_cap before t, and non-explosion-likely iff
/// every live vertex outlives t.
template <branching_kernel K>
explosion_verdict classify_explosion(const K& kernel, state_type initial_state, double t, std::size_t vertex_cap,
                                     std::uint64_t seed) {
    const auto trace = simulate_to_horizon(kernel, initial_state, t, vertex_cap, seed, false);
    return trace.vertex_cap_hit ? explosion_verdict::explosion_likely : explosion_verdict::non_explosion_likely;
}

/// zeta_0, ..., zeta_n on one realization, where
/// zeta_j = min over |v| = j of sum_{i <= j} T_{v|i} / lambda(X_{v|i}).
/// Vertices are settled in order of death time, so the first settled vertex
/// of generation j attains zeta_j; deeper generations are never expanded.
template <branching_kernel K>
std::vector<double> zeta_profile(const K& kernel, state_type initial_state, int n, std::uint64_t seed) {
    require(n >= 0, "zeta_n: n must be nonnegative");
    require(n <= max_zeta_depth, "zeta_n: depth " + std::to_string(n) + " exceeds the cap of " +
                                     std::to_string(max_zeta_depth));
    std::vector<double> profile;
    profile.reserve(static_cast<std::size_t>(n) + 1);
    detail::arena nodes;
    detail::min_heap frontier;
    const auto root = nodes.add({initial_state, rng::root_key, detail::arena::none, 0, 0});
    frontier.push(
        {vertex_clock(seed, rng::root_key) / detail::checked_intensity(kernel.intensity(initial_state)), root});
    while (!frontier.empty()) {
        const auto [death, i] = frontier.top();
        frontier.pop();
        const auto node = nodes[i];
        if (node.generation == profile.size()) {
            profile.push_back(death);
            if (profile.size() == static_cast<std::size_t>(n) + 1) break;
        }
        if (node.generation >= n) continue;
        const auto [x1, x2] = detail::children_at(kernel, seed, nodes, i);
        int symbol = 1;
        for (const state_type x : {x1, x2}) {
            const std::uint64_t key = rng::child_key(node.key, symbol);
            const double lambda = detail::checked_intensity(kernel.intensity(x));
            const auto c = nodes.add({x, key, i, static_cast<std::uint16_t>(node.generation + 1),
                                      static_cast<std::uint8_t>(symbol)});
            frontier.push({death + vertex_clock(seed, key) / lambda, c});
            ++symbol;
        }
    }
    return profile;
}

template <branching_kernel K>
double zeta_n(const K& kernel, state_type initial_state, int n, std::uint64_t seed) {
    return zeta_profile(kernel, initial_state, n, seed).back();
}

struct greedy_path_sample {
    double partial_sum = 0.0;
    int terms_used = 0;
    bool converged = false;
    double root_intensity = 0.0;
    /// Z_1, Z_2, ...: the larger child intensity at each step.
    std::vector<double> intensities;
    /// partial_sums[j]: holding times summed through generation j.
    std::vector<double> partial_sums;
    /// Mean of Z_{j-1}/Z_j over the observed steps (Z_0 = lambda(a)).
    double kappa_hat = 0.0;
    /// (1/Z_last) kappa_hat / (1 - kappa_hat), infinite when kappa_hat >= 1.
    double tail_estimate = std::numeric_limits<double>::infinity();
};

/// Follows the child of larger intensity (child 1 on ties) and sums the
/// holding times along that path. Stops when the geometric tail estimate
/// drops below tail_tol or after term_cap terms.
template <branching_kernel K>
greedy_path_sample greedy_zeta(const K& kernel, state_type initial_state, int term_cap, double tail_tol,
                               std::uint64_t seed) {
    require(term_cap >= 1, "greedy_zeta: term_cap must be at least 1");
    require(tail_tol > 0.0, "greedy_zeta: tail_tol must be positive");
    greedy_path_sample g;
    std::uint64_t key = rng::root_key;
    vertex address;
    state_type x = initial_state;
    double z = detail::checked_intensity(kernel.intensity(x));
    g.root_intensity = z;
    g.partial_sum = vertex_clock(seed, key) / z;
    g.partial_sums.push_back(g.partial_sum);
    g.terms_used = 1;
    double ratio_sum = 0.0;
    while (g.terms_used < term_cap) {
        std::pair<state_type, state_type> kids;
        try {
            kids = vertex_children(kernel, seed, key, x);
        } catch (const sampling_failure& e) {
            throw sampling_failure(e.reason(), address.to_string());
        }
        const double l1 = detail::checked_intensity(kernel.intensity(kids.first));
        const double l2 = detail::checked_intensity(kernel.intensity(kids.second));
        const int pick = l2 > l1 ? 2 : 1;
        const double next = pick == 1 ? l1 : l2;
        x = pick == 1 ? kids.first : kids.second;
        key = rng::child_key(key, pick);
        if (address.generation() + 1 < vertex::max_generation) address = address.child(pick);
        ratio_sum += z / next;
        z = next;
        g.intensities.push_back(z);
        g.partial_sum += vertex_clock(seed, key) / z;
        g.partial_sums.push_back(g.partial_sum);
        ++g.terms_used;
        g.kappa_hat = ratio_sum / static_cast<double>(g.terms_used - 1);
        g.tail_estimate = g.kappa_hat < 1.0 ? g.kappa_hat / (1.0 - g.kappa_hat) / z
                                            : std::numeric_limits<double>::infinity();
        if (g.terms_used >= 3 && g.tail_estimate < tail_tol) {
            g.converged = true;
            break;
        }
    }
    return g;
}

/// All vertices of generations 0..depth, in breadth-first order.
template <branching_kernel K>
std::vector<cascade_event> expand_tree(const K& kernel, state_type initial_state, int depth, std::uint64_t seed) {
    require(depth >= 0 && depth <= 20, "expand_tree: depth must lie in [0, 20]");
    std::vector<cascade_event> events;
    std::vector<std::uint64_t> keys;
    events.reserve((std::size_t{2} << depth) - 1);
    const double l0 = detail::checked_intensity(kernel.intensity(initial_state));
    const double c0 = vertex_clock(seed, rng::root_key);
    events.push_back({vertex::root(), initial_state, c0, l0, 0.0, c0 / l0});
    keys.push_back(rng::root_key);
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].v.generation() >= static_cast<std::size_t>(depth)) continue;
        const auto parent = events[i];
        std::pair<state_type, state_type> kids;
        try {
            kids = vertex_children(kernel, seed, keys[i], parent.state);
        } catch (const sampling_failure& e) {
            throw sampling_failure(e.reason(), parent.v.to_string());
        }
        int symbol = 1;
        for (const state_type x : {kids.first, kids.second}) {
            const std::uint64_t key = rng::child_key(keys[i], symbol);
            const double lambda = detail::checked_intensity(kernel.intensity(x));
            const double c = vertex_clock(seed, key);
            events.push_back({parent.v.child(symbol), x, c, lambda, parent.death_time, parent.death_time + c / lambda});
            keys.push_back(key);
            ++symbol;
        }
    }
    return events;
}

}  // namespace dsy

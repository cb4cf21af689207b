#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsy/cascade.hpp"
#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/parallel.hpp"
#include "dsy/rng.hpp"
#include "dsy/stats.hpp"
#include "dsy/vertex.hpp"

namespace dsy {

struct inspection_trace {
    /// Z_0 = 1, Z_1, ...: survivors per generation.
    std::vector<std::size_t> generations{1};
    bool stopped = false;
    std::optional<int> stop_generation;
    /// Set when a generation exceeded the vertex cap and the run was cut short.
    bool truncated = false;
};

/// Inspection process on the shared realization: the root passes without
/// inspection, and a child survives iff its state lies outside A. Runs until
/// extinction or gen_cap generations.
template <branching_kernel K>
inspection_trace run_inspection(const K& kernel, state_type a, const state_set& A, int gen_cap, std::uint64_t seed,
                                std::size_t vertex_cap = default_vertex_cap) {
    require(gen_cap >= 1, "run_inspection: gen_cap must be at least 1");
    inspection_trace trace;
    struct survivor {
        state_type state;
        std::uint64_t key;
    };
    std::vector<survivor> current{{a, rng::root_key}}, next;
    for (int g = 1; g <= gen_cap; ++g) {
        next.clear();
        for (const auto& s : current) {
            const auto [x1, x2] = vertex_children(kernel, seed, s.key, s.state);
            if (!A(x1)) next.push_back({x1, rng::child_key(s.key, 1)});
            if (!A(x2)) next.push_back({x2, rng::child_key(s.key, 2)});
        }
        trace.generations.push_back(next.size());
        if (next.empty()) {
            trace.stopped = true;
            trace.stop_generation = g;
            return trace;
        }
        if (next.size() > vertex_cap) {
            trace.truncated = true;
            return trace;
        }
        std::swap(current, next);
    }
    return trace;
}

struct passage_cutset {
    int k = 0;
    std::vector<vertex> members;
    std::size_t cardinality() const { return members.size(); }
    /// H_k: the largest generation among members.
    std::size_t max_depth = 0;
};

struct passage_cutset_result {
    std::vector<passage_cutset> cutsets;
    /// Set when construction stopped at the vertex cap; the last cutset is then
    /// missing or partial and is not reported.
    bool incomplete = false;
    std::size_t vertices_explored = 0;
};

/// Builds Pi_A^(1), ..., Pi_A^(k_max) by iterated first passage: from each
/// member of Pi_A^(k) the subtree is explored until the chain enters A, and
/// the entry vertices form Pi_A^(k+1). Pi_A^(0) = {root}, whose own state is
/// not inspected.
template <branching_kernel K>
passage_cutset_result passage_cutsets(const K& kernel, state_type a, const state_set& A, int k_max,
                                      std::size_t vertex_cap, std::uint64_t seed) {
    require(k_max >= 1, "passage_cutsets: k_max must be at least 1");
    require(vertex_cap >= 1, "passage_cutsets: vertex_cap must be at least 1");
    struct node {
        vertex v;
        state_type state;
        std::uint64_t key;
    };
    passage_cutset_result result;
    std::vector<node> sources{{vertex::root(), a, rng::root_key}};
    for (int k = 1; k <= k_max; ++k) {
        passage_cutset cut;
        cut.k = k;
        std::vector<node> frontier = sources, entered;
        while (!frontier.empty()) {
            std::vector<node> deeper;
            for (const auto& n : frontier) {
                const auto kids = [&] {
                    try {
                        return vertex_children(kernel, seed, n.key, n.state);
                    } catch (const sampling_failure& e) {
                        throw sampling_failure(e.reason(), n.v.to_string());
                    }
                }();
                int symbol = 1;
                for (const state_type x : {kids.first, kids.second}) {
                    node c{n.v.child(symbol), x, rng::child_key(n.key, symbol)};
                    (A(x) ? entered : deeper).push_back(std::move(c));
                    ++symbol;
                }
                result.vertices_explored += 2;
                if (result.vertices_explored > vertex_cap) {
                    result.incomplete = true;
                    return result;
                }
            }
            frontier = std::move(deeper);
        }
        for (const auto& n : entered) {
            cut.members.push_back(n.v);
            cut.max_depth = std::max(cut.max_depth, n.v.generation());
        }
        std::sort(cut.members.begin(), cut.members.end());
        result.cutsets.push_back(std::move(cut));
        sources = std::move(entered);
    }
    return result;
}

/// No member is a prefix of another.
inline bool is_antichain(const std::vector<vertex>& members) {
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
            if (i != j && members[i].is_prefix_of(members[j])) return false;
    return true;
}

/// Sum of 2^{-|v|}; a finite antichain separates the root from the boundary
/// iff this equals 1. Exact for generations below 1024.
inline double kraft_sum(const std::vector<vertex>& members) {
    double s = 0.0;
    for (const auto& v : members) s += std::ldexp(1.0, -static_cast<int>(v.generation()));
    return s;
}

struct reduced_tree_options {
    double nu = 2.0;
    /// Survival threshold on unit clocks; defaults to half of ln(nu/(nu-1)).
    std::optional<double> epsilon;
    int gen_cap = 60;
    std::size_t vertex_cap = default_vertex_cap;
};

inline double reduced_tree_max_epsilon(double nu) {
    require(nu > 1.0, "reduced tree: offspring mean bound nu must exceed 1");
    return std::log(nu / (nu - 1.0));
}

/// Inspection on a random tree whose vertices have K_v offspring (from
/// `offspring`, with conditional mean below nu); an offspring survives iff
/// its unit exponential clock is at most epsilon. Survival probability per
/// offspring is delta = 1 - e^{-epsilon}, so E V_{n+1} <= delta nu E V_n.
template <class Offspring>
inspection_trace reduced_tree_inspection(Offspring&& offspring, const reduced_tree_options& opt,
                                         std::uint64_t seed) {
    const double eps_max = reduced_tree_max_epsilon(opt.nu);
    const double eps = opt.epsilon.value_or(0.5 * eps_max);
    require(eps > 0.0 && eps < eps_max, "reduced tree: epsilon must lie in (0, ln(nu/(nu-1)))");
    require(opt.gen_cap >= 1, "reduced tree: gen_cap must be at least 1");
    rng::stream s(seed, 0, rng::purpose::replica);
    inspection_trace trace;
    std::size_t alive = 1;
    for (int g = 1; g <= opt.gen_cap; ++g) {
        std::size_t next = 0;
        for (std::size_t i = 0; i < alive; ++i) {
            const long k = offspring(s);
            require(k >= 0, "reduced tree: offspring count must be nonnegative");
            for (long j = 0; j < k; ++j)
                if (s.exponential() <= eps) ++next;
        }
        trace.generations.push_back(next);
        if (next == 0) {
            trace.stopped = true;
            trace.stop_generation = g;
            return trace;
        }
        if (next > opt.vertex_cap) {
            trace.truncated = true;
            return trace;
        }
        alive = next;
    }
    return trace;
}

struct cardinality_report {
    int k = 0;
    double mu = 0.0;
    double bound = 0.0;
    stats::summary cardinality;
    std::size_t incomplete = 0;
    bool satisfied = false;
};

/// Monte Carlo check of E_a[card Pi_A^(k)] <= mu^k with
/// mu = 2 + M (2r/(r-2)) and M a bound for psi on A and at a. Replicas
/// whose construction hits the cap are counted as incomplete and excluded.
template <branching_kernel K>
cardinality_report verify_cutset_cardinality_bound(const K& kernel, state_type a, const state_set& A, double psi_bound,
                                                   double r, int k, std::size_t replicas, std::uint64_t seed,
                                                   std::size_t vertex_cap = default_vertex_cap,
                                                   unsigned threads = default_thread_count()) {
    require(r > 2.0, "cutset bound: r must exceed 2");
    require(psi_bound > 0.0, "cutset bound: psi bound must be positive");
    require(k >= 1 && replicas >= 2, "cutset bound: need k >= 1 and at least 2 replicas");
    cardinality_report rep;
    rep.k = k;
    rep.mu = 2.0 + psi_bound * 2.0 * r / (r - 2.0);
    rep.bound = std::pow(rep.mu, k);
    const auto sizes = map_replicas(
        replicas,
        [&](std::size_t i) -> double {
            const auto res = passage_cutsets(kernel, a, A, k, vertex_cap, rng::replica_seed(seed, i));
            if (res.incomplete) return -1.0;
            return static_cast<double>(res.cutsets.back().cardinality());
        },
        threads);
    std::vector<double> ok;
    for (double s : sizes) {
        if (s < 0.0) ++rep.incomplete;
        else ok.push_back(s);
    }
    require(ok.size() >= 2, "cutset bound: fewer than 2 complete replicas");
    rep.cardinality = stats::summarize(ok);
    rep.satisfied = rep.cardinality.mean <= rep.bound + 3.0 * rep.cardinality.se;
    return rep;
}

}  // namespace dsy

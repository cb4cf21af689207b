#include <gtest/gtest.h>

#include <cmath>

#include "dsy/cutsets.hpp"
#include "dsy/models/catalog.hpp"
#include "dsy/parallel.hpp"
#include "dsy/stats.hpp"

using namespace dsy;

namespace {

std::vector<double> mean_z(const any_kernel& k, double a, const state_set& A, int gen_cap, std::size_t n,
                           std::uint64_t seed) {
    std::vector<double> sums(static_cast<std::size_t>(gen_cap) + 1, 0.0);
    const auto traces = map_replicas(n, [&](std::size_t i) { return run_inspection(k, a, A, gen_cap, rng::replica_seed(seed, i)); });
    for (const auto& t : traces)
        for (std::size_t g = 0; g < t.generations.size(); ++g) sums[g] += static_cast<double>(t.generations[g]);
    for (auto& s : sums) s /= static_cast<double>(n);
    return sums;
}

}  // namespace

TEST(Inspection, EverythingStopsAtFirstGeneration) {
    const auto m = models::make_geometric_like();
    const auto t = run_inspection(m.kernel, 3.0, state_set::everything(), 10, 1);
    EXPECT_TRUE(t.stopped);
    EXPECT_EQ(t.stop_generation, 1);
    EXPECT_EQ(t.generations, (std::vector<std::size_t>{1, 0}));
}

TEST(Inspection, NothingDoublesUntilCap) {
    const auto m = models::make_geometric_like();
    const auto t = run_inspection(m.kernel, 3.0, state_set::nothing(), 6, 1);
    EXPECT_FALSE(t.stopped);
    EXPECT_EQ(t.generations.back(), 64u);
    const auto cut = run_inspection(m.kernel, 3.0, state_set::nothing(), 30, 1, 1000);
    EXPECT_TRUE(cut.truncated);
}

TEST(Inspection, MeanFieldGenerationMeans) {
    // Survivors form a Galton-Watson process with Binomial(2, q) offspring.
    const double q = 0.4;
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto A = state_set::at_most(-std::log(q));
    const std::size_t n = 40000;
    const auto z = mean_z(m.kernel, 1.0, A, 6, n, 11);
    for (int g = 0; g <= 6; ++g) {
        const double expected = std::pow(2 * q, g);
        // Var Z_g is bounded by g (2q)^{g-1} sigma^2 with sigma^2 = 2q(1-q) < 1.
        const double se = std::sqrt((g + 1) * 1.0 / static_cast<double>(n));
        EXPECT_NEAR(z[static_cast<std::size_t>(g)], expected, 4 * se) << g;
    }
}

TEST(Inspection, GeometricLikeBelowHalfDiesImmediately) {
    const auto m = models::make_geometric_like();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto t = run_inspection(m.kernel, 0.5, state_set::at_most(1.0), 10, seed);
        EXPECT_EQ(t.stop_generation, 1);
    }
}

TEST(Inspection, GeometricLikeMeansDecay) {
    const auto m = models::make_geometric_like();
    const std::size_t n = 20000;
    const auto z = mean_z(m.kernel, 4.0, state_set::at_most(1.0), 8, n, 5);
    for (int g = 1; g <= 8; ++g) EXPECT_LE(z[static_cast<std::size_t>(g)], std::pow(2.0 / std::exp(1.0), g) + 0.05) << g;
}

TEST(Passage, EverythingGivesBothChildren) {
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto r = passage_cutsets(m.kernel, 1.0, state_set::everything(), 3, 1000, 1);
    ASSERT_EQ(r.cutsets.size(), 3u);
    EXPECT_EQ(r.cutsets[0].members, (std::vector<vertex>{vertex::parse("1"), vertex::parse("2")}));
    EXPECT_EQ(r.cutsets[2].cardinality(), 8u);
    EXPECT_EQ(r.cutsets[2].max_depth, 3u);
}

TEST(Passage, CutsetsAreSeparatingAntichains) {
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto A = state_set::at_most(std::log(4.0));
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto r = passage_cutsets(m.kernel, 1.0, A, 3, 100000, seed);
        ASSERT_FALSE(r.incomplete);
        std::size_t prev_depth = 0;
        for (const auto& c : r.cutsets) {
            EXPECT_TRUE(is_antichain(c.members));
            // Entry into A happens almost surely along every path here.
            EXPECT_DOUBLE_EQ(kraft_sum(c.members), 1.0);
            EXPECT_GE(c.max_depth, static_cast<std::size_t>(c.k));
            EXPECT_GT(c.max_depth, prev_depth);
            prev_depth = c.max_depth;
        }
        // Each member of the next cutset descends from a member of the previous one.
        for (const auto& v : r.cutsets[1].members) {
            bool found = false;
            for (const auto& u : r.cutsets[0].members) found = found || (u.is_prefix_of(v) && u != v);
            EXPECT_TRUE(found);
        }
    }
}

TEST(Passage, VertexCapMarksIncomplete) {
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto r = passage_cutsets(m.kernel, 1.0, state_set::nothing(), 1, 500, 1);
    EXPECT_TRUE(r.incomplete);
    EXPECT_TRUE(r.cutsets.empty());
}

TEST(Passage, CardinalityBoundHolds) {
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto A = state_set::at_most(std::log(4.0));
    const auto a = verify_cutset_cardinality_bound(m.kernel, 1.0, A, 1.0, 4.0, 2, 4000, 3);
    EXPECT_DOUBLE_EQ(a.mu, 6.0);
    EXPECT_DOUBLE_EQ(a.bound, 36.0);
    EXPECT_TRUE(a.satisfied);
    EXPECT_EQ(a.incomplete, 0u);
    // Independent seeds estimate the same mean.
    const auto b = verify_cutset_cardinality_bound(m.kernel, 1.0, A, 1.0, 4.0, 2, 4000, 4);
    EXPECT_NEAR(a.cardinality.mean, b.cardinality.mean,
                4 * std::hypot(a.cardinality.se, b.cardinality.se));
    EXPECT_THROW(verify_cutset_cardinality_bound(m.kernel, 1.0, A, 1.0, 2.0, 2, 10, 3), precondition_error);
}

TEST(ReducedTree, TinyEpsilonStopsAtOnce) {
    reduced_tree_options opt;
    opt.nu = 2.1;
    opt.epsilon = 1e-12;
    const auto t = reduced_tree_inspection([](rng::stream&) { return 2L; }, opt, 1);
    EXPECT_EQ(t.stop_generation, 1);
}

TEST(ReducedTree, EpsilonRange) {
    reduced_tree_options opt;
    opt.nu = 2.1;
    opt.epsilon = 0.2;
    EXPECT_NO_THROW(reduced_tree_inspection([](rng::stream&) { return 2L; }, opt, 1));
    opt.epsilon = 0.7;
    EXPECT_THROW(reduced_tree_inspection([](rng::stream&) { return 2L; }, opt, 1), precondition_error);
    EXPECT_NEAR(reduced_tree_max_epsilon(2.0), std::log(2.0), 1e-15);
}

TEST(ReducedTree, SubcriticalMeans) {
    reduced_tree_options opt;
    opt.nu = 2.0;
    opt.epsilon = 0.5;
    const double delta = 1.0 - std::exp(-0.5);
    const std::size_t n = 20000;
    std::vector<double> z1(n), z3(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = reduced_tree_inspection([](rng::stream&) { return 2L; }, opt, rng::replica_seed(2, i));
        z1[i] = static_cast<double>(t.generations.size() > 1 ? t.generations[1] : 0);
        z3[i] = static_cast<double>(t.generations.size() > 3 ? t.generations[3] : 0);
    }
    const auto s1 = stats::summarize(z1), s3 = stats::summarize(z3);
    EXPECT_NEAR(s1.mean, 2 * delta, 4 * s1.se);
    EXPECT_NEAR(s3.mean, std::pow(2 * delta, 3), 4 * s3.se);
}

#include <gtest/gtest.h>

#include <cmath>

#include "dsy/kernel_checks.hpp"
#include "dsy/models/catalog.hpp"

using namespace dsy;

TEST(Avoidance, MeanFieldIsGeometric) {
    const double q = 0.3;
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto A = state_set::at_most(-std::log(q));
    for (auto mode : {path_mode::marginal, path_mode::first_child, path_mode::alternating}) {
        const auto pts = estimate_avoidance(m.kernel, 1.0, A, 5, 50000, 7, mode);
        ASSERT_EQ(pts.size(), 5u);
        for (const auto& p : pts) {
            EXPECT_LE(p.ci.lo, std::pow(q, p.n)) << to_string(mode);
            EXPECT_GE(p.ci.hi, std::pow(q, p.n)) << to_string(mode);
        }
    }
}

TEST(Avoidance, GeometricLike) {
    const auto m = models::make_geometric_like();
    const auto A = state_set::at_most(1.0);
    for (const auto& p : estimate_avoidance(m.kernel, 0.5, A, 4, 2000, 1)) EXPECT_EQ(p.avoided, 0u);
    for (const auto& p : estimate_avoidance(m.kernel, 5.0, A, 6, 20000, 2)) EXPECT_LE(p.ci.lo, std::exp(-p.n));
}

TEST(Avoidance, EverythingAndNothing) {
    const auto m = models::make_geometric_like();
    for (const auto& p : estimate_avoidance(m.kernel, 2.0, state_set::everything(), 3, 100, 1)) EXPECT_EQ(p.avoided, 0u);
    for (const auto& p : estimate_avoidance(m.kernel, 2.0, state_set::nothing(), 3, 100, 1)) EXPECT_EQ(p.avoided, 100u);
}

TEST(Avoidance, FirstEntryAgreesWithChildSampler) {
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto A = state_set::at_most(0.5);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int e = first_entry(m.kernel, 1.0, A, 20, seed, path_mode::first_child);
        std::uint64_t key = rng::root_key;
        int expected = 21;
        for (int n = 1; n <= 20; ++n) {
            const double x = vertex_children(m.kernel, seed, key, 1.0).first;
            key = rng::child_key(key, 1);
            if (A(x)) {
                expected = n;
                break;
            }
        }
        EXPECT_EQ(e, expected);
    }
}

TEST(ConditionE, MeanFieldHoldsWithRateOneOverQ) {
    const double q = 0.25;
    const auto m = models::make_mean_field(models::state_law::exponential(1.0));
    const auto A = state_set::at_most(-std::log(q));
    const auto rep = verify_E_condition(m.kernel, {0.5, 1.0, 3.0}, A, [](double) { return 1.0; }, 1.0 / q, 5, 20000, 9);
    EXPECT_TRUE(rep.satisfied());
    EXPECT_EQ(rep.rows.size(), 15u);
    // A rate faster than the true decay is rejected.
    const auto bad = verify_E_condition(m.kernel, {1.0}, A, [](double) { return 0.2; }, 8.0, 3, 20000, 9);
    EXPECT_FALSE(bad.satisfied());
    EXPECT_THROW(verify_E_condition(m.kernel, {1.0}, A, [](double) { return 1.0; }, 2.0, 3, 10, 9),
                 precondition_error);
}

TEST(Densities, MassAndKs) {
    const auto m = models::make_geometric_like();
    EXPECT_NEAR(density_mass(m.kernel, 1.5).value, 1.0, 1e-8);
    const auto sample = sample_marginal(m.kernel, 1.5, 4000, 3);
    EXPECT_TRUE(density_ks_test(m.kernel, 1.5, sample).passes(0.001));
    // A sample from the wrong state is rejected.
    EXPECT_FALSE(density_ks_test(m.kernel, 1.5, sample_marginal(m.kernel, 0.4, 4000, 3)).passes(0.001));
}

TEST(PathCorrelation, SelfSimilarRatiosUncorrelated) {
    const auto m = models::make_nse_selfsimilar(3);
    const auto c = path_log_ratio_autocorrelation(m.kernel, 1.0, 2000, 4);
    EXPECT_LT(std::abs(c.value), 4 * c.se);
}

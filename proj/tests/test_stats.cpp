#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dsy/rng.hpp"
#include "dsy/stats.hpp"

using namespace dsy;

TEST(Stats, SummarizeByHand) {
    const std::vector<double> xs{1, 2, 3, 4};
    const auto s = stats::summarize(xs);
    EXPECT_EQ(s.count, 4u);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.se, std::sqrt(5.0 / 3.0) / 2.0);
}

TEST(Stats, Quantiles) {
    EXPECT_DOUBLE_EQ(stats::median({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(stats::median({4, 1, 2, 3}), 2.5);
    EXPECT_DOUBLE_EQ(stats::quantile({0, 10}, 0.25), 2.5);
    EXPECT_THROW(stats::quantile({}, 0.5), precondition_error);
}

TEST(Stats, WilsonZeroSuccesses) {
    const auto w = stats::wilson(0, 100, 3.0);
    EXPECT_EQ(w.lo, 0.0);
    EXPECT_GT(w.hi, 0.0);
    EXPECT_GT(w.se, 0.0);
}

TEST(Stats, KsRejectsWrongLaw) {
    rng::stream s(9, 0, rng::purpose::auxiliary);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = s.uniform() * s.uniform();
    EXPECT_FALSE(stats::ks_test(xs, [](double u) { return u; }).passes(0.01));
}

TEST(Stats, KsTwoSampleSameLaw) {
    rng::stream s(10, 0, rng::purpose::auxiliary);
    std::vector<double> a(4000), b(4000);
    for (auto& x : a) x = s.exponential();
    for (auto& x : b) x = s.exponential();
    EXPECT_TRUE(stats::ks_two_sample(a, b).passes(0.01));
}

TEST(Stats, MedianStandardErrorNormal) {
    // For N(0,1) the median SE is sqrt(pi/2)/sqrt(n).
    rng::stream s(11, 0, rng::purpose::auxiliary);
    std::vector<double> xs(40000);
    for (auto& x : xs) {
        const double u = s.uniform(), v = s.uniform();
        x = std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }
    const double expected = std::sqrt(M_PI / 2.0) / std::sqrt(40000.0);
    EXPECT_NEAR(stats::median_standard_error(xs), expected, 0.15 * expected);
}

TEST(Stats, Lag1AutocorrelationOfIid) {
    rng::stream s(12, 0, rng::purpose::auxiliary);
    std::vector<double> xs(10000);
    for (auto& x : xs) x = s.uniform();
    const auto c = stats::lag1_autocorrelation(xs);
    EXPECT_LT(std::abs(c.value), 3.0 * c.se);
}

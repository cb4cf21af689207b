#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "dsy/rng.hpp"
#include "dsy/stats.hpp"
#include "dsy/vertex.hpp"

using namespace dsy;

// Known-answer vectors from the Random123 distribution (kat_vectors, philox4x32 10 rounds).
TEST(Philox, KnownAnswerZero) {
    const auto out = rng::philox4x32({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (rng::philox_counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
    const auto out = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out, (rng::philox_counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
    const auto out = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out, (rng::philox_counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Stream, SameKeyReplays) {
    rng::stream a(42, 7, rng::purpose::clock), b(42, 7, rng::purpose::clock);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Stream, PurposesAndSitesDiffer) {
    rng::stream a(42, 7, rng::purpose::clock), b(42, 7, rng::purpose::children), c(42, 8, rng::purpose::clock),
        d(43, 7, rng::purpose::clock);
    const auto x = a();
    EXPECT_NE(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
}

TEST(Stream, UniformOpenIntervalAndKs) {
    rng::stream s(1, 0, rng::purpose::auxiliary);
    std::vector<double> xs(20000);
    for (auto& x : xs) {
        x = s.uniform();
        ASSERT_GT(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
    EXPECT_TRUE(stats::ks_test(xs, [](double u) { return u; }).passes(0.01));
}

TEST(Stream, ExponentialMean) {
    rng::stream s(3, 0, rng::purpose::auxiliary);
    std::vector<double> xs(50000);
    for (auto& x : xs) x = s.exponential();
    const auto sm = stats::summarize(xs);
    EXPECT_NEAR(sm.mean, 1.0, 3.0 * sm.se);
}

TEST(Stream, UniformIntCoversRange) {
    rng::stream s(5, 0, rng::purpose::auxiliary);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto k = s.uniform_int(1, 5);
        ASSERT_GE(k, 1);
        ASSERT_LE(k, 5);
        seen.insert(k);
    }
    EXPECT_EQ(seen.size(), 5u);
}

TEST(Keys, ChildKeyFoldMatchesVertexKey) {
    const auto v = vertex::parse("12212");
    std::uint64_t k = rng::root_key;
    for (char c : std::string("12212")) k = rng::child_key(k, c - '0');
    EXPECT_EQ(v.key(), k);
    EXPECT_EQ(vertex::root().key(), rng::root_key);
    EXPECT_NE(vertex::parse("1").key(), vertex::parse("2").key());
}

TEST(Keys, ReplicaSeedsDistinct) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(rng::replica_seed(1, i));
    EXPECT_EQ(seeds.size(), 10000u);
    EXPECT_NE(rng::replica_seed(1, 0), rng::replica_seed(2, 0));
}

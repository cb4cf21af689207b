#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dsy/kernel_checks.hpp"
#include "dsy/models/catalog.hpp"
#include "dsy/numerics/quadrature.hpp"

using namespace dsy;
using namespace dsy::models;
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

namespace {
rng::stream aux(std::uint64_t seed) { return rng::stream(seed, 0, rng::purpose::auxiliary); }
}  // namespace

static_assert(branching_kernel<alpha_riccati>);
static_assert(kernel_with_density<bessel_nse3>);
static_assert(kernel_with_density<kpp_fourier>);
static_assert(kernel_with_density<geometric_like>);
static_assert(kernel_with_density<complex_burgers>);
static_assert(kernel_with_density<nse_selfsimilar>);
static_assert(!kernel_with_density<alpha_riccati>);
static_assert(!kernel_with_density<mean_field>);

TEST(AlphaRiccati, DeterministicGeometricStates) {
    const auto k = make_alpha_riccati_kernel(2.0);
    auto s = aux(1);
    EXPECT_EQ(k.sample_children(8.0, s), std::make_pair(16.0, 16.0));
    EXPECT_EQ(k.intensity(3.0), 3.0);
    const auto e = make_alpha_riccati(2.0);
    ASSERT_TRUE(e.greedy.has_value());
    EXPECT_DOUBLE_EQ(e.greedy->kappa, 0.5);
    EXPECT_DOUBLE_EQ(e.greedy->bound(e.kernel.intensity(1.0)), 2.0);
    EXPECT_EQ(make_alpha_riccati(0.5).expected, verdict::non_explosive);
    EXPECT_EQ(make_standard_yule().expected, verdict::non_explosive);
    EXPECT_THROW(make_alpha_riccati_kernel(0.0), precondition_error);
}

TEST(MeanField, ChildrenIgnoreParent) {
    const mean_field k(state_law::exponential(1.0));
    auto s1 = aux(2), s2 = aux(2);
    EXPECT_EQ(k.sample_children(0.1, s1), k.sample_children(50.0, s2));
    EXPECT_NEAR(state_law::exponential(1.0).tail(std::log(4.0)), 0.25, 1e-15);
    EXPECT_NEAR(state_law::exponential(1.0).tail(std::log(2.5)), 0.4, 1e-15);
    EXPECT_EQ(state_law::degenerate(1.0).tail(1.0), 0.0);
    EXPECT_DOUBLE_EQ(state_law::uniform(0.0, 2.0).cdf(0.5), 0.25);
}

TEST(MeanField, DegenerateLawIsStandardYule) {
    const auto m = make_mean_field(state_law::degenerate(1.0));
    auto s = aux(3);
    EXPECT_EQ(m.kernel.sample_children(1.0, s), std::make_pair(1.0, 1.0));
    EXPECT_EQ(m.kernel.intensity(1.0), 1.0);
}

TEST(MeanField, RecurrenceForTailBelowHalf) {
    const auto m = make_model("mean_field", {{"law", "exponential"}, {"rate", "1"}});
    ASSERT_TRUE(m.recurrence.has_value());
    const double q = std::exp(-m.recurrence->threshold);
    EXPECT_LT(q, 0.5);
    EXPECT_NEAR(m.recurrence->r, 1.0 / q, 1e-12);
}

TEST(GeometricLike, SupportAndInverseCdf) {
    const geometric_like k;
    auto s = aux(4);
    for (int i = 0; i < 2000; ++i) {
        const auto [a, b] = k.sample_children(0.4, s);
        ASSERT_GT(a, 0.0);
        ASSERT_LT(a, 0.8);
        ASSERT_LT(b, 0.8);
    }
    for (double u : {0.1, 0.5, 0.9}) {
        const double x = 1.3;
        EXPECT_NEAR(geometric_like::inverse_cdf(x, u), -std::log(1.0 - u * (1.0 - std::exp(-2.0 * x))), 1e-14);
    }
    EXPECT_NEAR(density_mass(k, 0.7, 1e-10).value, 1.0, 1e-8);
}

TEST(GeometricLike, FirstChildMatchesDensity) {
    const geometric_like k;
    const auto xs = sample_marginal(k, 1.0, 20000, 5, 1);
    EXPECT_TRUE(density_ks_test(k, 1.0, xs).passes(0.01));
}

TEST(BirthDeath, ReflectsAtOne) {
    const birth_death k(0.6, 1.5);
    auto s = aux(6);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(k.sample_children(1.0, s), std::make_pair(2.0, 2.0));
    EXPECT_THROW(birth_death(1.0, 2.0), precondition_error);
    EXPECT_THROW(birth_death(0.5, 1.0), precondition_error);
}

TEST(BirthDeath, InverseMaxIntensityFormulaAgreesWithMonteCarlo) {
    const birth_death k(0.6, 1.5);
    const double formula = 0.36 * std::pow(1.5, -2.0) + 0.64 * std::pow(1.5, -4.0);
    EXPECT_NEAR(k.mean_inverse_max_intensity(3), formula, 1e-15);
    auto s = aux(7);
    std::vector<double> v(200000);
    for (auto& x : v) {
        const auto [a, b] = k.sample_children(3.0, s);
        x = 1.0 / std::max(k.intensity(a), k.intensity(b));
    }
    const auto sm = stats::summarize(v);
    EXPECT_NEAR(sm.mean, formula, 4.0 * sm.se);
}

TEST(BirthDeath, Constants) {
    EXPECT_NEAR(birth_death(0.95, 2.0).cutset_rate(), 1.0 / (2.0 * std::sqrt(0.95 * 0.05)), 1e-14);
    EXPECT_GT(birth_death(0.95, 2.0).cutset_rate(), 2.0);
    EXPECT_NEAR(birth_death(0.95, 2.0).cutset_rate(), 2.294, 1e-3);
    const birth_death k(0.6, 1.5);
    EXPECT_NEAR(k.greedy_kappa(), 1.5 * 0.36 + 0.64 / 1.5, 1e-15);
    EXPECT_TRUE(k.greedy_bound_applies());
    EXPECT_FALSE(birth_death(0.6, 2.0).greedy_bound_applies());
}

TEST(KppFourier, ConvolutionIdentity) {
    // h * h = (1 + xi^2) h, checked directly on h by quadrature.
    for (double xi : {0.1, 1.0, 5.0}) {
        auto f = [xi](double e) { return kpp_fourier::h(e) * kpp_fourier::h(xi - e); };
        const auto r = numerics::integrate(f, -inf, inf, {0.0, 0.5 * xi, xi}, numerics::quadrature_options{1e-12, 1e-12, 4000});
        EXPECT_NEAR(r.value, (1.0 + xi * xi) * kpp_fourier::h(xi), 1e-9) << xi;
    }
}

TEST(KppFourier, NormalizedAndChildrenSumToParent) {
    const kpp_fourier k;
    for (double xi : {0.1, 1.0, 5.0}) EXPECT_NEAR(density_mass(k, xi, 1e-10).value, 1.0, 1e-6) << xi;
    auto s = aux(8);
    for (int i = 0; i < 1000; ++i) {
        const auto [w1, w2] = k.sample_children(2.5, s);
        ASSERT_EQ(w1 + w2, 2.5);
    }
}

TEST(KppFourier, LogConcave) {
    for (int i = 1; i <= 200; ++i) {
        const double z = pi * 0.1 * i;
        const double exact = pi * pi * (-1.0 / (z * z) + 1.0 / (std::sinh(z) * std::sinh(z)));
        EXPECT_LT(exact, 0.0);
        const double step = 1e-3, x = 0.1 * i;
        const double fd = (kpp_fourier::log_h(x + step) - 2.0 * kpp_fourier::log_h(x) + kpp_fourier::log_h(x - step)) /
                          (step * step);
        EXPECT_NEAR(fd, exact, 1e-5) << x;
    }
}

TEST(KppFourier, FirstChildMatchesDensity) {
    const kpp_fourier k;
    for (double xi : {0.0, 1.0, 4.0}) {
        const auto xs = sample_marginal(k, xi, 20000, 9, 1);
        EXPECT_TRUE(density_ks_test(k, xi, xs).passes(0.01)) << xi;
    }
}

TEST(Bessel, PiecesAndNormalization) {
    const bessel_nse3 k;
    EXPECT_NEAR(k.density(1.0, 0.5), 1.0 - std::exp(-1.0), 1e-15);
    for (double x : {0.5, 1.0, 3.0}) {
        // Lower piece integrates to (x - (1 - e^{-2x})/2)/x, upper to (1 - e^{-2x})/(2x).
        EXPECT_NEAR(density_mass(k, x, 1e-12).value, 1.0, 1e-8) << x;
        EXPECT_NEAR(k.cdf(x, 1e6), 1.0, 1e-15);
    }
}

TEST(Bessel, Reversibility) {
    const bessel_nse3 k;
    for (int i = 1; i <= 50; ++i)
        for (int j = 1; j <= 50; ++j) {
            const double x = 0.17 * i, y = 0.13 * j;
            const double lhs = bessel_nse3::invariant_density(x) * k.density(x, y);
            const double rhs = bessel_nse3::invariant_density(y) * k.density(y, x);
            ASSERT_NEAR(lhs, rhs, 1e-10 * std::max(lhs, rhs)) << x << " " << y;
        }
}

TEST(Bessel, InverseCdfRoundTrip) {
    const bessel_nse3 k;
    for (double x : {1e-6, 0.01, 0.5, 1.0, 4.0, 20.0})
        for (double u : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999})
            EXPECT_NEAR(k.cdf(x, k.inverse_cdf(x, u)), u, 1e-12) << x << " " << u;
}

TEST(Bessel, FirstChildMatchesDensity) {
    const bessel_nse3 k;
    const auto xs = sample_marginal(k, 1.5, 20000, 10, 1);
    EXPECT_TRUE(density_ks_test(k, 1.5, xs).passes(0.01));
}

TEST(NseSelfSimilar, UniformAnglesAtThree) {
    const nse_ratio law(3);
    auto s = aux(11);
    std::vector<double> p1(20000);
    for (auto& x : p1) {
        const auto a = law.sample_angles(s);
        ASSERT_GT(a.phi1, 0.0);
        ASSERT_GT(a.phi2, 0.0);
        ASSERT_LT(a.phi1 + a.phi2, pi);
        x = a.phi1;
    }
    // Phi1 marginal of the uniform law on the triangle: F(t) = 1 - (1 - t/pi)^2.
    EXPECT_TRUE(stats::ks_test(p1, [](double t) { return 1.0 - (1.0 - t / pi) * (1.0 - t / pi); }).passes(0.01));
}

TEST(NseSelfSimilar, LawOfCosines) {
    const nse_ratio law(5);
    auto s = aux(12);
    for (int i = 0; i < 1000; ++i) {
        const auto a = law.sample_angles(s);
        const auto [r1, r2] = nse_ratio::ratios(a);
        // Side R2 opposite the angle Phi1 between sides 1 and R1.
        EXPECT_NEAR(r2 * r2, 1.0 + r1 * r1 - 2.0 * r1 * std::cos(a.phi1), 1e-9 * (1.0 + r1 * r1));
    }
}

TEST(NseSelfSimilar, FirstRatioMatchesDilogLaw) {
    const nse_ratio law(3);
    auto s = aux(13);
    std::vector<double> r(20000);
    for (auto& x : r) x = law.sample(s).first;
    EXPECT_TRUE(stats::ks_test(r, [](double v) { return numerics::dilog_cdf(v); }).passes(0.01));
}

TEST(NseSelfSimilar, HigherDimensionMarginalMatchesDensity) {
    const auto k = make_nse_selfsimilar_kernel(5);
    const auto xs = sample_marginal(k, 1.0, 4000, 14, 1);
    EXPECT_TRUE(density_ks_test(k, 1.0, xs).passes(0.01));
}

TEST(NseSelfSimilar, ChildrenExchangeable) {
    const auto k = make_nse_selfsimilar_kernel(3);
    auto first = sample_marginal(k, 1.0, 20000, 15, 1);
    auto second = sample_marginal(k, 1.0, 20000, 16, 2);
    EXPECT_TRUE(stats::ks_two_sample(first, second).passes(0.01));
}

TEST(NseSelfSimilar, IidRatiosAlongPath) {
    const auto k = make_nse_selfsimilar_kernel(3);
    const auto c = path_log_ratio_autocorrelation(k, 1.0, 5000, 17);
    EXPECT_LT(std::abs(c.value), 3.0 * c.se);
}

TEST(ComplexBurgers, MomentsAndCdf) {
    const auto k = make_complex_burgers_kernel();
    auto s = aux(18);
    std::vector<double> sq(100000);
    for (auto& x : sq) {
        const auto [r1, r2] = k.sample_ratios(s);
        x = r1 * r1;
    }
    const auto sm = stats::summarize(sq);
    EXPECT_NEAR(sm.mean, 1.0 / 3.0, 3.0 * sm.se);
    EXPECT_NEAR(numerics::integrate([&](double y) { return k.density(1.0, y); }, 0.0, 0.5, numerics::quadrature_options{}).value,
                0.5, 1e-12);
    EXPECT_TRUE(k.conditionally_independent());
}

TEST(Catalog, EveryModelBuildsAndSamples) {
    for (const auto& name : model_names()) {
        const auto m = make_model(name);
        auto s = aux(19);
        const auto [a, b] = m.kernel.sample_children(m.default_initial_state, s);
        EXPECT_TRUE(std::isfinite(a) && std::isfinite(b)) << name;
        EXPECT_GT(m.kernel.intensity(m.default_initial_state), 0.0) << name;
        EXPECT_FALSE(m.known_regimes.empty()) << name;
    }
}

TEST(Catalog, RejectsBadParameters) {
    EXPECT_THROW(make_model("nope"), precondition_error);
    EXPECT_THROW(make_model("birth_death", {{"delta", "1.5"}}), precondition_error);
    EXPECT_THROW(make_model("alpha_riccati", {{"beta", "2"}}), precondition_error);
    EXPECT_THROW(make_model("nse_selfsimilar", {{"d", "2"}}), precondition_error);
}

TEST(Catalog, Regimes) {
    EXPECT_EQ(make_nse_selfsimilar(3).expected, verdict::explosive);
    EXPECT_EQ(make_nse_selfsimilar(12).expected, verdict::non_explosive);
    EXPECT_EQ(make_nse_selfsimilar(7).expected, verdict::open);
    EXPECT_EQ(make_birth_death(0.95, 2.0).expected, verdict::non_explosive);
    EXPECT_EQ(make_birth_death(0.5, 2.0).expected, verdict::explosive);
    EXPECT_EQ(make_complex_burgers().expected, verdict::non_explosive);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dsy/errors.hpp"

namespace dsy::stats {

struct summary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double sd = 0.0;
    double se = 0.0;        // standard error of the mean
};

/// Welford accumulation, stable for long replica streams.
inline summary summarize(std::span<const double> xs) {
    summary s;
    double m = 0.0, m2 = 0.0;
    for (double x : xs) {
        ++s.count;
        const double d = x - m;
        m += d / static_cast<double>(s.count);
        m2 += d * (x - m);
    }
    s.mean = m;
    if (s.count > 1) {
        s.variance = m2 / static_cast<double>(s.count - 1);
        s.sd = std::sqrt(s.variance);
        s.se = s.sd / std::sqrt(static_cast<double>(s.count));
    }
    return s;
}

inline double quantile(std::vector<double> xs, double q) {
    require(!xs.empty(), "quantile of empty sample");
    require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0,1]");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

/// Distribution-free standard error of the sample median: half the spread
/// between the order statistics at ranks n/2 -+ sqrt(n)/2. Stays meaningful
/// for heavy-tailed samples where the standard deviation does not.
inline double median_standard_error(std::vector<double> xs) {
    require(xs.size() >= 4, "median standard error needs at least four values");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    const double half = 0.5 * std::sqrt(n);
    const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(0.5 * n - half)));
    const auto hi = std::min(xs.size() - 1, static_cast<std::size_t>(std::ceil(0.5 * n + half)));
    return 0.5 * (xs[hi] - xs[lo]);
}

struct interval {
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;
    /// Half-width divided by z: a standard-error surrogate that stays positive
    /// when no successes were observed.
    double se = 0.0;
};

/// Wilson score interval for a binomial proportion.
inline interval wilson(std::size_t successes, std::size_t trials, double z = 3.0) {
    require(trials > 0, "Wilson interval needs at least one trial");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half), center, half / z};
}

/// Complementary Kolmogorov distribution Q(x) = P(K > x).
inline double kolmogorov_q(double x) {
    if (x < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

struct ks_result {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool passes(double alpha) const { return p_value >= alpha; }
};

/// One-sample Kolmogorov-Smirnov test with Stephens' small-sample correction.
template <class Cdf>
ks_result ks_test(std::vector<double> sample, Cdf&& cdf) {
    require(!sample.empty(), "KS test needs a nonempty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d), sample.size()};
}

/// Two-sample Kolmogorov-Smirnov test.
inline ks_result ks_two_sample(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "KS test needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d), a.size() + b.size()};
}

struct correlation {
    double value = 0.0;
    double se = 0.0;  // large-sample standard error under independence
};

inline correlation lag1_autocorrelation(std::span<const double> xs) {
    require(xs.size() >= 3, "autocorrelation needs at least three values");
    const auto s = summarize(xs);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        den += (xs[i] - s.mean) * (xs[i] - s.mean);
        if (i + 1 < xs.size()) num += (xs[i] - s.mean) * (xs[i + 1] - s.mean);
    }
    return {den > 0.0 ? num / den : 0.0, 1.0 / std::sqrt(static_cast<double>(xs.size()))};
}

/// Pearson correlation of paired samples.
inline correlation pearson(std::span<const double> xs, std::span<const double> ys) {
    require(xs.size() == ys.size() && xs.size() >= 3, "pearson needs equal sizes >= 3");
    const auto sx = summarize(xs);
    const auto sy = summarize(ys);
    double num = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - sx.mean) * (ys[i] - sy.mean);
    const double n = static_cast<double>(xs.size());
    const double denom = (n - 1.0) * sx.sd * sy.sd;
    return {denom > 0.0 ? num / denom : 0.0, 1.0 / std::sqrt(n)};
}

}  // namespace dsy::stats

#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "dsy/errors.hpp"

namespace dsy::numerics {

namespace detail {

// Lanczos approximation, g = 7, n = 9 (coefficients as tabulated by Godfrey).
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

// (n-1)! for n = 1..22. The odd part of 21! is below 2^53, so every entry is
// exact in double precision.
inline constexpr std::array<double, 22> factorials = [] {
    std::array<double, 22> f{};
    f[0] = 1.0;
    for (int i = 1; i < 22; ++i) f[i] = f[i - 1] * i;
    return f;
}();

inline double lanczos_series(double z) {
    double a = lanczos_coeffs[0];
    for (std::size_t i = 1; i < lanczos_coeffs.size(); ++i) a += lanczos_coeffs[i] / (z + static_cast<double>(i));
    return a;
}

}  // namespace detail

/// Gamma function. Integer arguments up to 22 come from an exact table.
inline double gamma(double x) {
    require(!(x <= 0.0 && x == std::floor(x)), "gamma: pole at nonpositive integer");
    if (x == std::floor(x) && x <= 22.0) return detail::factorials[static_cast<std::size_t>(x) - 1];
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * detail::lanczos_series(z);
}

/// log |Gamma(x)| for x > 0.
inline double log_gamma(double x) {
    require(x > 0.0, "log_gamma: argument must be positive");
    if (x < 0.5) return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) - log_gamma(1.0 - x);
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_series(z));
}

/// Gamma(a) / Gamma(b) through log-gamma, stable for large arguments.
inline double gamma_ratio(double a, double b) { return std::exp(log_gamma(a) - log_gamma(b)); }

}  // namespace dsy::numerics

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/numerics/gamma.hpp"
#include "dsy/numerics/quadrature.hpp"

namespace dsy::numerics {

namespace detail {
inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;
}  // namespace detail

/// Dilogarithmic ratio density f3(r) = (2/pi^2)(1/r) ln((r+1)/|r-1|).
inline double dilog_density(double r) {
    require(r > 0.0, "dilog_density: r must be positive");
    require(r != 1.0, "dilog_density: logarithmic singularity at r = 1");
    return 2.0 / detail::pi2 / r * std::log((r + 1.0) / std::abs(r - 1.0));
}

/// Density of max(R1, R2) for d = 3: g(r) = (4/pi^2)(1/r) ln(r/|r-1|) on r >= 1/2.
inline double rmax_density(double r) {
    require(r > 0.0, "rmax_density: r must be positive");
    require(r != 1.0, "rmax_density: logarithmic singularity at r = 1");
    if (r < 0.5) return 0.0;
    return 4.0 / detail::pi2 / r * std::log(r / std::abs(r - 1.0));
}

/// CDF of the dilogarithmic law. Uses the inversion symmetry F(r) = 1 - F(1/r).
inline double dilog_cdf(double r) {
    if (r <= 0.0) return 0.0;
    if (r > 1.0) return 1.0 - dilog_cdf(1.0 / r);
    if (r == 1.0) return 0.5;
    auto f = [](double s) { return s == 1.0 ? 0.0 : dilog_density(s); };
    return require_converged(integrate(f, 0.0, r, quadrature_options{1e-13, 1e-12, 4000}), "dilog_cdf").value;
}

/// Normalizing constant of the angular law S_d on the triangle:
/// c_d = Gamma((d-1)/2) / Gamma((d-2)/2) * 2 / pi^{3/2}.
inline double nse_c(int d) {
    require(d >= 3, "c_d requires d >= 3");
    return gamma_ratio((d - 1) / 2.0, (d - 2) / 2.0) * 2.0 / std::pow(detail::pi, 1.5);
}

/// Ratio density f_d(r) = c_d * int_0^pi sin^{d-2} phi / (1 - 2r cos phi + r^2)^{(d-1)/2} dphi.
/// The denominator is evaluated as (1-r)^2 + 4r sin^2(phi/2) to avoid
/// cancellation near r = 1.
inline quadrature_result ratio_density_d(int d, double r, double tol = 1e-10) {
    require(d >= 3, "ratio_density_d requires d >= 3");
    require(r > 0.0, "ratio_density_d: r must be positive");
    require(r != 1.0, "ratio_density_d: the angular integral diverges at r = 1");
    const double e = (d - 1) / 2.0;
    const double c = nse_c(d);
    auto integrand = [&](double phi) {
        const double s = std::sin(0.5 * phi);
        const double den = (1.0 - r) * (1.0 - r) + 4.0 * r * s * s;
        return std::pow(std::sin(phi), d - 2) * std::exp(-e * std::log(den));
    };
    std::vector<double> cuts;
    // The integrand peaks at phi ~ |1 - r| when r is close to 1.
    if (std::abs(1.0 - r) < 1.0) cuts = {std::abs(1.0 - r), 4.0 * std::abs(1.0 - r)};
    auto q = integrate(integrand, 0.0, detail::pi, cuts, quadrature_options{tol / c, tol, 8000});
    q.value *= c;
    q.abs_error_estimate *= c;
    return require_converged(q, "ratio_density_d");
}

enum class alpha_method { closed_form, quadrature };

/// alpha_d = E[R1^{(d-3)/2}] for the scale-invariant kernel.
inline double alpha_d(int d, alpha_method method = alpha_method::closed_form) {
    require(d >= 3, "alpha_d requires d >= 3");
    if (method == alpha_method::closed_form) {
        const double lg = 0.5 * (d - 3) * std::log(2.0) + 3.0 * log_gamma((d - 1) / 4.0) - std::log(detail::pi) -
                          log_gamma((d - 2) / 2.0) - log_gamma((d + 1) / 4.0);
        return std::exp(lg);
    }
    const double e = (d - 3) / 2.0;
    auto f = [e](double p1, double p2) {
        const double v = std::sin(p2) * std::sin(p1 + p2);
        return v <= 0.0 ? 0.0 : std::pow(v, e);
    };
    const auto q = require_converged(integrate_triangle(f, quadrature_options{1e-12, 1e-12, 4000}), "alpha_d");
    return nse_c(d) * q.value;
}

/// kappa_d = E[R_max^{-2}] = (4/pi) Gamma((d-1)/2)^2 / (Gamma((d-2)/2) Gamma(d/2)).
inline double kappa_d(int d) {
    require(d >= 3, "kappa_d requires d >= 3");
    if (d <= 100) {
        const double g = gamma((d - 1) / 2.0);
        return 4.0 / detail::pi * g * g / (gamma((d - 2) / 2.0) * gamma(d / 2.0));
    }
    return 4.0 / detail::pi *
           std::exp(2.0 * log_gamma((d - 1) / 2.0) - log_gamma((d - 2) / 2.0) - log_gamma(d / 2.0));
}

}  // namespace dsy::numerics

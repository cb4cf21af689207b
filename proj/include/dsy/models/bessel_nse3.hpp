#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/special_functions/lambert_w.hpp>

#include "dsy/kernel.hpp"

namespace dsy::models {

/// Bessel cascade of the 3-d Navier-Stokes equations on magnitudes x > 0:
/// lambda(x) = x^2 and
///   p(x, y) = (1 - e^{-2y}) / x                 for 0 < y < x,
///   p(x, y) = ((e^{2x} - 1) / x) e^{-2y}        for y >= x.
/// The two children are drawn conditionally independently given the parent.
class bessel_nse3 {
public:
    double intensity(state_type x) const { return x * x; }

    double density(state_type x, state_type y) const {
        if (y <= 0.0 || x <= 0.0) return 0.0;
        if (y < x) return -std::expm1(-2.0 * y) / x;
        return std::exp(2.0 * (x - y)) * -std::expm1(-2.0 * x) / x;
    }
    std::vector<double> density_breakpoints(state_type x) const { return {x}; }

    /// P(Y <= y).
    double cdf(state_type x, state_type y) const {
        if (y <= 0.0) return 0.0;
        if (y < x) return (y + 0.5 * std::expm1(-2.0 * y)) / x;
        return 1.0 - std::exp(2.0 * (x - y)) * -std::expm1(-2.0 * x) / (2.0 * x);
    }

    /// Invariant density gamma(x) = 4 x e^{-2x}, for which p is reversible.
    static double invariant_density(double x) { return x > 0.0 ? 4.0 * x * std::exp(-2.0 * x) : 0.0; }

    /// Exact inverse CDF. Upper piece in closed form; lower piece solves
    /// s + e^{-s} = 2ux + 1 (s = 2y) through the principal Lambert W branch,
    /// then polishes with Newton steps.
    double inverse_cdf(state_type x, double u) const {
        const double upper_mass = -std::expm1(-2.0 * x) / (2.0 * x);
        if (u >= 1.0 - upper_mass) return x + 0.5 * std::log(-std::expm1(-2.0 * x) / (2.0 * x * (1.0 - u)));
        const double m = 2.0 * u * x + 1.0;
        double y;
        if (u * x < 1e-8) {
            // y^2 - (2/3) y^3 + ... = u x near the origin.
            const double r = std::sqrt(u * x);
            y = r + r * r / 3.0;
        } else {
            y = 0.5 * (m + boost::math::lambert_w0(-std::exp(-m)));
        }
        for (int i = 0; i < 3; ++i) {
            const double g = y + 0.5 * std::expm1(-2.0 * y) - u * x;
            const double dg = -std::expm1(-2.0 * y);
            if (!(dg > 0.0)) break;
            const double next = y - g / dg;
            if (!(next > 0.0) || next == y) break;
            y = next;
        }
        return y;
    }

    std::pair<state_type, state_type> sample_children(state_type x, rng::stream& s) const {
        const double u1 = s.uniform();
        return {inverse_cdf(x, u1), inverse_cdf(x, s.uniform())};
    }
    state_type sample_step(state_type x, rng::stream& s) const { return inverse_cdf(x, s.uniform()); }

    state_space space() const { return state_space::vector_magnitude; }
    bool conditionally_independent() const { return true; }
    bool jointly_homogeneous() const { return true; }
};

}  // namespace dsy::models

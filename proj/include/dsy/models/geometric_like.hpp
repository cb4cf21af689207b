#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dsy/kernel.hpp"

namespace dsy::models {

/// p(x, y) = e^{-y} / (1 - e^{-2x}) on 0 < y < 2x: an exponential truncated
/// to (0, 2x). Children are drawn independently; lambda(x) = x.
class geometric_like {
public:
    double intensity(state_type x) const { return x; }

    /// Inverse CDF: y = -ln(1 - u (1 - e^{-2x})).
    static double inverse_cdf(double x, double u) { return -std::log1p(u * std::expm1(-2.0 * x)); }

    std::pair<state_type, state_type> sample_children(state_type x, rng::stream& s) const {
        const double u1 = s.uniform();
        return {inverse_cdf(x, u1), inverse_cdf(x, s.uniform())};
    }
    state_type sample_step(state_type x, rng::stream& s) const { return inverse_cdf(x, s.uniform()); }

    double density(state_type x, state_type y) const {
        if (!(y > 0.0 && y < 2.0 * x)) return 0.0;
        return std::exp(-y) / -std::expm1(-2.0 * x);
    }
    std::vector<double> density_breakpoints(state_type x) const { return {2.0 * x}; }

    state_space space() const { return state_space::positive_real; }
    bool conditionally_independent() const { return true; }
    bool jointly_homogeneous() const { return true; }
};

}  // namespace dsy::models

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/numerics/densities.hpp"
#include "dsy/self_similar.hpp"

namespace dsy::models {

struct triangle_angles {
    double phi1;
    double phi2;
};

/// Ratio law of the scale-invariant Navier-Stokes kernel in dimension d.
/// (Phi1, Phi2) has density c_d sin^{d-3}(phi1 + phi2) on the triangle
/// {phi1, phi2 > 0, phi1 + phi2 < pi}, and the ratios follow from the sine
/// rule: R1 = sin Phi2 / sin(Phi1 + Phi2), R2 = sin Phi1 / sin(Phi1 + Phi2).
class nse_ratio {
public:
    explicit nse_ratio(int d, std::size_t rejection_cap = default_rejection_cap) : d_(d), cap_(rejection_cap) {
        require(d >= 3, "nse_selfsimilar requires d >= 3");
        require(rejection_cap >= 1, "rejection cap must be positive");
    }

    triangle_angles sample_angles(rng::stream& s) const {
        constexpr double pi = std::numbers::pi;
        for (std::size_t trial = 0; trial < cap_; ++trial) {
            double p1 = pi * s.uniform();
            double p2 = pi * s.uniform();
            if (p1 + p2 >= pi) {
                p1 = pi - p1;
                p2 = pi - p2;
            }
            if (d_ == 3) return {p1, p2};
            if (s.uniform() < std::pow(std::sin(p1 + p2), d_ - 3)) return {p1, p2};
        }
        throw sampling_failure("nse_selfsimilar: rejection cap of " + std::to_string(cap_) + " proposals exceeded");
    }

    static std::pair<double, double> ratios(triangle_angles a) {
        const double s = std::sin(a.phi1 + a.phi2);
        return {std::sin(a.phi2) / s, std::sin(a.phi1) / s};
    }

    std::pair<double, double> sample(rng::stream& s) const { return ratios(sample_angles(s)); }
    bool independent() const { return false; }

    /// f_d(r). Closed form for d = 3, angular quadrature otherwise. The
    /// logarithmic singularity at r = 1 is a null set and evaluates to 0.
    double density(double r) const {
        if (r <= 0.0 || r == 1.0) return 0.0;
        if (d_ == 3) return numerics::dilog_density(r);
        return numerics::ratio_density_d(d_, r).value;
    }
    std::vector<double> breakpoints() const { return {1.0}; }

    int dimension() const noexcept { return d_; }

private:
    int d_;
    std::size_t cap_;
};

using nse_selfsimilar = self_similar_kernel<nse_ratio>;

inline nse_selfsimilar make_nse_selfsimilar_kernel(int d, std::size_t rejection_cap = default_rejection_cap) {
    return nse_selfsimilar(nse_ratio(d, rejection_cap), 2.0);
}

}  // namespace dsy::models

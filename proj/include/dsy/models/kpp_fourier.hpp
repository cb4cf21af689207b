#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"

namespace dsy::models {

/// Fourier-side KPP cascade. States are real frequencies xi with
/// lambda(xi) = 1 + xi^2. The first child is W1 ~ H(.|xi) with
/// H(eta|xi) = h(eta) h(xi - eta) / ((1 + xi^2) h(xi)), h(xi) = 3 xi / sinh(pi xi),
/// and the second is W2 = xi - W1, so the children are dependent.
class kpp_fourier {
public:
    /// Exponent kappa of the proposal h^{1-kappa}.
    static constexpr double envelope_kappa = 0.75;

    explicit kpp_fourier(std::size_t rejection_cap = default_rejection_cap) : cap_(rejection_cap) {
        require(rejection_cap >= 1, "rejection cap must be positive");
    }

    /// log(z / sinh z) for z >= 0, accurate near 0 and for large z.
    static double log_z_over_sinh(double z) {
        z = std::abs(z);
        if (z < 1e-4) return -z * z / 6.0;
        if (z < 20.0) return std::log(z / std::sinh(z));
        return std::log(2.0 * z) - z - std::log1p(-std::exp(-2.0 * z));
    }

    static double log_h(double xi) { return std::log(3.0 / std::numbers::pi) + log_z_over_sinh(std::numbers::pi * xi); }
    static double h(double xi) { return std::exp(log_h(xi)); }

    /// H(eta | xi).
    static double transition_density(double xi, double eta) {
        return std::exp(log_h(eta) + log_h(xi - eta) - std::log1p(xi * xi) - log_h(xi));
    }

    /// Product envelope H(eta|xi) <= phi1(xi) phi2(eta) with
    /// phi1(xi) = (3/pi)^{1-kappa} h(xi/2)^{2 kappa} / ((1 + xi^2) h(xi)) and
    /// phi2(eta) = h(eta)^{1-kappa}. The 1/(1 + xi^2) factor is what makes
    /// phi1 phi2 ~ |x|^{kappa-2} integrable; without it phi1 phi2 grows like |x|^kappa.
    static double envelope_phi1(double xi, double kappa = envelope_kappa) {
        return std::exp((1.0 - kappa) * log_h(0.0) + 2.0 * kappa * log_h(0.5 * xi) - std::log1p(xi * xi) - log_h(xi));
    }
    static double envelope_phi2(double eta, double kappa = envelope_kappa) {
        return std::exp((1.0 - kappa) * log_h(eta));
    }
    /// phi1(x) phi2(x). The linear parts of the log h terms cancel exactly,
    /// so they are removed before summing; phi1 alone overflows past |x| ~ 900.
    static double envelope_product(double x, double kappa = envelope_kappa) {
        const double log_q = (1.0 - kappa) * (log_h(0.0) + log_h_detrended(x)) + 2.0 * kappa * log_h_detrended(0.5 * x) -
                             log_h_detrended(x);
        const double ax = std::abs(x);
        return std::exp(log_q - (ax < 1e150 ? std::log1p(x * x) : 2.0 * std::log(ax)));
    }

    /// log h(xi) + pi |xi|, finite for all xi.
    static double log_h_detrended(double xi) {
        const double z = std::numbers::pi * std::abs(xi);
        if (z < 20.0) return log_h(xi) + z;
        return std::log(3.0 / std::numbers::pi) + std::log(2.0 * z) - std::log1p(-std::exp(-2.0 * z));
    }

    double intensity(state_type xi) const { return 1.0 + xi * xi; }

    /// W1 by rejection from q(eta) ~ h(eta)^{1/4}. Since h is even and
    /// log-concave, h(eta) h(xi - eta) <= h(xi/2)^2 and h <= h(0) = 3/pi, so
    /// h(eta) h(xi - eta) / h(eta)^{1/4} <= (3/pi)^{1/4} h(xi/2)^{3/2}.
    double sample_first(state_type xi, rng::stream& s) const {
        const double log_m = 0.25 * log_h(0.0) + 1.5 * log_h(0.5 * xi);
        for (std::size_t trial = 0; trial < cap_; ++trial) {
            const double eta = sample_proposal(s);
            const double log_accept = log_h(eta) + log_h(xi - eta) - 0.25 * log_h(eta) - log_m;
            if (std::log(s.uniform()) < log_accept) return eta;
        }
        throw sampling_failure("kpp_fourier: rejection cap of " + std::to_string(cap_) + " proposals exceeded");
    }

    std::pair<state_type, state_type> sample_children(state_type xi, rng::stream& s) const {
        const double w1 = sample_first(xi, s);
        return {w1, xi - w1};
    }
    state_type sample_step(state_type xi, rng::stream& s) const { return sample_first(xi, s); }

    double density(state_type xi, state_type eta) const { return transition_density(xi, eta); }
    std::vector<double> density_breakpoints(state_type xi) const { return {std::min(0.0, xi), 0.5 * xi, std::max(0.0, xi)}; }

    state_space space() const { return state_space::real_line; }
    bool conditionally_independent() const { return false; }
    bool jointly_homogeneous() const { return true; }

private:
    // Draws from the density proportional to h(eta)^{1/4}. With z = pi |eta|,
    // (z / sinh z)^{1/4} <= 2^{1/4} (1 + z)^{1/4} e^{-z/4} <= C e^{-z/8}, using
    // z / sinh z <= 2 (1 + z) e^{-z} and (1 + z)^{1/4} <= e^{ln2/4 - 1/8} e^{z/8}.
    // So |eta| is proposed from an exponential with rate pi/8.
    double sample_proposal(rng::stream& s) const {
        constexpr double log_c = 0.25 * std::numbers::ln2 + (0.25 * std::numbers::ln2 - 0.125);
        for (std::size_t trial = 0; trial < cap_; ++trial) {
            const double z = 8.0 * s.exponential();
            const double log_accept = 0.25 * log_z_over_sinh(z) - (log_c - z / 8.0);
            const double sign = s.uniform() < 0.5 ? -1.0 : 1.0;
            if (std::log(s.uniform()) < log_accept) return sign * z / std::numbers::pi;
        }
        throw sampling_failure("kpp_fourier: proposal cap exceeded");
    }

    std::size_t cap_;
};

}  // namespace dsy::models

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"

namespace dsy::models {

/// Birth-death chain on {1, 2, ...} reflecting at 1: from k > 1 a step goes
/// to k - 1 with probability delta and to k + 1 otherwise; from 1 it always
/// goes to 2. Children step independently. lambda(k) = b^k.
class birth_death {
public:
    birth_death(double delta, double b) : delta_(delta), b_(b) {
        require(delta > 0.0 && delta < 1.0, "birth_death: delta must lie in (0, 1)");
        require(b > 1.0, "birth_death: b must exceed 1");
    }

    double intensity(state_type k) const { return std::pow(b_, k); }

    state_type step(state_type k, double u) const {
        if (k <= 1.0) return 2.0;
        return u < delta_ ? k - 1.0 : k + 1.0;
    }

    std::pair<state_type, state_type> sample_children(state_type k, rng::stream& s) const {
        const double u1 = s.uniform();
        return {step(k, u1), step(k, s.uniform())};
    }
    state_type sample_step(state_type k, rng::stream& s) const { return step(k, s.uniform()); }

    state_space space() const { return state_space::positive_integer; }
    bool conditionally_independent() const { return true; }
    bool jointly_homogeneous() const { return true; }

    double delta() const noexcept { return delta_; }
    double b() const noexcept { return b_; }

    /// E_a[1/Z] with Z the larger child intensity.
    double mean_inverse_max_intensity(int a) const {
        require(a >= 1, "birth_death: states are positive integers");
        if (a == 1) return std::pow(b_, -2.0);
        return delta_ * delta_ * std::pow(b_, 1.0 - a) + (1.0 - delta_ * delta_) * std::pow(b_, -1.0 - a);
    }

    /// Contraction factor sup_a lambda(a) E_a[1/Z] = max{1/b, b delta^2 + (1 - delta^2)/b}.
    double greedy_kappa() const { return std::max(1.0 / b_, b_ * delta_ * delta_ + (1.0 - delta_ * delta_) / b_); }

    /// The contraction bound applies when b < delta^{-2} - 1.
    bool greedy_bound_applies() const { return b_ < 1.0 / (delta_ * delta_) - 1.0; }

    /// Decay rate r = 1 / (2 sqrt(delta (1 - delta))) of the avoidance probability.
    double cutset_rate() const { return 1.0 / (2.0 * std::sqrt(delta_ * (1.0 - delta_))); }

private:
    double delta_;
    double b_;
};

}  // namespace dsy::models

#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"

namespace dsy::models {

/// Law of the i.i.d. states of a mean-field cascade.
class state_law {
public:
    enum class family { exponential, uniform, degenerate };

    /// Exponential with the given rate.
    static state_law exponential(double rate) {
        require(rate > 0.0, "exponential rate must be positive");
        return {family::exponential, rate, 0.0};
    }
    /// Uniform on (lo, hi) with 0 <= lo < hi.
    static state_law uniform(double lo, double hi) {
        require(lo >= 0.0 && hi > lo, "uniform law needs 0 <= lo < hi");
        return {family::uniform, lo, hi};
    }
    /// Point mass at value > 0.
    static state_law degenerate(double value) {
        require(value > 0.0, "degenerate law needs a positive value");
        return {family::degenerate, value, 0.0};
    }

    double sample(rng::stream& s) const {
        switch (kind_) {
            case family::exponential: return s.exponential() / p_;
            case family::uniform: return s.uniform(p_, q_);
            case family::degenerate: return p_;
        }
        return p_;
    }

    /// P(X > c).
    double tail(double c) const {
        switch (kind_) {
            case family::exponential: return c <= 0.0 ? 1.0 : std::exp(-p_ * c);
            case family::uniform: return c <= p_ ? 1.0 : c >= q_ ? 0.0 : (q_ - c) / (q_ - p_);
            case family::degenerate: return c < p_ ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double cdf(double y) const { return 1.0 - tail(y); }

    family kind() const noexcept { return kind_; }
    std::string name() const {
        switch (kind_) {
            case family::exponential: return "exponential";
            case family::uniform: return "uniform";
            case family::degenerate: return "degenerate";
        }
        return "unknown";
    }

private:
    state_law(family k, double p, double q) : kind_(k), p_(p), q_(q) {}
    family kind_;
    double p_;
    double q_;
};

/// States are i.i.d. draws from a fixed law regardless of the parent;
/// lambda(x) = x. The two children are drawn independently.
class mean_field {
public:
    explicit mean_field(state_law law) : law_(law) {}

    double intensity(state_type x) const { return x; }
    std::pair<state_type, state_type> sample_children(state_type, rng::stream& s) const {
        const double x1 = law_.sample(s);
        return {x1, law_.sample(s)};
    }
    state_type sample_step(state_type, rng::stream& s) const { return law_.sample(s); }
    state_space space() const { return state_space::positive_real; }
    bool conditionally_independent() const { return true; }
    bool jointly_homogeneous() const { return true; }

    const state_law& law() const noexcept { return law_; }

private:
    state_law law_;
};

}  // namespace dsy::models

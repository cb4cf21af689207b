#pragma once

#include <cmath>
#include <concepts>
#include <utility>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/rng.hpp"

namespace dsy {

/// Joint law of the child ratios (R1, R2) of a self-similar kernel. Both
/// marginals must equal the law of a single ratio R.
template <class L>
concept ratio_law = requires(const L& law, rng::stream& s) {
    { law.sample(s) } -> std::same_as<std::pair<double, double>>;
    { law.independent() } -> std::convertible_to<bool>;
};

/// Ratio laws that publish the density of R.
template <class L>
concept ratio_law_with_density = ratio_law<L> && requires(const L& law, double r) {
    { law.density(r) } -> std::convertible_to<double>;
    { law.breakpoints() } -> std::same_as<std::vector<double>>;
};

/// Multiplicative kernel: children of x are (x R1, x R2) and
/// lambda(x) = x^exponent. Along any path the ratios are i.i.d. and the
/// ratio stream does not depend on x.
template <ratio_law Law>
class self_similar_kernel {
public:
    explicit self_similar_kernel(Law law, double exponent = 2.0, state_space space = state_space::vector_magnitude)
        : law_(std::move(law)), exponent_(exponent), space_(space) {
        require(exponent > 0.0, "intensity exponent must be positive");
    }

    double intensity(state_type x) const { return exponent_ == 2.0 ? x * x : std::pow(x, exponent_); }

    std::pair<state_type, state_type> sample_children(state_type x, rng::stream& s) const {
        const auto [r1, r2] = law_.sample(s);
        return {x * r1, x * r2};
    }

    state_type sample_step(state_type x, rng::stream& s) const { return x * law_.sample(s).first; }

    std::pair<double, double> sample_ratios(rng::stream& s) const { return law_.sample(s); }

    state_space space() const { return space_; }
    bool conditionally_independent() const { return law_.independent(); }
    bool jointly_homogeneous() const { return true; }

    /// p(x, y) = f(y/x)/x.
    double density(state_type x, state_type y) const
        requires ratio_law_with_density<Law>
    {
        if (y <= 0.0 || x <= 0.0) return 0.0;
        return law_.density(y / x) / x;
    }

    std::vector<double> density_breakpoints(state_type x) const
        requires ratio_law_with_density<Law>
    {
        auto cuts = law_.breakpoints();
        for (auto& c : cuts) c *= x;
        return cuts;
    }

    const Law& law() const noexcept { return law_; }
    double exponent() const noexcept { return exponent_; }

private:
    Law law_;
    double exponent_;
    state_space space_;
};

}  // namespace dsy

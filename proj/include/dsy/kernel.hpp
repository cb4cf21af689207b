#pragma once

#include <concepts>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/rng.hpp"

namespace dsy {

/// States are scalars throughout: positive reals, signed frequencies,
/// integer-valued chains stored as doubles, or magnitudes of d-vectors.
using state_type = double;

enum class state_space {
    positive_real,
    real_line,
    positive_integer,
    vector_magnitude,
};

inline const char* to_string(state_space s) {
    switch (s) {
        case state_space::positive_real: return "positive_real";
        case state_space::real_line: return "real_line";
        case state_space::positive_integer: return "positive_integer";
        case state_space::vector_magnitude: return "vector_magnitude";
    }
    return "unknown";
}

/// Default cap on proposals for rejection samplers.
inline constexpr std::size_t default_rejection_cap = 1'000'000;

/// A branching Markov kernel: an intensity map, a joint sampler for the two
/// children of a vertex, and a single-step sampler for the path marginal
/// p(x, dy). The two samplers must agree on the marginal law of each child.
template <class K>
concept branching_kernel = requires(const K& k, state_type x, rng::stream& s) {
    { k.intensity(x) } -> std::convertible_to<double>;
    { k.sample_children(x, s) } -> std::same_as<std::pair<state_type, state_type>>;
    { k.sample_step(x, s) } -> std::convertible_to<state_type>;
    { k.space() } -> std::same_as<state_space>;
    { k.conditionally_independent() } -> std::convertible_to<bool>;
    { k.jointly_homogeneous() } -> std::convertible_to<bool>;
};

/// Kernels that publish their path-marginal density p(x, y).
template <class K>
concept kernel_with_density = branching_kernel<K> && requires(const K& k, state_type x) {
    { k.density(x, x) } -> std::convertible_to<double>;
    { k.density_breakpoints(x) } -> std::same_as<std::vector<double>>;
};

template <branching_kernel K>
std::pair<state_type, state_type> sample_children(const K& kernel, state_type x, rng::stream& s) {
    return kernel.sample_children(x, s);
}

/// Lower end of the state space, used as the lower limit of CDF integrals.
inline double support_lower(state_space s) {
    return s == state_space::real_line ? -std::numeric_limits<double>::infinity() : 0.0;
}

/// A measurable set of states, given as a predicate.
class state_set {
public:
    state_set(std::function<bool(state_type)> contains, std::string description)
        : contains_(std::move(contains)), description_(std::move(description)) {}

    bool contains(state_type x) const { return contains_(x); }
    bool operator()(state_type x) const { return contains_(x); }
    const std::string& description() const noexcept { return description_; }

    /// A = (0, c] (or (-inf, c] on the real line).
    static state_set at_most(double c) {
        return {[c](state_type x) { return x <= c; }, "(0, " + std::to_string(c) + "]"};
    }

    /// A = {x : lambda(x) <= c}.
    template <branching_kernel K>
    static state_set intensity_at_most(const K& kernel, double c) {
        return {[&kernel, c](state_type x) { return kernel.intensity(x) <= c; },
                "{x : lambda(x) <= " + std::to_string(c) + "}"};
    }

    static state_set everything() { return {[](state_type) { return true; }, "S"}; }
    static state_set nothing() { return {[](state_type) { return false; }, "empty"}; }

private:
    std::function<bool(state_type)> contains_;
    std::string description_;
};

/// Type-erased kernel, used by the model catalog and the CLI. Immutable and
/// safe to share across threads.
class any_kernel {
public:
    template <class K>
        requires(!std::same_as<std::remove_cvref_t<K>, any_kernel> && branching_kernel<K>)
    explicit any_kernel(K kernel) : impl_(std::make_shared<model<K>>(std::move(kernel))) {}

    double intensity(state_type x) const { return impl_->intensity(x); }
    std::pair<state_type, state_type> sample_children(state_type x, rng::stream& s) const {
        return impl_->sample_children(x, s);
    }
    state_type sample_step(state_type x, rng::stream& s) const { return impl_->sample_step(x, s); }
    state_space space() const { return impl_->space(); }
    bool conditionally_independent() const { return impl_->conditionally_independent(); }
    bool jointly_homogeneous() const { return impl_->jointly_homogeneous(); }

    bool has_density() const { return impl_->has_density(); }
    /// Path-marginal density; throws precondition_error if the kernel has none.
    double density(state_type x, state_type y) const { return impl_->density(x, y); }
    std::vector<double> density_breakpoints(state_type x) const { return impl_->density_breakpoints(x); }

private:
    struct concept_t {
        virtual ~concept_t() = default;
        virtual double intensity(state_type) const = 0;
        virtual std::pair<state_type, state_type> sample_children(state_type, rng::stream&) const = 0;
        virtual state_type sample_step(state_type, rng::stream&) const = 0;
        virtual state_space space() const = 0;
        virtual bool conditionally_independent() const = 0;
        virtual bool jointly_homogeneous() const = 0;
        virtual bool has_density() const = 0;
        virtual double density(state_type, state_type) const = 0;
        virtual std::vector<double> density_breakpoints(state_type) const = 0;
    };

    template <class K>
    struct model final : concept_t {
        explicit model(K k) : kernel(std::move(k)) {}
        double intensity(state_type x) const override { return kernel.intensity(x); }
        std::pair<state_type, state_type> sample_children(state_type x, rng::stream& s) const override {
            return kernel.sample_children(x, s);
        }
        state_type sample_step(state_type x, rng::stream& s) const override { return kernel.sample_step(x, s); }
        state_space space() const override { return kernel.space(); }
        bool conditionally_independent() const override { return kernel.conditionally_independent(); }
        bool jointly_homogeneous() const override { return kernel.jointly_homogeneous(); }
        bool has_density() const override { return kernel_with_density<K>; }
        double density(state_type x, state_type y) const override {
            if constexpr (kernel_with_density<K>) return kernel.density(x, y);
            else throw precondition_error("kernel has no path-marginal density");
        }
        std::vector<double> density_breakpoints(state_type x) const override {
            if constexpr (kernel_with_density<K>) return kernel.density_breakpoints(x);
            else return {};
        }
        K kernel;
    };

    std::shared_ptr<const concept_t> impl_;
};

static_assert(branching_kernel<any_kernel>);

/// Whether a kernel publishes p(x, y); resolved at run time for any_kernel.
template <branching_kernel K>
bool has_density(const K& kernel) {
    if constexpr (std::same_as<K, any_kernel>) return kernel.has_density();
    else return kernel_with_density<K>;
}

}  // namespace dsy

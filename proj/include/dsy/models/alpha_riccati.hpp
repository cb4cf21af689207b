#pragma once

#include <utility>

#include "dsy/errors.hpp"
#include "dsy/self_similar.hpp"

namespace dsy::models {

/// Degenerate ratio law R1 = R2 = alpha.
class constant_ratio {
public:
    explicit constant_ratio(double alpha) : alpha_(alpha) { require(alpha > 0.0, "alpha must be positive"); }
    std::pair<double, double> sample(rng::stream&) const { return {alpha_, alpha_}; }
    bool independent() const { return true; }
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Cascade of u'(t) = -u(t) + u^2(alpha t): lambda(x) = x and every child of
/// x sits at alpha x, so X_v = alpha^{|v|} a. Explosive iff alpha > 1;
/// alpha = 1 is the standard Yule cascade.
using alpha_riccati = self_similar_kernel<constant_ratio>;

inline alpha_riccati make_alpha_riccati_kernel(double alpha) {
    return alpha_riccati(constant_ratio(alpha), 1.0, state_space::positive_real);
}

}  // namespace dsy::models

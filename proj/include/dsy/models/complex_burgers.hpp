#pragma once

#include <utility>
#include <vector>

#include "dsy/self_similar.hpp"

namespace dsy::models {

/// Ratios uniform on (0, 1). The two children use independent uniforms.
class uniform_ratio {
public:
    std::pair<double, double> sample(rng::stream& s) const {
        const double u1 = s.uniform();
        return {u1, s.uniform()};
    }
    bool independent() const { return true; }
    double density(double r) const { return r > 0.0 && r < 1.0 ? 1.0 : 0.0; }
    std::vector<double> breakpoints() const { return {1.0}; }
};

using complex_burgers = self_similar_kernel<uniform_ratio>;

inline complex_burgers make_complex_burgers_kernel() { return complex_burgers(uniform_ratio{}, 2.0); }

}  // namespace dsy::models

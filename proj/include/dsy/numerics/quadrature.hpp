#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "dsy/errors.hpp"

namespace dsy::numerics {

struct quadrature_result {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct quadrature_options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the center.
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct segment {
    double a, b, value, error;
    bool operator<(const segment& o) const { return error < o.error; }
};

template <class F>
segment gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kronrod_w[7];
    double g = fc * gauss_w[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = h * kronrod_x[i];
        const double s = f(c - dx) + f(c + dx);
        k += kronrod_w[i] * s;
        if (i % 2 == 1) g += gauss_w[i / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

template <class F>
quadrature_result adaptive_finite(F& f, double a, double b, const quadrature_options& opt) {
    quadrature_result r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    std::priority_queue<segment> heap;
    const segment first = gk15(f, a, b);
    r.evaluations = 15;
    double value = first.value;
    double error = first.error;
    heap.push(first);
    while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) && heap.size() < opt.max_intervals) {
        const segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        // Interval can no longer be split in floating point.
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
        heap.pop();
        const segment left = gk15(f, worst.a, mid);
        const segment right = gk15(f, mid, worst.b);
        r.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    r.value = value;
    r.abs_error_estimate = error;
    r.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    return r;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) quadrature on [a, b]. Infinite limits are
/// mapped onto finite intervals by x = a + s(1-t)/t. Integrable endpoint
/// singularities are handled by repeated bisection toward them.
template <class F>
quadrature_result integrate(F&& f, double a, double b, const quadrature_options& opt = {}) {
    require(!(std::isnan(a) || std::isnan(b)), "integrate: NaN limit");
    if (a > b) {
        auto r = integrate(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (lo_inf && hi_inf) {
        auto left = integrate(f, a, 0.0, opt);
        auto right = integrate(f, 0.0, b, opt);
        return {left.value + right.value, left.abs_error_estimate + right.abs_error_estimate,
                left.evaluations + right.evaluations, left.converged && right.converged};
    }
    // The tail maps to t near 0, where doubles are dense enough to resolve
    // algebraic decay; s matches the map to the scale of the finite limit.
    if (hi_inf) {
        const double s = std::max(1.0, std::abs(a));
        auto g = [&](double t) { return t > 0.0 ? f(a + s * (1.0 - t) / t) * s / (t * t) : 0.0; };
        return detail::adaptive_finite(g, 0.0, 1.0, opt);
    }
    if (lo_inf) {
        const double s = std::max(1.0, std::abs(b));
        auto g = [&](double t) { return t > 0.0 ? f(b - s * (1.0 - t) / t) * s / (t * t) : 0.0; };
        return detail::adaptive_finite(g, 0.0, 1.0, opt);
    }
    auto g = [&](double x) { return f(x); };
    return detail::adaptive_finite(g, a, b, opt);
}

/// As integrate(), splitting [a, b] at the given interior points first.
/// Tolerances are shared evenly between the pieces.
template <class F>
quadrature_result integrate(F&& f, double a, double b, std::vector<double> breakpoints,
                            const quadrature_options& opt = {}) {
    std::erase_if(breakpoints, [&](double p) { return !(p > a && p < b); });
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    std::vector<double> cuts{a};
    cuts.insert(cuts.end(), breakpoints.begin(), breakpoints.end());
    cuts.push_back(b);
    quadrature_options piece = opt;
    piece.abs_tol = opt.abs_tol / static_cast<double>(cuts.size() - 1);
    quadrature_result total{0.0, 0.0, 0, true};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto r = integrate(f, cuts[i], cuts[i + 1], piece);
        total.value += r.value;
        total.abs_error_estimate += r.abs_error_estimate;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

/// Integral over the triangle {phi1 > 0, phi2 > 0, phi1 + phi2 < pi}, mapped
/// to the unit square by phi1 + phi2 = pi*s, phi2 = pi*s*t (Jacobian
/// pi^2 s) and integrated as nested adaptive 1-D rules.
template <class F>
quadrature_result integrate_triangle(F&& f, const quadrature_options& opt = {}) {
    constexpr double pi = std::numbers::pi;
    quadrature_options inner_opt = opt;
    inner_opt.abs_tol = opt.abs_tol * 0.1;
    inner_opt.rel_tol = opt.rel_tol * 0.1;
    std::size_t evaluations = 0;
    bool inner_ok = true;
    double inner_error = 0.0;
    auto outer = [&](double s) {
        auto inner = [&](double t) {
            const double phi2 = pi * s * t;
            const double phi1 = pi * s - phi2;
            return f(phi1, phi2);
        };
        const auto r = integrate(inner, 0.0, 1.0, inner_opt);
        evaluations += r.evaluations;
        inner_ok = inner_ok && r.converged;
        inner_error = std::max(inner_error, r.abs_error_estimate);
        return pi * pi * s * r.value;
    };
    auto r = integrate(outer, 0.0, 1.0, opt);
    r.evaluations = evaluations;
    r.abs_error_estimate += pi * pi * inner_error;
    r.converged = r.converged && inner_ok;
    return r;
}

/// Throws convergence_error unless the result met its tolerance.
inline quadrature_result require_converged(quadrature_result r, const std::string& what) {
    if (!r.converged)
        throw convergence_error(what + ": quadrature did not converge (error estimate " +
                                std::to_string(r.abs_error_estimate) + ")");
    return r;
}

}  // namespace dsy::numerics

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/numerics/quadrature.hpp"

namespace dsy::numerics {

/// A union of disjoint intervals, limits possibly infinite.
struct region {
    struct piece {
        double lo;
        double hi;
    };
    std::vector<piece> pieces;

    bool contains(double x) const {
        for (const auto& p : pieces)
            if (x > p.lo && x < p.hi) return true;
        return false;
    }

    template <class F>
    quadrature_result integrate_over(F&& f, std::vector<double> breakpoints = {},
                                     const quadrature_options& opt = {}) const {
        quadrature_result total{0.0, 0.0, 0, true};
        for (const auto& p : pieces) {
            const auto r = integrate(f, p.lo, p.hi, breakpoints, opt);
            total.value += r.value;
            total.abs_error_estimate += r.abs_error_estimate;
            total.evaluations += r.evaluations;
            total.converged = total.converged && r.converged;
        }
        return total;
    }
};

struct grid_witness {
    double x;
    double y;
    double lhs;
    double rhs;
};

struct domination1_input {
    std::function<double(double, double)> p;
    std::function<double(double)> phi1;
    std::function<double(double)> phi2;
    /// phi1(x) phi2(x), when the factors overflow separately.
    std::function<double(double)> product;
    /// S_b, on which p <= phi1 phi2 is required and phi2, phi1 phi2 must be integrable.
    region s_b;
    /// S_c, the tail region whose phi1 phi2 mass gives 1/r.
    region s_c;
    /// Grid nodes per axis for the pointwise check, restricted to S_b.
    std::vector<double> grid;
    /// Relative slack allowed in p <= (1 + tol) phi1 phi2.
    double tol = 0.0;
    std::vector<double> breakpoints;
};

struct domination1_report {
    std::size_t grid_points = 0;
    std::size_t violations = 0;
    std::optional<grid_witness> witness;
    double max_ratio = 0.0;
    quadrature_result phi2_mass;
    quadrature_result product_mass_b;
    quadrature_result product_mass_c;
    /// r = 1 / int_{S_c} phi1 phi2.
    double r = 0.0;
    bool r_above_two = false;
    bool passed() const { return violations == 0 && phi2_mass.converged && product_mass_b.converged && r_above_two; }
};

/// Product-envelope criterion: p(x, y) <= phi1(x) phi2(y) on S_b x S_b,
/// phi2 and phi1 phi2 integrable on S_b, and r = 1/int_{S_c} phi1 phi2 > 2.
inline domination1_report check_domination_criterion1(const domination1_input& in) {
    require(static_cast<bool>(in.p) && static_cast<bool>(in.phi1) && static_cast<bool>(in.phi2),
            "domination criterion: p, phi1 and phi2 are required");
    domination1_report rep;
    for (double x : in.grid) {
        if (!in.s_b.contains(x)) continue;
        for (double y : in.grid) {
            if (!in.s_b.contains(y)) continue;
            ++rep.grid_points;
            const double lhs = in.p(x, y);
            const double rhs = in.phi1(x) * in.phi2(y);
            if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
            if (lhs > rhs * (1.0 + in.tol)) {
                if (!rep.witness) rep.witness = grid_witness{x, y, lhs, rhs};
                ++rep.violations;
            }
        }
    }
    auto product = [&](double x) { return in.product ? in.product(x) : in.phi1(x) * in.phi2(x); };
    const quadrature_options opt{1e-10, 1e-8, 8000};
    rep.phi2_mass = in.s_b.integrate_over(in.phi2, in.breakpoints, opt);
    rep.product_mass_b = in.s_b.integrate_over(product, in.breakpoints, opt);
    rep.product_mass_c = in.s_c.integrate_over(product, in.breakpoints, opt);
    rep.r = rep.product_mass_c.value > 0.0 ? 1.0 / rep.product_mass_c.value : std::numeric_limits<double>::infinity();
    rep.r_above_two = rep.product_mass_c.converged && rep.r > 2.0;
    return rep;
}

struct domination2_input {
    std::function<double(double, double)> p;
    std::function<double(double)> gamma;
    std::function<double(double)> psi1;
    std::function<double(double)> psi2;
    double c1 = 2.0;
    double c2 = 2.0;
    double alpha = 5.0;
    /// Grid on (c1, grid_max] for hypotheses (ii)-(iv).
    std::vector<double> grid;
    /// Relative slack for (ii) and (iv); (iii) is checked with `tol_iii`.
    double tol = 1e-12;
    double tol_iii = 0.0;
    /// Reversibility grid tolerance (relative) on (0, grid_max].
    double reversibility_tol = 1e-10;
};

struct hypothesis_check {
    std::size_t points = 0;
    std::size_t violations = 0;
    std::optional<grid_witness> witness;
    bool passed() const { return points > 0 && violations == 0; }
};

struct domination2_report {
    hypothesis_check reversibility;  // (i) gamma(x) p(x, y) = gamma(y) p(y, x)
    hypothesis_check bound_ii;       // p(x, y) <= psi1(x) gamma(y), x, y > c1
    hypothesis_check bound_iii;      // p(x, y) <= c2 / y, c1 < y < x
    hypothesis_check bound_iv;       // p(x, y) <= psi2(y - x) / x, c1 < x < y
    bool alpha_admissible = false;   // alpha > 2 c2
    quadrature_result psi2_moment;   // int psi2(x) x^alpha
    quadrature_result gamma_moment;  // int gamma(x) x^alpha
    quadrature_result psi2_mass;     // int psi2
    /// Implied decay rate range (2, alpha/c2) and the threshold c for its midpoint.
    double r_max = 0.0;
    double r = 0.0;
    double threshold_c = 0.0;
    bool passed() const {
        return reversibility.passed() && bound_ii.passed() && bound_iii.passed() && bound_iv.passed() &&
               alpha_admissible && psi2_moment.converged && gamma_moment.converged &&
               std::isfinite(psi2_moment.value) && std::isfinite(gamma_moment.value);
    }
};

/// Reversible-domination criterion, hypotheses (i)-(v), checked on a grid
/// with moment integrals by quadrature.
inline domination2_report check_domination_criterion2(const domination2_input& in) {
    domination2_report rep;
    auto note = [](hypothesis_check& h, bool ok, double x, double y, double lhs, double rhs) {
        ++h.points;
        if (!ok) {
            ++h.violations;
            if (!h.witness) h.witness = grid_witness{x, y, lhs, rhs};
        }
    };
    for (double x : in.grid) {
        for (double y : in.grid) {
            if (x == y) continue;
            const double pxy = in.p(x, y);
            const double fwd = in.gamma(x) * pxy;
            const double bwd = in.gamma(y) * in.p(y, x);
            note(rep.reversibility, std::abs(fwd - bwd) <= in.reversibility_tol * std::max(std::abs(fwd), std::abs(bwd)),
                 x, y, fwd, bwd);
            if (x > in.c1 && y > in.c1) {
                const double rhs = in.psi1(x) * in.gamma(y);
                note(rep.bound_ii, pxy <= rhs * (1.0 + in.tol), x, y, pxy, rhs);
            }
            if (in.c1 < y && y < x) {
                const double rhs = in.c2 / y;
                note(rep.bound_iii, pxy <= rhs * (1.0 + in.tol_iii), x, y, pxy, rhs);
            }
            if (in.c1 < x && x < y) {
                const double rhs = in.psi2(y - x) / x;
                note(rep.bound_iv, pxy <= rhs * (1.0 + in.tol), x, y, pxy, rhs);
            }
        }
    }
    rep.alpha_admissible = in.alpha > 2.0 * in.c2;
    const double a = in.alpha;
    const quadrature_options opt{1e-12, 1e-12, 4000};
    rep.psi2_moment = integrate([&](double x) { return in.psi2(x) * std::pow(x, a); }, 0.0,
                                std::numeric_limits<double>::infinity(), opt);
    rep.gamma_moment = integrate([&](double x) { return in.gamma(x) * std::pow(x, a); }, 0.0,
                                 std::numeric_limits<double>::infinity(), opt);
    rep.psi2_mass = integrate(in.psi2, 0.0, std::numeric_limits<double>::infinity(), opt);
    rep.r_max = a / in.c2;
    if (rep.alpha_admissible) {
        rep.r = 0.5 * (2.0 + rep.r_max);
        rep.threshold_c = std::max(in.c1, std::pow(2.0, a - 1.0) * rep.r *
                                              (rep.psi2_mass.value + rep.psi2_moment.value) /
                                              (1.0 - in.c2 * rep.r / a));
    }
    return rep;
}

}  // namespace dsy::numerics

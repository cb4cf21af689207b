#pragma once

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsy/errors.hpp"
#include "dsy/kernel.hpp"
#include "dsy/models/alpha_riccati.hpp"
#include "dsy/models/bessel_nse3.hpp"
#include "dsy/models/birth_death.hpp"
#include "dsy/models/complex_burgers.hpp"
#include "dsy/models/geometric_like.hpp"
#include "dsy/models/kpp_fourier.hpp"
#include "dsy/models/mean_field.hpp"
#include "dsy/models/nse_selfsimilar.hpp"
#include "dsy/numerics/densities.hpp"

namespace dsy::models {

enum class verdict { explosive, non_explosive, open };

inline const char* to_string(verdict v) {
    switch (v) {
        case verdict::explosive: return "explosive";
        case verdict::non_explosive: return "non-explosive";
        case verdict::open: return "open";
    }
    return "unknown";
}

struct regime {
    std::string region;
    verdict expected;
    /// The criterion behind the verdict, in words.
    std::string basis;
};

/// Greedy-path contraction: E_a[1/Z] <= kappa / lambda(a), giving
/// E_a zeta <= 1 / (lambda(a) (1 - kappa)).
struct greedy_contraction {
    double kappa;
    double bound(double lambda_a) const { return 1.0 / (lambda_a * (1.0 - kappa)); }
};

/// Avoidance decay I_n(a, A) <= psi(a) r^{-n} with A = {x <= threshold}.
struct cutset_recurrence {
    double threshold;
    std::function<double(double)> psi;
    double r;
    /// sup of psi over A, when bounded.
    std::optional<double> psi_bound;
};

using parameter_map = std::map<std::string, std::string>;

struct catalog_entry {
    catalog_entry(std::string name, any_kernel kernel, parameter_map parameters, std::vector<regime> regimes,
                  verdict expected)
        : name(std::move(name)),
          kernel(std::move(kernel)),
          parameters(std::move(parameters)),
          known_regimes(std::move(regimes)),
          expected(expected) {}

    std::string name;
    any_kernel kernel;
    parameter_map parameters;
    std::vector<regime> known_regimes;
    /// Verdict for the parameters actually used.
    verdict expected;
    double default_initial_state = 1.0;
    std::optional<greedy_contraction> greedy;
    std::optional<cutset_recurrence> recurrence;
};

namespace detail {

inline double number(const parameter_map& p, const std::string& key, double fallback) {
    const auto it = p.find(key);
    if (it == p.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw precondition_error("parameter '" + key + "' is not a number: '" + it->second + "'");
    }
}

inline std::string text(const parameter_map& p, const std::string& key, const std::string& fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline std::string fmt(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace detail

inline catalog_entry make_alpha_riccati(double alpha) {
    require(alpha > 0.0, "alpha_riccati: alpha must be positive");
    catalog_entry e{"alpha_riccati",
                    any_kernel(make_alpha_riccati_kernel(alpha)),
                    {{"alpha", detail::fmt(alpha)}},
                    {{"alpha > 1", verdict::explosive, "greedy path with E_a[1/Z] = 1/(alpha a)"},
                     {"0 < alpha <= 1", verdict::non_explosive, "pure birth with bounded rates along every path"}},
                    alpha > 1.0 ? verdict::explosive : verdict::non_explosive};
    if (alpha > 1.0) e.greedy = greedy_contraction{1.0 / alpha};
    return e;
}

inline catalog_entry make_standard_yule() {
    auto e = make_alpha_riccati(1.0);
    e.name = "standard_yule";
    return e;
}

inline catalog_entry make_mean_field(state_law law) {
    catalog_entry e{"mean_field",
                    any_kernel(mean_field(law)),
                    {{"law", law.name()}},
                    {{"P(X > c) < 1/2 for some c", verdict::non_explosive,
                      "cutset recurrence with psi = 1, r = 1/P(X > c)"}},
                    verdict::open};
    // The best threshold is the smallest c with tail below 1/2.
    double c = 0.0;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        if (law.tail(t) < 0.5) {
            c = t;
            break;
        }
        c = t;
    }
    const double q = law.tail(c);
    if (q < 0.5) {
        e.expected = verdict::non_explosive;
        e.recurrence = cutset_recurrence{c, [](double) { return 1.0; }, q > 0.0 ? 1.0 / q : INFINITY, 1.0};
    }
    return e;
}

inline catalog_entry make_geometric_like() {
    catalog_entry e{"geometric_like",
                    any_kernel(geometric_like{}),
                    {},
                    {{"all initial states", verdict::non_explosive, "cutset recurrence with psi = 1, r = e, A = (0, 1]"}},
                    verdict::non_explosive};
    e.recurrence = cutset_recurrence{1.0, [](double) { return 1.0; }, std::numbers::e, 1.0};
    return e;
}

inline catalog_entry make_birth_death(double delta, double b) {
    const birth_death k(delta, b);
    const double lo = 1.0 / std::sqrt(2.0);
    const double hi = (2.0 + std::sqrt(3.0)) / 4.0;
    const verdict v = delta < lo ? verdict::explosive : delta > hi ? verdict::non_explosive : verdict::open;
    catalog_entry e{"birth_death",
                    any_kernel(k),
                    {{"delta", detail::fmt(delta)}, {"b", detail::fmt(b)}},
                    {{"0 < delta < 1/sqrt(2), lambda = b^k", verdict::explosive,
                      "greedy path contraction, any initial state"},
                     {"(2 + sqrt(3))/4 < delta < 1, any lambda", verdict::non_explosive,
                      "cutset recurrence with r = 1/(2 sqrt(delta (1 - delta)))"},
                     {"1/sqrt(2) <= delta <= (2 + sqrt(3))/4", verdict::open, "not settled; explosion is a 0-1 event"}},
                    v};
    if (k.greedy_bound_applies()) e.greedy = greedy_contraction{k.greedy_kappa()};
    if (k.cutset_rate() > 2.0) {
        const double rr = k.cutset_rate();
        const double beta = 1.0 - delta;
        const double rho = 2.0 * std::sqrt(beta * delta);
        // A = {1}; psi(a) = a (delta/beta)^{(a-1)/2} rho / (1 - rho).
        e.recurrence = cutset_recurrence{
            1.0, [=](double a) { return a * std::pow(delta / beta, 0.5 * (a - 1.0)) * rho / (1.0 - rho); }, rr,
            std::nullopt};
    }
    return e;
}

inline catalog_entry make_kpp_fourier() {
    return catalog_entry{"kpp_fourier",
            any_kernel(kpp_fourier{}),
            {},
            {{"all initial frequencies", verdict::non_explosive, "domination by a product envelope with r > 2"}},
            verdict::non_explosive};
}

inline catalog_entry make_bessel_nse3() {
    return catalog_entry{"bessel_nse3",
            any_kernel(bessel_nse3{}),
            {},
            {{"all initial magnitudes", verdict::non_explosive,
              "reversible domination with psi1 = (e^{2x}-1)/(4x), psi2 = e^{-2x}, c1 = c2 = 2, alpha = 5"}},
            verdict::non_explosive};
}

inline catalog_entry make_nse_selfsimilar(int d) {
    require(d >= 3, "nse_selfsimilar: d must be an integer >= 3");
    const verdict v = d == 3 ? verdict::explosive : d >= 12 ? verdict::non_explosive : verdict::open;
    catalog_entry e{"nse_selfsimilar",
                    any_kernel(make_nse_selfsimilar_kernel(d)),
                    {{"d", std::to_string(d)}},
                    {{"d = 3", verdict::explosive, "greedy path with kappa_3 = E[R_max^-2] = 8/pi^2 < 1"},
                     {"d >= 12", verdict::non_explosive, "i.i.d. ratios with alpha_d = E[R^{(d-3)/2}] < 1/2"},
                     {"4 <= d <= 11", verdict::open, "kappa_d >= 1 for d >= 4 and alpha_d >= 1/2 for d <= 11"}},
                    v};
    if (d == 3) e.greedy = greedy_contraction{numerics::kappa_d(3)};
    return e;
}

inline catalog_entry make_complex_burgers() {
    return catalog_entry{"complex_burgers",
            any_kernel(make_complex_burgers_kernel()),
            {},
            {{"all initial magnitudes", verdict::non_explosive, "i.i.d. uniform ratios with E[R^2] = 1/3 < 1/2"}},
            verdict::non_explosive};
}

inline std::vector<std::string> model_names() {
    return {"alpha_riccati", "standard_yule", "mean_field",      "geometric_like", "birth_death",
            "kpp_fourier",   "bessel_nse3",   "nse_selfsimilar", "complex_burgers"};
}

/// Builds a catalog entry from a name and string parameters. Unknown names
/// and unknown or malformed parameters are rejected.
inline catalog_entry make_model(const std::string& name, const parameter_map& params = {}) {
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : params) {
            bool ok = false;
            for (const char* a : keys) ok = ok || k == a;
            if (!ok) throw precondition_error("model '" + name + "' has no parameter '" + k + "'");
        }
    };
    using detail::number;
    if (name == "alpha_riccati") {
        allow({"alpha"});
        return make_alpha_riccati(number(params, "alpha", 2.0));
    }
    if (name == "standard_yule") {
        allow({});
        return make_standard_yule();
    }
    if (name == "mean_field") {
        allow({"law", "rate", "lo", "hi", "value"});
        const auto law = detail::text(params, "law", "exponential");
        catalog_entry e = [&] {
            if (law == "exponential") return make_mean_field(state_law::exponential(number(params, "rate", 1.0)));
            if (law == "uniform")
                return make_mean_field(state_law::uniform(number(params, "lo", 0.0), number(params, "hi", 1.0)));
            if (law == "degenerate") return make_mean_field(state_law::degenerate(number(params, "value", 1.0)));
            throw precondition_error("mean_field: unknown law '" + law + "'");
        }();
        for (const auto& [k, v] : params) e.parameters[k] = v;
        return e;
    }
    if (name == "geometric_like") {
        allow({});
        return make_geometric_like();
    }
    if (name == "birth_death") {
        allow({"delta", "b"});
        auto e = make_birth_death(number(params, "delta", 0.95), number(params, "b", 2.0));
        e.default_initial_state = 1.0;
        return e;
    }
    if (name == "kpp_fourier") {
        allow({});
        return make_kpp_fourier();
    }
    if (name == "bessel_nse3") {
        allow({});
        return make_bessel_nse3();
    }
    if (name == "nse_selfsimilar") {
        allow({"d"});
        const double d = number(params, "d", 3.0);
        require(d == std::floor(d) && d >= 3.0 && d <= 1000.0, "nse_selfsimilar: d must be an integer >= 3");
        return make_nse_selfsimilar(static_cast<int>(d));
    }
    if (name == "complex_burgers") {
        allow({});
        return make_complex_burgers();
    }
    throw precondition_error("unknown model '" + name + "'");
}

}  // namespace dsy::models

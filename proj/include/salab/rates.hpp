// rates.hpp
// Exact rate exponents n^p (log* n)^q of the worked eigenvalue families, in rationals.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "salab/rational.hpp"

namespace salab {

struct RateParams {
    Rational gamma{4};
    Rational psi{11};
    std::optional<Rational> alpha;  // example 1/2
    std::optional<Rational> beta;   // example 1/2
    std::optional<Rational> b;      // example 3/4
    std::optional<Rational> tau;    // example 5
};

struct RateRegime {
    std::string name;
    Rational n_power;
    Rational log_power;
    std::string formula;
};

struct RateReport {
    int example_id = 0;
    std::vector<RateRegime> regimes;
    RateRegime dominant;                  // largest order among applicable regimes
    std::map<std::string, Rational> aux;  // r, delta, rho, mu, eps
    bool window_ok = true;                // gamma < 2(b - 1 + 2 psi) for examples 3/4
    std::string status = "ok";            // or "condition regime only"
};

namespace detail {

inline void check_common(const RateParams& p) {
    if (!(p.psi > Rational(21, 2) && p.psi <= Rational(11))) throw std::invalid_argument("psi must lie in (21/2, 11]");
    if (!(p.gamma > Rational(2))) throw std::invalid_argument("gamma must be > 2");
}

inline const Rational& need(const std::optional<Rational>& v, const char* name, int ex) {
    if (!v) throw std::invalid_argument("example " + std::to_string(ex) + " needs parameter " + name);
    return *v;
}

inline bool order_less(const RateRegime& a, const RateRegime& b) {
    return a.n_power != b.n_power ? a.n_power < b.n_power : a.log_power < b.log_power;
}

}  // namespace detail

inline RateReport asymptotic_rate(int example_id, const RateParams& p) {
    detail::check_common(p);
    const Rational g = p.gamma, psi = p.psi;
    const Rational one{1}, two{2};
    RateReport out;
    out.example_id = example_id;
    switch (example_id) {
        case 1: {
            const Rational& beta = detail::need(p.beta, "beta", 1);
            if (!(beta > Rational(0))) throw std::invalid_argument("beta must be positive");
            out.regimes.push_back({"thm9", (two + g) / Rational(4), psi * g / (two * beta),
                                   "n^((2+gamma)/4) (log* n)^(psi*gamma/(2*beta))"});
            break;
        }
        case 2: {
            const Rational& beta = detail::need(p.beta, "beta", 2);
            if (!(beta > Rational(0))) throw std::invalid_argument("beta must be positive");
            out.regimes.push_back({"thm6-K", one, (two * psi + one) * g / (two * beta),
                                   "n (log* n)^((2*psi+1)*gamma/(2*beta))"});
            break;
        }
        case 3: {
            const Rational& b = detail::need(p.b, "b", 3);
            if (!(b > one)) throw std::invalid_argument("b must be > 1");
            const Rational r = (b - one) / (two * b - one + two * psi);
            const Rational delta = two * (b - one) / (two * b + g);
            out.aux.emplace("r", r);
            out.aux.emplace("delta", delta);
            out.window_ok = g < two * (b - one + two * psi);
            out.regimes.push_back({"balanced", (g - r * (g - two)) / two, Rational(0), "n^((gamma - r(gamma-2))/2)"});
            out.regimes.push_back({"condition", (g - delta * (g - two)) / two, delta * g * (g + one) / two,
                                   "n^((gamma - delta(gamma-2))/2) (log* n)^(delta*gamma*(gamma+1)/2)"});
            break;
        }
        case 4: {
            const Rational& b = detail::need(p.b, "b", 4);
            if (!(b > one)) throw std::invalid_argument("b must be > 1");
            const Rational rho = (b - one) / (b + two * psi);
            const Rational mu = two * (b - one) / (two + g);
            out.aux.emplace("rho", rho);
            out.aux.emplace("mu", mu);
            out.window_ok = g < two * (b - one + two * psi);
            out.regimes.push_back({"balanced", (g - rho * (g - two)) / two, Rational(0), "n^((gamma - rho(gamma-2))/2)"});
            out.regimes.push_back({"condition", (g - mu * (g - two)) / two, mu * g * (g + one) / two,
                                   "n^((gamma - mu(gamma-2))/2) (log* n)^(mu*gamma*(gamma+1)/2)"});
            break;
        }
        case 5: {
            const Rational& tau = detail::need(p.tau, "tau", 5);
            if (!(tau > Rational(0))) throw std::invalid_argument("tau must be positive");
            out.aux.emplace("eps", (g - two) / (g * (g + Rational(22))));
            out.regimes.push_back({"thm9", g / two, -(tau * g) / two, "(n / (log* n)^tau)^(gamma/2)"});
            break;
        }
        default:
            throw std::invalid_argument("example id must be 1..5");
    }
    if (!out.window_ok) {
        out.status = "condition regime only";
        out.dominant = out.regimes.back();
    } else {
        out.dominant = out.regimes.front();
        for (const auto& reg : out.regimes)
            if (detail::order_less(out.dominant, reg)) out.dominant = reg;
    }
    return out;
}

struct LowerUpperComparison {
    int example_id = 0;
    Rational lower_n_power;
    std::optional<Rational> lower_log_power;  // absent when only the n-power is known
    Rational upper_n_power;
    Rational upper_log_power;
    bool tight = false;
    std::string note;
};

// Lower order (n B_k^2)^(gamma/2) for the lattice construction next to the upper rate.
inline LowerUpperComparison compare_lower_upper(int example_id, const RateParams& p) {
    const RateReport up = asymptotic_rate(example_id, p);
    LowerUpperComparison c;
    c.example_id = example_id;
    c.upper_n_power = up.dominant.n_power;
    c.upper_log_power = up.dominant.log_power;
    switch (example_id) {
        case 1:
            // n sigma_k^2 ~ lambda^2 and B_k^2 ~ sigma_{k+1}^2 up to log factors: no power of n
            c.lower_n_power = Rational(0);
            c.note = "far from the upper bound: the lower order carries no power of n";
            break;
        case 3:
            // k ~ n^(1/b), B_k^2 ~ n^((1-b)/b)
            c.lower_n_power = p.gamma / (Rational(2) * *p.b);
            c.lower_log_power = Rational(0);
            c.note = "k ~ n^(1/b); lower order n^(gamma/(2b))";
            break;
        case 5:
            // k ~ n / (log* n)^(1+tau)
            c.lower_n_power = p.gamma / Rational(2);
            c.lower_log_power = -(*p.tau * p.gamma) / Rational(2);
            c.note = "upper and lower orders coincide: (n/(log* n)^tau)^(gamma/2)";
            break;
        default:
            throw std::invalid_argument("compare_lower_upper: example id must be 1, 3 or 5");
    }
    c.tight = c.lower_log_power && c.lower_n_power == c.upper_n_power && *c.lower_log_power == c.upper_log_power;
    return c;
}

}  // namespace salab

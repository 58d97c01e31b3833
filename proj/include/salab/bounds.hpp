// bounds.hpp
// Right-hand sides of the finite- and infinite-dimensional strong approximation bounds,
// their dimension conditions, and the rules for picking the truncation dimension d.
//
// All "<<" relations carry an unspecified constant; every value here is an order value
// with that constant set to 1. Powers like d^(psi*gamma) are carried in log-space.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "salab/numeric.hpp"
#include "salab/spectrum.hpp"

namespace salab {

// E||D_d^{-1/2} Z^(d)||^gamma as a function of d: either tabulated per d, or
// K * d^(gamma/2) for the uniform constant K = sup_d d^(-gamma/2) E||D_d^{-1/2} Z^(d)||^gamma.
struct WhitenedMoments {
    std::vector<double> per_dim;  // per_dim[d-1]
    std::optional<double> uniform_K;

    std::optional<double> at(std::uint64_t d, double gamma) const {
        if (uniform_K) return *uniform_K * std::pow(static_cast<double>(d), gamma / 2.0);
        if (d >= 1 && d <= per_dim.size()) return per_dim[d - 1];
        return std::nullopt;
    }
};

struct ProblemInstance {
    std::uint64_t n = 1;
    double gamma = 4.0;
    double psi = 11.0;
    Spectrum spectrum;
    double moment_Z = 1.0;                        // E||Z||^gamma
    std::optional<WhitenedMoments> whitened;      // E||D_d^{-1/2} Z^(d)||^gamma
    std::optional<std::vector<double>> tail_moments;  // E||Z^[d]||^gamma, tail_moments[d-1]
    double C_gamma = 1.0;
    // Reject moment_Z < (B_0^2)^(gamma/2) instead of only noting it.
    bool strict_moments = false;

    // Throws std::invalid_argument on out-of-range parameters. Returns advisory notes.
    std::vector<std::string> validate() const {
        std::vector<std::string> notes;
        if (n == 0) throw std::invalid_argument("n must be a positive integer");
        if (!(psi > 10.5 && psi <= 11.0)) throw std::invalid_argument("psi must lie in (10.5, 11]");
        if (!(gamma >= 2.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be >= 2");
        if (!(moment_Z >= 0.0) || !std::isfinite(moment_Z))
            throw std::invalid_argument("moment E||Z||^gamma must be finite and nonnegative");
        if (!(C_gamma >= 0.0) || !std::isfinite(C_gamma)) throw std::invalid_argument("C_gamma must be >= 0");
        if (whitened && whitened->uniform_K && !(*whitened->uniform_K > 0.0))
            throw std::invalid_argument("uniform constant K must be positive");
        const double floor = std::pow(spectrum.total_variance(), gamma / 2.0);
        if (moment_Z < floor * (1.0 - 1e-12)) {
            const std::string msg = "E||Z||^gamma = " + format_double(moment_Z) +
                                    " is below the Lyapunov floor (B_0^2)^(gamma/2) = " + format_double(floor);
            if (strict_moments) throw std::invalid_argument(msg);
            notes.push_back(msg);
        }
        return notes;
    }

    double sigma_sq(std::uint64_t d) const { return spectrum.sigma_sq(d); }
};

enum class ConditionVariant { thm4, thm6, thm9 };

inline const char* to_string(ConditionVariant v) {
    switch (v) {
        case ConditionVariant::thm4: return "thm4";
        case ConditionVariant::thm6: return "thm6";
        case ConditionVariant::thm9: return "thm9";
    }
    return "?";
}

struct ConditionCheck {
    ConditionVariant variant = ConditionVariant::thm9;
    std::uint64_t d = 0;
    bool ok = false;
    LogValue lhs;  // C(gamma) d^(gamma/2) (log* d)^(gamma+1) (moment)^(2/gamma)
    LogValue rhs;  // n^(1-2/gamma), times sigma_d^2 for thm9
};

// Condition under which the d-dimensional coupling applies.
// thm4/thm6 use the whitened moment of Z^(d); thm9 uses E||Z||^gamma and sigma_d^2.
inline ConditionCheck check_condition(ConditionVariant variant, const ProblemInstance& inst, std::uint64_t d) {
    if (d == 0) throw std::invalid_argument("check_condition: d must be >= 1");
    const double g = inst.gamma;
    double moment = 0.0;
    LogValue rhs{(1.0 - 2.0 / g) * std::log(static_cast<double>(inst.n))};
    if (variant == ConditionVariant::thm9) {
        const double s2 = inst.sigma_sq(d);
        if (!(s2 > 0.0)) throw std::invalid_argument("check_condition(thm9): sigma_d^2 must be positive");
        moment = inst.moment_Z;
        rhs = rhs * LogValue::from_linear(s2);
    } else {
        const auto w = inst.whitened ? inst.whitened->at(d, g) : std::nullopt;
        if (!w)
            throw std::invalid_argument(std::string("check_condition(") + to_string(variant) +
                                        "): whitened moment for d=" + std::to_string(d) +
                                        " missing; supply it or use whitened_moment_bound");
        moment = *w;
    }
    const double dd = static_cast<double>(d);
    const LogValue lhs = LogValue::from_linear(inst.C_gamma) * LogValue{g / 2.0 * std::log(dd)} *
                         LogValue::from_linear(log_star(dd)).pow(g + 1.0) *
                         LogValue::from_linear(moment).pow(2.0 / g);
    return {variant, d, lhs.ln <= rhs.ln, lhs, rhs};
}

struct BoundTerm {
    std::string name;
    LogValue value;
};

struct BoundReport {
    std::string theorem;
    std::uint64_t d = 0;  // 0: no coupling, trivial moment bound
    bool condition_ok = true;
    std::optional<ConditionCheck> condition;
    std::vector<BoundTerm> terms;
    std::vector<BoundTerm> factors;  // named multiplicative pieces, e.g. A
    LogValue total;
    double C_gamma = 1.0;
    std::vector<std::string> notes;

    bool overflow() const {
        if (total.exceeds_1e300()) return true;
        for (const auto& t : terms)
            if (t.value.exceeds_1e300()) return true;
        return false;
    }
};

namespace detail {

inline void finish(BoundReport& r) {
    r.total = LogValue{};
    for (const auto& t : r.terms) r.total = r.total + t.value;
    r.notes.emplace_back("order value: implied constants set to 1");
    if (r.overflow()) r.notes.emplace_back("magnitude above 1e300: use the log10 fields");
}

inline LogValue ln_pow(double base, double e) { return LogValue::from_linear(base).pow(e); }

inline void require_positive_sigma(const ProblemInstance& inst, std::uint64_t d, const char* who) {
    if (d == 0) throw std::invalid_argument(std::string(who) + ": d must be >= 1");
    if (!(inst.sigma_sq(d) > 0.0))
        throw std::invalid_argument(std::string(who) + ": sigma_d^2 must be positive (d beyond support)");
}

}  // namespace detail

// A(gamma, psi, d) = max{ d^(psi gamma), d^(gamma(gamma+2)/4) (log* d)^(gamma(gamma+1)/2) }
inline LogValue factor_A(double gamma, double psi, std::uint64_t d) {
    const double dd = static_cast<double>(d);
    const LogValue first{psi * gamma * std::log(dd)};
    const LogValue second =
        LogValue{gamma * (gamma + 2.0) / 4.0 * std::log(dd)} * detail::ln_pow(log_star(dd), gamma * (gamma + 1.0) / 2.0);
    return first.ln >= second.ln ? first : second;
}

// Finite-dimensional bound A (sigma_1/sigma_d)^gamma n E||Z||^gamma; no dimension condition.
inline BoundReport bound_thm3(const ProblemInstance& inst, std::uint64_t d) {
    detail::require_positive_sigma(inst, d, "bound_thm3");
    BoundReport r;
    r.theorem = "thm3";
    r.d = d;
    r.C_gamma = inst.C_gamma;
    r.notes = inst.validate();
    const double g = inst.gamma;
    const LogValue A = factor_A(g, inst.psi, d);
    const LogValue ratio = detail::ln_pow(inst.sigma_sq(1) / inst.sigma_sq(d), g / 2.0);
    r.factors.push_back({"A", A});
    r.terms.push_back({"A*(sigma_1/sigma_d)^gamma*n*E||Z||^gamma",
                       A * ratio * LogValue::from_linear(static_cast<double>(inst.n)) *
                           LogValue::from_linear(inst.moment_Z)});
    detail::finish(r);
    return r;
}

// d^(psi gamma) (sigma_1/sigma_d)^gamma n E||Z||^gamma + (n B_d^2)^(gamma/2)
inline BoundReport bound_thm9(const ProblemInstance& inst, std::uint64_t d) {
    detail::require_positive_sigma(inst, d, "bound_thm9");
    if (!(inst.gamma > 2.0)) throw std::invalid_argument("bound_thm9: gamma must be > 2");
    BoundReport r;
    r.theorem = "thm9";
    r.d = d;
    r.C_gamma = inst.C_gamma;
    r.notes = inst.validate();
    const double g = inst.gamma;
    const double nn = static_cast<double>(inst.n);
    r.condition = check_condition(ConditionVariant::thm9, inst, d);
    r.condition_ok = r.condition->ok;
    r.terms.push_back({"d^(psi*gamma)*(sigma_1/sigma_d)^gamma*n*E||Z||^gamma",
                       LogValue{inst.psi * g * std::log(static_cast<double>(d))} *
                           detail::ln_pow(inst.sigma_sq(1) / inst.sigma_sq(d), g / 2.0) *
                           LogValue::from_linear(nn) * LogValue::from_linear(inst.moment_Z)});
    r.terms.push_back({"(n*B_d^2)^(gamma/2)", detail::ln_pow(nn * inst.spectrum.tail_variance(d), g / 2.0)});
    detail::finish(r);
    return r;
}

// d^(psi gamma) n sigma_1^gamma E||D_d^{-1/2}Z^(d)||^gamma + n E||Z^[d]||^gamma + (n B_d^2)^(gamma/2)
inline BoundReport bound_thm6(const ProblemInstance& inst, std::uint64_t d) {
    detail::require_positive_sigma(inst, d, "bound_thm6");
    if (!(inst.gamma > 2.0)) throw std::invalid_argument("bound_thm6: gamma must be > 2");
    const double g = inst.gamma;
    const auto w = inst.whitened ? inst.whitened->at(d, g) : std::nullopt;
    if (!w)
        throw std::invalid_argument("bound_thm6: whitened moment for d=" + std::to_string(d) +
                                    " missing; compute one with whitened_moment_bound");
    BoundReport r;
    r.theorem = "thm6";
    r.d = d;
    r.C_gamma = inst.C_gamma;
    r.notes = inst.validate();
    const double nn = static_cast<double>(inst.n);
    const double tail_var = inst.spectrum.tail_variance(d);
    double tail_moment = 0.0;
    if (tail_var > 0.0) {
        if (inst.tail_moments && d <= inst.tail_moments->size()) {
            tail_moment = (*inst.tail_moments)[d - 1];
        } else {
            tail_moment = inst.moment_Z;
            r.notes.emplace_back("E||Z^[d]||^gamma not supplied: bounded by E||Z||^gamma");
        }
    }
    r.condition = check_condition(ConditionVariant::thm6, inst, d);
    r.condition_ok = r.condition->ok;
    r.terms.push_back({"d^(psi*gamma)*n*sigma_1^gamma*E||D_d^(-1/2)Z^(d)||^gamma",
                       LogValue{inst.psi * g * std::log(static_cast<double>(d))} * LogValue::from_linear(nn) *
                           detail::ln_pow(inst.sigma_sq(1), g / 2.0) * LogValue::from_linear(*w)});
    r.terms.push_back({"n*E||Z^[d]||^gamma", LogValue::from_linear(nn) * LogValue::from_linear(tail_moment)});
    r.terms.push_back({"(n*B_d^2)^(gamma/2)", detail::ln_pow(nn * tail_var, g / 2.0)});
    detail::finish(r);
    return r;
}

// No-coupling benchmark: n E||Z||^gamma + (n B_0^2)^(gamma/2).
inline BoundReport trivial_rosenthal_bound(const ProblemInstance& inst) {
    if (!(inst.gamma >= 2.0)) throw std::invalid_argument("trivial_rosenthal_bound: gamma must be >= 2");
    BoundReport r;
    r.theorem = "trivial";
    r.d = 0;
    r.C_gamma = inst.C_gamma;
    r.notes = inst.validate();
    const double nn = static_cast<double>(inst.n);
    r.terms.push_back({"n*E||Z||^gamma", LogValue::from_linear(nn) * LogValue::from_linear(inst.moment_Z)});
    r.terms.push_back({"(n*B_0^2)^(gamma/2)", detail::ln_pow(nn * inst.spectrum.total_variance(), inst.gamma / 2.0)});
    detail::finish(r);
    return r;
}

enum class WhitenedMode { crude, independent };

struct WhitenedBound {
    double value = 0.0;
    double lyapunov_floor = 0.0;  // d^(gamma/2) <= true whitened moment
};

// crude:       sigma_d^-gamma E||Z||^gamma
// independent: d^(gamma/2) + sum_{m<=d} sigma_m^-gamma E|Z_m|^gamma, given those ratios per coordinate
inline WhitenedBound whitened_moment_bound(const ProblemInstance& inst, std::uint64_t d, WhitenedMode mode,
                                           std::span<const double> coordinate_ratios = {}) {
    if (d == 0) throw std::invalid_argument("whitened_moment_bound: d must be >= 1");
    const double g = inst.gamma;
    const double s2 = inst.sigma_sq(d);
    if (!(s2 > 0.0)) throw std::invalid_argument("whitened_moment_bound: sigma_d = 0");
    WhitenedBound out;
    out.lyapunov_floor = std::pow(static_cast<double>(d), g / 2.0);
    if (mode == WhitenedMode::crude) {
        out.value = std::pow(s2, -g / 2.0) * inst.moment_Z;
        return out;
    }
    if (coordinate_ratios.size() < d)
        throw std::invalid_argument("whitened_moment_bound(independent): need E|Z_m|^gamma / sigma_m^gamma for m <= d");
    double sum = 0.0;
    for (std::uint64_t m = 0; m < d; ++m) sum += coordinate_ratios[m];
    out.value = out.lyapunov_floor + sum;
    return out;
}

// One-dimensional Rosenthal-type quantity L_gamma = sum_j E|xi_j|^gamma.
inline double sakhanenko_1d_bound(double gamma, std::span<const double> per_summand_moments) {
    if (!(gamma > 2.0)) throw std::invalid_argument("sakhanenko_1d_bound: gamma must be > 2");
    double s = 0.0;
    for (double v : per_summand_moments) {
        if (!(v >= 0.0)) throw std::invalid_argument("sakhanenko_1d_bound: moments must be nonnegative");
        s += v;
    }
    return s;
}

// ---- dimension selection ----

enum class ExampleRule {
    ex1,           // max{m : n^(2/gamma) (log* n)^(2psi/beta) / sigma_m^2 < n sigma_m^2}
    ex2,           // min{m : n B_m^2 < 1}
    ex3,           // max{m : n^(2/gamma) m^(2psi) / sigma_m^2 < n m sigma_m^2}
    ex3_fallback,  // max{m : C m^(gamma/2) (log* m)^(gamma+1) (E||Z||^gamma)^(2/gamma) <= n^(1-2/gamma) sigma_m^2}
    ex4,           // max{m : n^(2/gamma) m^(2psi+1) < n m sigma_m^2}
    ex4_fallback,  // max{m : C K^(2/gamma) m^(1+gamma/2) (log* m)^(gamma+1) <= n^(1-2/gamma)}
    ex5,           // floor(n^eps), eps = (gamma-2)/(gamma(gamma+22))
};

struct DimensionChoice {
    std::uint64_t d = 0;  // 0: condition fails already at d = 1
    std::string rule;
    std::vector<std::string> notes;
};

inline constexpr std::uint64_t kDefaultScanCap = 1'000'000;

// Largest d whose condition holds. LHS grows and RHS shrinks with d, so the feasible set is a prefix
// and the scan stops at the first failure. d beyond a finite support is infeasible.
inline DimensionChoice select_max_feasible(ConditionVariant variant, const ProblemInstance& inst,
                                           std::uint64_t cap = kDefaultScanCap) {
    DimensionChoice out;
    out.rule = std::string("max-feasible(") + to_string(variant) + ")";
    for (std::uint64_t d = 1;; ++d) {
        if (d > cap)
            throw NumericalDiagnostic("select_dimension: condition still holds at scan cap d=" + std::to_string(cap));
        if (!(inst.sigma_sq(d) > 0.0)) {
            out.notes.emplace_back("scan stopped at the end of the spectrum support");
            break;
        }
        if (variant != ConditionVariant::thm9 && !(inst.whitened && inst.whitened->at(d, inst.gamma))) {
            out.notes.emplace_back("scan stopped: no whitened moment tabulated for d=" + std::to_string(d));
            break;
        }
        if (!check_condition(variant, inst, d).ok) break;
        out.d = d;
    }
    if (out.d == 0) out.notes.emplace_back("condition fails at d=1: fall back to the trivial moment bound");
    return out;
}

namespace detail {

// Largest m >= 1 with pred(m) true, assuming {m : pred} is a prefix; 0 if pred(1) is false.
template <class Pred>
std::uint64_t prefix_max(Pred pred, std::uint64_t cap, const char* what) {
    std::uint64_t d = 0;
    for (std::uint64_t m = 1; pred(m); ++m) {
        if (m > cap) throw NumericalDiagnostic(std::string(what) + ": scan exceeded cap " + std::to_string(cap));
        d = m;
    }
    return d;
}

inline double ln_sigma_sq(const Spectrum& s, std::uint64_t m) {
    const double v = s.sigma_sq(m);
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline DimensionChoice select_example_dimension(ExampleRule rule, const ProblemInstance& inst,
                                                std::uint64_t cap = kDefaultScanCap) {
    const double g = inst.gamma;
    const double psi = inst.psi;
    const double ln_n = std::log(static_cast<double>(inst.n));
    const Spectrum& sp = inst.spectrum;
    DimensionChoice out;
    switch (rule) {
        case ExampleRule::ex1: {
            const auto* e = std::get_if<Spectrum::Exponential>(&sp.family());
            if (e == nullptr) throw std::invalid_argument("example 1 rule needs an exponential spectrum");
            out.rule = "example-formula(1)";
            // sigma_m^4 > n^(2/gamma - 1) (log* n)^(2 psi / beta)
            const double bound = (2.0 / g - 1.0) * ln_n + 2.0 * psi / e->beta * std::log(log_star(static_cast<double>(inst.n)));
            out.d = detail::prefix_max([&](std::uint64_t m) { return 2.0 * detail::ln_sigma_sq(sp, m) > bound; }, cap,
                                       "example 1 rule");
            break;
        }
        case ExampleRule::ex2: {
            out.rule = "example-formula(2)";
            const double nn = static_cast<double>(inst.n);
            auto small = [&](std::uint64_t m) { return nn * sp.tail_variance(m) < 1.0; };
            std::uint64_t hi = 1, lo = 0;
            while (!small(hi)) {
                if (hi >= cap) throw NumericalDiagnostic("example 2 rule: n B_m^2 >= 1 up to the scan cap");
                lo = hi;
                hi = std::min(hi * 2, cap);
            }
            while (hi - lo > 1) {
                const std::uint64_t mid = lo + (hi - lo) / 2;
                (small(mid) ? hi : lo) = mid;
            }
            out.d = hi;
            break;
        }
        case ExampleRule::ex3: {
            out.rule = "example-formula(3)";
            // (2psi - 1) ln m - 2 ln sigma_m^2 < (1 - 2/gamma) ln n
            out.d = detail::prefix_max(
                [&](std::uint64_t m) {
                    return (2.0 * psi - 1.0) * std::log(static_cast<double>(m)) - 2.0 * detail::ln_sigma_sq(sp, m) <
                           (1.0 - 2.0 / g) * ln_n;
                },
                cap, "example 3 rule");
            break;
        }
        case ExampleRule::ex3_fallback: {
            out = select_max_feasible(ConditionVariant::thm9, inst, cap);
            out.rule = "example-formula(3, condition fallback)";
            break;
        }
        case ExampleRule::ex4: {
            out.rule = "example-formula(4)";
            // 2psi ln m - ln sigma_m^2 < (1 - 2/gamma) ln n
            out.d = detail::prefix_max(
                [&](std::uint64_t m) {
                    return 2.0 * psi * std::log(static_cast<double>(m)) - detail::ln_sigma_sq(sp, m) <
                           (1.0 - 2.0 / g) * ln_n;
                },
                cap, "example 4 rule");
            break;
        }
        case ExampleRule::ex4_fallback: {
            if (!(inst.whitened && inst.whitened->uniform_K))
                throw std::invalid_argument("example 4 fallback rule needs the uniform constant K");
            out.rule = "example-formula(4, condition fallback)";
            const double lnK = std::log(*inst.whitened->uniform_K);
            out.d = detail::prefix_max(
                [&](std::uint64_t m) {
                    const double x = static_cast<double>(m);
                    const LogValue lhs = LogValue::from_linear(inst.C_gamma) * LogValue{2.0 / g * lnK} *
                                         LogValue{(1.0 + g / 2.0) * std::log(x)} *
                                         LogValue::from_linear(log_star(x)).pow(g + 1.0);
                    return lhs.ln <= (1.0 - 2.0 / g) * ln_n;
                },
                cap, "example 4 fallback rule");
            break;
        }
        case ExampleRule::ex5: {
            out.rule = "example-formula(5)";
            const double eps = (g - 2.0) / (g * (g + 22.0));
            double d = std::floor(std::exp(eps * ln_n));
            // correct the floor when n^eps sits within rounding of an integer
            while (std::log(d + 1.0) <= eps * ln_n + 1e-13) d += 1.0;
            while (d > 1.0 && std::log(d) > eps * ln_n + 1e-13) d -= 1.0;
            out.d = static_cast<std::uint64_t>(std::max(d, 1.0));
            out.notes.emplace_back("integer part of n^eps, eps = (gamma-2)/(gamma(gamma+22)) = " + format_double(eps));
            break;
        }
    }
    return out;
}

}  // namespace salab

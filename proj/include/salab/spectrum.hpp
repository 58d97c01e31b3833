// spectrum.hpp
// Eigenvalue sequences sigma_m^2 of a diagonal covariance operator and their tail traces
// B_d^2 = sum_{m>d} sigma_m^2.
#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "salab/numeric.hpp"

namespace salab {

// Point value of a tail sum plus the half-width of the integral-comparison bracket that
// certifies the part not summed explicitly. Exact closed forms report half_width 0.
struct TailEstimate {
    double value = 0.0;
    double half_width = 0.0;
};

class Spectrum {
public:
    // sigma_m^2 = exp(-alpha m^beta)
    struct Exponential {
        double alpha;
        double beta;
    };
    // sigma_m^2 = m^-b, b > 1
    struct Polynomial {
        double b;
    };
    // sigma_m^2 = 1 / (m (log* m)^(1+tau)), tau > 0
    struct Logarithmic {
        double tau;
    };
    // Finite list; coordinates past the end are exactly zero.
    struct Explicit {
        std::vector<double> values;
    };
    using Family = std::variant<Exponential, Polynomial, Logarithmic, Explicit>;

    static Spectrum exponential(double alpha, double beta) {
        if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
            throw std::invalid_argument("exponential spectrum needs alpha > 0 and beta > 0");
        return Spectrum(Exponential{alpha, beta});
    }
    static Spectrum polynomial(double b) {
        if (!(b > 1.0) || !std::isfinite(b))
            throw std::invalid_argument("polynomial spectrum m^-b is summable only for b > 1");
        return Spectrum(Polynomial{b});
    }
    static Spectrum logarithmic(double tau) {
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw std::invalid_argument("logarithmic spectrum is summable only for tau > 0");
        return Spectrum(Logarithmic{tau});
    }
    static Spectrum explicit_values(std::vector<double> values) {
        if (values.empty()) throw std::invalid_argument("explicit spectrum needs at least one value");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i]) || values[i] < 0.0)
                throw std::invalid_argument("explicit spectrum values must be finite and nonnegative");
            if (i > 0 && values[i] > values[i - 1])
                throw std::invalid_argument("explicit spectrum must be nonincreasing (entry " +
                                            std::to_string(i + 1) + ")");
        }
        return Spectrum(Explicit{std::move(values)});
    }

    // exp:alpha,beta | poly:b | log:tau | explicit:v1,v2,...
    static Spectrum parse(std::string_view text);

    // Canonical text form; parse(str()) reproduces the spectrum bit-for-bit.
    std::string str() const;

    const Family& family() const { return family_; }

    std::optional<std::uint64_t> support_size() const {
        if (const auto* e = std::get_if<Explicit>(&family_)) return e->values.size();
        return std::nullopt;
    }

    double sigma_sq(std::uint64_t m) const {
        if (m == 0) throw std::invalid_argument("sigma_sq: index starts at 1");
        return std::visit([m](const auto& f) { return eval(f, m); }, family_);
    }
    double sigma(std::uint64_t m) const { return std::sqrt(sigma_sq(m)); }

    TailEstimate tail(std::uint64_t d) const;
    double tail_variance(std::uint64_t d) const { return tail(d).value; }
    double total_variance() const { return tail(0).value; }

    // Every sigma_m^2 multiplied by c_sq. Closed-form families are not closed under scaling,
    // so only explicit spectra support it.
    Spectrum scaled(double c_sq) const {
        const auto* e = std::get_if<Explicit>(&family_);
        if (e == nullptr) throw std::invalid_argument("scaled: only explicit spectra can be rescaled");
        std::vector<double> v = e->values;
        for (double& x : v) x *= c_sq;
        return explicit_values(std::move(v));
    }

private:
    explicit Spectrum(Family f) : family_(std::move(f)) {
        if (const auto* e = std::get_if<Explicit>(&family_)) {
            suffix_.assign(e->values.size() + 1, 0.0);
            for (std::size_t i = e->values.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + e->values[i];
        }
    }

    static double eval(const Exponential& f, std::uint64_t m) {
        return std::exp(-f.alpha * std::pow(static_cast<double>(m), f.beta));
    }
    static double eval(const Polynomial& f, std::uint64_t m) { return std::pow(static_cast<double>(m), -f.b); }
    static double eval(const Logarithmic& f, std::uint64_t m) {
        const double x = static_cast<double>(m);
        return 1.0 / (x * std::pow(log_star(x), 1.0 + f.tau));
    }
    static double eval(const Explicit& f, std::uint64_t m) {
        return m <= f.values.size() ? f.values[m - 1] : 0.0;
    }

    // Continuous extension f(x), its antiderivative tail F(x) = int_x^inf f and f'(x), valid for x >= e.
    struct Smooth {
        double f, F, df;
    };
    Smooth smooth_at(double x) const;

    Family family_;
    std::vector<double> suffix_;
};

inline Spectrum Spectrum::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("spectrum '" + std::string(text) + "': expected kind:params");
    const std::string_view kind = text.substr(0, colon);
    std::string_view rest = text.substr(colon + 1);
    std::vector<double> nums;
    while (true) {
        const auto comma = rest.find(',');
        const std::string tok(rest.substr(0, comma));
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw std::invalid_argument("spectrum '" + std::string(text) + "': bad number '" + tok + "'");
        nums.push_back(v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    auto want = [&](std::size_t k) {
        if (nums.size() != k)
            throw std::invalid_argument("spectrum '" + std::string(text) + "': wrong parameter count");
    };
    if (kind == "exp") {
        want(2);
        return exponential(nums[0], nums[1]);
    }
    if (kind == "poly") {
        want(1);
        return polynomial(nums[0]);
    }
    if (kind == "log") {
        want(1);
        return logarithmic(nums[0]);
    }
    if (kind == "explicit") return explicit_values(std::move(nums));
    throw std::invalid_argument("spectrum kind '" + std::string(kind) + "' unknown (exp, poly, log, explicit)");
}

inline std::string Spectrum::str() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>)
                return "exp:" + format_double(f.alpha) + "," + format_double(f.beta);
            else if constexpr (std::is_same_v<T, Polynomial>)
                return "poly:" + format_double(f.b);
            else if constexpr (std::is_same_v<T, Logarithmic>)
                return "log:" + format_double(f.tau);
            else {
                std::string s = "explicit:";
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    if (i) s += ',';
                    s += format_double(f.values[i]);
                }
                return s;
            }
        },
        family_);
}

inline Spectrum::Smooth Spectrum::smooth_at(double x) const {
    if (const auto* p = std::get_if<Polynomial>(&family_)) {
        const double f = std::pow(x, -p->b);
        return {f, x * f / (p->b - 1.0), -p->b * f / x};
    }
    if (const auto* l = std::get_if<Logarithmic>(&family_)) {
        const double L = std::log(x);
        const double pw = 1.0 + l->tau;
        const double f = 1.0 / (x * std::pow(L, pw));
        return {f, std::pow(L, -l->tau) / l->tau, -f / x * (1.0 + pw / L)};
    }
    const auto& e = std::get<Exponential>(family_);
    const double f = std::exp(-e.alpha * std::pow(x, e.beta));
    const double a = 1.0 / e.beta;
    const double F = boost::math::tgamma(a, e.alpha * std::pow(x, e.beta)) / (e.beta * std::pow(e.alpha, a));
    return {f, F, -e.alpha * e.beta * std::pow(x, e.beta - 1.0) * f};
}

inline TailEstimate Spectrum::tail(std::uint64_t d) const {
    if (const auto* e = std::get_if<Explicit>(&family_)) {
        return {d < e->values.size() ? suffix_[d] : 0.0, 0.0};
    }
    if (const auto* e = std::get_if<Exponential>(&family_); e != nullptr && e->beta == 1.0) {
        // geometric series: e^{-alpha(d+1)} / (1 - e^{-alpha})
        return {std::exp(-e->alpha * static_cast<double>(d + 1)) / -std::expm1(-e->alpha), 0.0};
    }

    // Sum sigma_m^2 for d < m <= cut explicitly, then close with Euler-Maclaurin
    // (F - f/2 - f'/12 at the cut). The certified bracket for the remainder is [F(cut+1), F(cut)].
    std::uint64_t window = 1000;
    if (const auto* e = std::get_if<Exponential>(&family_); e != nullptr && e->beta < 1.0) {
        // keep the f' correction accurate: alpha*beta*cut^(beta-1) <= 0.01
        const double need = std::pow(100.0 * e->alpha * e->beta, 1.0 / (1.0 - e->beta));
        if (need > static_cast<double>(d + window))
            window = static_cast<std::uint64_t>(std::min(need, 1e7)) - d + 1;
    }
    const std::uint64_t cut = d + window;
    double partial = 0.0;
    for (std::uint64_t m = cut; m > d; --m) partial += sigma_sq(m);
    const Smooth at = smooth_at(static_cast<double>(cut));
    const Smooth next = smooth_at(static_cast<double>(cut + 1));
    const double remainder = at.F - 0.5 * at.f - at.df / 12.0;
    return {partial + remainder, 0.5 * (at.F - next.F)};
}

struct Truncation {
    std::uint64_t dim = 0;
    double discarded_mass = 0.0;      // B_D^2
    double discarded_fraction = 0.0;  // B_D^2 / B_0^2
};

// Smallest D with B_D^2 / B_0^2 <= rel_tol. Finite spectra return their length.
inline Truncation truncation_dim(const Spectrum& s, double rel_tol, std::uint64_t cap = 10'000'000) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("truncation_dim: rel_tol must be in (0,1)");
    if (const auto len = s.support_size()) return {*len, 0.0, 0.0};
    const double total = s.total_variance();
    auto ok = [&](std::uint64_t D) { return s.tail_variance(D) <= rel_tol * total; };
    std::uint64_t lo = 0;  // B_0^2 > rel_tol * B_0^2 always
    std::uint64_t hi = 1;
    while (!ok(hi)) {
        if (hi >= cap)
            throw NumericalDiagnostic("truncation_dim: spectrum " + s.str() + " needs more than " +
                                      std::to_string(cap) + " coordinates for rel_tol " + format_double(rel_tol));
        lo = hi;
        hi = std::min(hi * 2, cap);
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    const double mass = s.tail_variance(hi);
    return {hi, mass, total > 0.0 ? mass / total : 0.0};
}

}  // namespace salab

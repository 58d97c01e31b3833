// numeric.hpp
// Scalar helpers shared by every module: log*, the standard normal law,
// and values carried in log-space so that d^(psi*gamma)-sized terms never overflow.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace salab {

// Raised for numerical conditions the caller asked us to detect: scan caps,
// truncation caps, non-finite Monte Carlo samples. Maps to CLI exit code 3.
class NumericalDiagnostic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481;

// log*b = max{1, ln b}
inline double log_star(double b) {
    if (!(b > 0.0)) throw std::invalid_argument("log_star: argument must be positive");
    return std::max(1.0, std::log(b));
}

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

namespace detail {

// Rational approximation of the normal quantile (P. J. Acklam), |rel err| < 1.2e-9
// before refinement. Valid for 0 < p <= 0.5.
inline double acklam_lower(double p) {
    constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                            1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                            6.680131188771972e+01,  -1.328068155288572e+01};
    constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                            -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                            3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Standard normal quantile: rational approximation plus one Newton step on Phi.
// Odd-symmetric by construction, so the upper half never loses precision to 1-p.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("normal_quantile: p outside [0,1]");
    }
    if (p > 0.5) return -normal_quantile(1.0 - p);
    double x = detail::acklam_lower(p);
    const double err = normal_cdf(x) - p;
    x -= err / normal_pdf(x);
    return x;
}

// Nonnegative quantity stored as its natural log; zero is -inf.
struct LogValue {
    double ln = -std::numeric_limits<double>::infinity();

    static LogValue from_linear(double v) {
        if (v < 0.0) throw std::invalid_argument("LogValue: negative value");
        return LogValue{v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v)};
    }
    bool is_zero() const { return std::isinf(ln) && ln < 0.0; }
    double linear() const { return std::exp(ln); }  // inf when above ~1e308
    double log10() const { return ln / std::numbers::ln10; }
    bool exceeds_1e300() const { return ln > 300.0 * std::numbers::ln10; }

    friend LogValue operator*(LogValue a, LogValue b) {
        if (a.is_zero() || b.is_zero()) return LogValue{};
        return LogValue{a.ln + b.ln};
    }
    friend LogValue operator+(LogValue a, LogValue b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double hi = std::max(a.ln, b.ln), lo = std::min(a.ln, b.ln);
        return LogValue{hi + std::log1p(std::exp(lo - hi))};
    }
    LogValue pow(double e) const {
        if (is_zero()) return e == 0.0 ? LogValue{0.0} : LogValue{};
        return LogValue{ln * e};
    }
};

// Shortest round-trip decimal representation; used wherever bit-identical text output matters.
inline std::string format_double(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace salab

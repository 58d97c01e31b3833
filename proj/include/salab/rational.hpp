// rational.hpp
// Exact rationals over int64 with 128-bit intermediates. Every operation
// reduces to lowest terms; anything that does not fit in int64 throws.
#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace salab {

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_integer() const { return den_ == 1; }

    // Accepts "p/q", integers, and plain decimals such as "10.5" (exactly 21/2).
    static Rational parse(std::string_view s);

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                    static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const __int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: int64 overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    void assign(std::int64_t n, std::int64_t d) { *this = make(n, d); }
};

inline Rational Rational::parse(std::string_view s) {
    auto fail = [&] { throw std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'"); };
    auto parse_int = [&](std::string_view t) -> std::int64_t {
        if (t.empty()) fail();
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(std::string(t), &pos);
        } catch (const std::exception&) {
            fail();
        }
        if (pos != t.size()) fail();
        return v;
    };
    if (s.empty()) fail();
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        return Rational(parse_int(s.substr(0, slash)), 1) / Rational(parse_int(s.substr(slash + 1)), 1);
    }
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) return Rational(parse_int(s));
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 17) fail();
    for (char ch : frac)
        if (ch < '0' || ch > '9') fail();
    const bool negative = !whole.empty() && whole.front() == '-';
    if (whole == "-" || whole == "+" || whole.empty()) whole = "0";
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const Rational w(parse_int(whole));
    const Rational f(parse_int(frac), scale);
    return negative ? w - f : w + f;
}

}  // namespace salab

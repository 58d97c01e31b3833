// lowerbound.hpp
// Lattice construction behind the lower bound E(Delta_n)^gamma >> (n B_k^2)^(gamma/2).
//
// Coordinates take values -lambda, 0, lambda with P{+-lambda} = sigma_m^2 / (2 lambda^2), so every
// partial sum S_nm is a multiple of lambda. For the Gaussian partner T_nm, any coupling satisfies
// |S_nm - T_nm| >= eta_nm = |T_nm| 1{|T_nm| <= lambda/2}, and U_nk = sum_{m>k} eta_nm^2 is a
// function of the Gaussian side alone.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "salab/numeric.hpp"
#include "salab/parallel.hpp"
#include "salab/rng.hpp"
#include "salab/simulate.hpp"
#include "salab/spectrum.hpp"

namespace salab {

struct EtaMoments {
    double m2 = 0.0;  // E eta^2
    double m4 = 0.0;  // E eta^4
};

namespace detail {

// int_{-c}^{c} x^(2k) phi(x) dx by its alternating power series; used for c < 1 where the
// closed forms cancel.
inline double truncated_even_moment_series(int k, double c) {
    const double c2 = c * c;
    double term = std::pow(c, 2 * k + 1);  // c^(2k+2j+1) / (2^j j!)
    double sum = 0.0;
    for (int j = 0; j < 60; ++j) {
        const double add = term / (2 * k + 2 * j + 1);
        sum += (j % 2 == 0) ? add : -add;
        if (add < 1e-18 * std::abs(sum)) break;
        term *= c2 / (2.0 * (j + 1));
    }
    return 2.0 * kInvSqrt2Pi * sum;
}

}  // namespace detail

// Moments of eta = |T| 1{|T| <= lambda/2} for T ~ N(0, s_sq). With c = lambda / (2s):
//   E eta^2 = s^2 (2 Phi(c) - 1 - 2 c phi(c))
//   E eta^4 = s^4 (3 (2 Phi(c) - 1) - 2 phi(c) (c^3 + 3c))
inline EtaMoments eta_moments(double s_sq, double lambda) {
    if (!(s_sq > 0.0)) throw std::invalid_argument("eta_moments: variance must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("eta_moments: lambda must be nonnegative");
    const double s = std::sqrt(s_sq);
    const double c = lambda / (2.0 * s);
    double i2 = 0.0, i4 = 0.0;
    if (c < 1.0) {
        i2 = detail::truncated_even_moment_series(1, c);
        i4 = detail::truncated_even_moment_series(2, c);
    } else {
        const double mass = std::erf(c * kInvSqrt2);  // 2 Phi(c) - 1
        const double ph = normal_pdf(c);
        i2 = mass - 2.0 * c * ph;
        i4 = 3.0 * mass - 2.0 * ph * (c * c * c + 3.0 * c);
    }
    return {s_sq * i2, s_sq * s_sq * i4};
}

// Lower bound a^2 / (4b + a^2) for P{U >= a/2} when E U = a and Var U = b.
inline double feller_floor(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("feller_floor: a and b must be nonnegative");
    if (a == 0.0) return 0.0;
    return a * a / (4.0 * b + a * a);
}

// k = min{m : n sigma_m^2 < lambda^2} - 1; k = 0 when already n sigma_1^2 < lambda^2.
inline std::uint64_t lattice_cutoff(const Spectrum& spectrum, double lambda, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double l2 = lambda * lambda;
    auto above = [&](std::uint64_t m) { return nn * spectrum.sigma_sq(m) >= l2; };
    if (!above(1)) return 0;
    std::uint64_t lo = 1, hi = 2;  // above(lo) holds
    while (above(hi)) {
        lo = hi;
        if (hi > (1ULL << 62)) throw NumericalDiagnostic("lattice_cutoff: n sigma_m^2 >= lambda^2 does not terminate");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (above(mid) ? lo : hi) = mid;
    }
    return lo;
}

struct LatticeInstance {
    double lambda = 1.0;
    Spectrum spectrum;
    std::uint64_t n = 1;
    std::uint64_t k = 0;
    std::uint64_t dim = 0;  // simulated coordinates are k < m <= dim
    double a = 0.0;         // E U_nk
    double b = 0.0;         // Var U_nk
    double feller_floor = 0.0;
    double a_head = 0.0;  // sum over k < m <= dim
    double b_head = 0.0;
    double a_tail_lo = 0.0;  // certified bracket for sum over m > dim
    double a_tail_hi = 0.0;
    double b_tail_hi = 0.0;
    double n_tail_mass = 0.0;  // n B_k^2
    std::vector<std::string> notes;

    double truncation_deficit() const { return a_tail_hi; }
};

// Default share of B_k^2 the simulated coordinates must carry.
inline constexpr double kDefaultCaptureShare = 0.98;

inline LatticeInstance build_lattice_instance(const Spectrum& spectrum, double lambda, std::uint64_t n,
                                              std::uint64_t dim, double capture_share = kDefaultCaptureShare) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lattice instance needs lambda > 0");
    if (n == 0) throw std::invalid_argument("lattice instance needs n >= 1");
    if (spectrum.sigma_sq(1) > lambda * lambda)
        throw std::invalid_argument("lattice instance needs sigma_1^2 <= lambda^2");
    LatticeInstance li{.lambda = lambda, .spectrum = spectrum, .n = n, .notes = {}};
    li.k = lattice_cutoff(spectrum, lambda, n);
    const auto support = spectrum.support_size();
    if (support) dim = std::max<std::uint64_t>(std::min<std::uint64_t>(dim, *support), li.k);
    if (dim <= li.k && !support)
        throw std::invalid_argument("lattice instance needs D > k = " + std::to_string(li.k));
    li.dim = dim;
    const double nn = static_cast<double>(n);
    const double tail_k = spectrum.tail_variance(li.k);
    li.n_tail_mass = nn * tail_k;
    if (!support) {
        const double tail_D = spectrum.tail_variance(dim);
        if (tail_D > (1.0 - capture_share) * tail_k)
            throw NumericalDiagnostic("lattice instance: D = " + std::to_string(dim) + " keeps only " +
                                      format_double(100.0 * (1.0 - tail_D / tail_k)) + "% of B_k^2 (need " +
                                      format_double(100.0 * capture_share) + "%)");
    }
    for (std::uint64_t m = li.k + 1; m <= dim; ++m) {
        const double s2 = nn * spectrum.sigma_sq(m);
        if (!(s2 > 0.0)) break;
        const EtaMoments e = eta_moments(s2, lambda);
        li.a_head += e.m2;
        li.b_head += e.m4 - e.m2 * e.m2;
    }
    if (!support) {
        // For m > D: c_m >= c_{D+1}, so E eta_m^2 / (n sigma_m^2) is at least its value at D+1;
        // Var(eta^2) <= E eta^4 <= 3 (n sigma_m^2)^2 <= 3 n^2 sigma_{D+1}^2 sigma_m^2.
        const double tail_D = spectrum.tail_variance(dim);
        const double s2_next = nn * spectrum.sigma_sq(dim + 1);
        const double ratio = s2_next > 0.0 ? eta_moments(s2_next, lambda).m2 / s2_next : 1.0;
        li.a_tail_lo = ratio * nn * tail_D;
        li.a_tail_hi = nn * tail_D;
        li.b_tail_hi = 3.0 * nn * s2_next * tail_D;
    }
    li.a = li.a_head + 0.5 * (li.a_tail_lo + li.a_tail_hi);
    li.b = li.b_head + 0.5 * li.b_tail_hi;
    li.feller_floor = salab::feller_floor(li.a, li.b);
    if (li.k == 0) li.notes.emplace_back("k = 0: the head term of the lower bound is zero");
    return li;
}

struct USummary {
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;  // estimate of E U over the simulated coordinates
    double std_error = 0.0;
    double empirical_prob = 0.0;  // P{U >= a/2}
    double prob_std_error = 0.0;
    std::vector<std::pair<double, double>> certified_quantiles;  // (p, quantile of sqrt(U))
};

inline constexpr double kQuantileLevels[] = {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99};

// Samples T_nm ~ N(0, n sigma_m^2) for k < m <= D directly and forms U = sum eta^2.
// Replication r uses substream (seed, r).
inline USummary simulate_U(const LatticeInstance& li, std::uint64_t reps, std::uint64_t seed, unsigned threads = 1) {
    if (reps < 2) throw std::invalid_argument("simulate_U needs reps >= 2");
    const double nn = static_cast<double>(li.n);
    const double half = li.lambda / 2.0;
    std::vector<double> scale;
    for (std::uint64_t m = li.k + 1; m <= li.dim; ++m) scale.push_back(std::sqrt(nn * li.spectrum.sigma_sq(m)));
    std::vector<double> U(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        double u_sum = 0.0;
        for (double s : scale) {
            const double t = std::abs(s * normal_quantile(rng.uniform()));
            if (t <= half) u_sum += t * t;
        }
        U[r] = u_sum;
    });
    USummary out;
    out.reps = reps;
    out.seed = seed;
    const double R = static_cast<double>(reps);
    double s = 0.0, s2 = 0.0, hits = 0.0;
    for (double v : U) {
        s += v;
        s2 += v * v;
        if (v >= li.a / 2.0) hits += 1.0;
    }
    out.mean = s / R;
    out.std_error = std::sqrt(std::max(0.0, (s2 - s * s / R) / (R - 1.0)) / R);
    out.empirical_prob = hits / R;
    out.prob_std_error = std::sqrt(out.empirical_prob * (1.0 - out.empirical_prob) / R);
    std::vector<double> roots(reps);
    for (std::size_t i = 0; i < reps; ++i) roots[i] = std::sqrt(U[i]);
    std::sort(roots.begin(), roots.end());
    for (double p : kQuantileLevels) {
        const auto rank = static_cast<std::size_t>(std::ceil(p * R));
        out.certified_quantiles.emplace_back(p, roots[std::clamp<std::size_t>(rank, 1, reps) - 1]);
    }
    return out;
}

// sqrt(U_nk) from the Gaussian side of a coupling: a pathwise lower bound on Delta_n for every X
// with coordinates on lambda*Z. Coordinates past the simulated dimension are omitted, which only
// lowers the value. Squares are accumulated over m = 1..D in the same order as Delta_n, with zeros
// for m <= k, so the floating-point comparison with Delta_n is monotone too.
inline double certified_delta_lower(const CouplingPaths& paths, const LatticeInstance& li) {
    if (paths.n != li.n) throw std::invalid_argument("certified_delta_lower: path length differs from the instance n");
    // j*lambda is rounded when lambda is not a power of two; shrinking the window by a relative
    // 2^-40 keeps |fl(j*lambda) - t| >= |t| for every nonzero j.
    const double half = li.lambda / 2.0 * (1.0 - 0x1.0p-40);
    const std::uint64_t last = paths.n - 1;
    double sq = 0.0;
    for (std::uint64_t m = 0; m < paths.dim; ++m) {
        double eta = 0.0;
        if (m + 1 > li.k) {
            const double t = paths.sy(last, m);
            if (std::abs(t) <= half) eta = std::abs(t);
        }
        sq += eta * eta;
    }
    return std::sqrt(sq);
}

struct LowerMomentBound {
    double tail_term = 0.0;  // (n B_k^2)^(gamma/2), certified up to the implied constant
    double head_term = 0.0;  // (lambda^2 k)^(gamma/2), heuristic grade
    double total() const { return tail_term + head_term; }
};

inline LowerMomentBound lower_moment_bound(const LatticeInstance& li, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("lower_moment_bound: gamma must be positive");
    LowerMomentBound out;
    out.tail_term = std::pow(li.n_tail_mass, gamma / 2.0);
    if (li.k >= 1) out.head_term = std::pow(li.lambda * li.lambda * static_cast<double>(li.k), gamma / 2.0);
    return out;
}

}  // namespace salab

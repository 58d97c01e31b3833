// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "salab/bounds.hpp"
#include "salab/lowerbound.hpp"
#include "salab/mc.hpp"
#include "salab/rates.hpp"
#include "salab/simulate.hpp"

using namespace salab;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Verdict exact_exponents() {
    const auto t0 = std::chrono::steady_clock::now();
    RateParams p;
    p.gamma = Rational(4);
    p.psi = Rational(11);
    p.b = Rational(3);
    const auto r3 = asymptotic_rate(3, p);
    const auto r4 = asymptotic_rate(4, p);
    RateParams p5 = p;
    p5.b.reset();
    p5.tau = Rational(1);
    const auto r5 = asymptotic_rate(5, p5);
    RateParams p1 = p;
    p1.b.reset();
    p1.alpha = Rational(1);
    p1.beta = Rational(1);
    const auto r1 = asymptotic_rate(1, p1);
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "r=" << r3.aux.at("r").str() << " delta=" << r3.aux.at("delta").str() << " rho=" << r4.aux.at("rho").str()
       << " mu=" << r4.aux.at("mu").str() << " eps=" << r5.aux.at("eps").str()
       << " ex1 n-power=" << r1.dominant.n_power.str() << " (" << secs << " s)";
    const bool ok = r3.aux.at("r") == Rational(2, 27) && r3.aux.at("delta") == Rational(2, 5) &&
                    r4.aux.at("rho") == Rational(2, 25) && r4.aux.at("mu") == Rational(2, 3) &&
                    r5.aux.at("eps") == Rational(1, 52) && r1.dominant.n_power == Rational(3, 2) && secs < 1.0;
    return {ok, os.str()};
}

Verdict lattice_pipeline() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto li = build_lattice_instance(Spectrum::polynomial(2), 1.0, 10000, 10000);
    const auto u = simulate_U(li, 10000, 20240601, 1);
    const double secs = seconds_since(t0);
    const double gap = std::abs(u.mean - li.a);
    const double allow = li.truncation_deficit() + 4.0 * u.std_error;
    const double floor = li.feller_floor - 4.0 * u.prob_std_error;
    std::ostringstream os;
    os << "k=" << li.k << " |EU-a|=" << gap << " <= " << allow << " P{U>=a/2}=" << u.empirical_prob
       << " >= " << floor << " (" << secs << " s)";
    return {li.k == 100 && gap <= allow && u.empirical_prob >= floor && secs < 120.0, os.str()};
}

Verdict pathwise_certificate() {
    const auto sp = Spectrum::polynomial(2);
    const auto li = build_lattice_instance(sp, 1.0, 1000, 200, 0.8);
    const IncrementModel m(IncrementKind::three_point_lattice, sp, 200, 1.0);
    std::vector<int> bad(1000, 0);
    std::vector<double> slack(1000, 0.0);
    parallel_for(1000, workers(), [&](std::size_t r) {
        RngStream rng(31, r);
        const auto p = couple_quantile(m, 1000, rng);
        const double c = certified_delta_lower(p, li);
        bad[r] = c > p.delta;
        slack[r] = p.delta - c;
    });
    int violations = 0;
    double min_slack = INFINITY;
    for (std::size_t r = 0; r < bad.size(); ++r) {
        violations += bad[r];
        min_slack = std::min(min_slack, slack[r]);
    }
    std::ostringstream os;
    os << "k=" << li.k << " violations=" << violations << "/1000 min(delta - cert)=" << min_slack;
    return {violations == 0, os.str()};
}

Verdict gaussian_scaling() {
    const IncrementModel m(IncrementKind::gaussian_exact, Spectrum::exponential(1, 1), 8);
    std::vector<std::uint64_t> grid;
    for (int e = 7; e <= 13; ++e) grid.push_back(1ULL << e);
    bool ok = true;
    std::ostringstream os;
    for (double gamma : {2.0, 4.0}) {
        const auto res = sweep({m, 1, Functional::gaussian_max_norm}, grid, gamma, 2000, 4242, workers());
        const auto& f = *res.fit;
        const bool in = std::abs(f.slope - gamma / 2.0) <= f.band;
        ok = ok && in;
        os << "gamma=" << gamma << " slope=" << f.slope << " (target " << gamma / 2.0 << " +- " << f.band
           << ", r2=" << f.r_squared << ") ";
    }
    return {ok, os.str()};
}

Verdict montgomery_smith() {
    const auto sp = Spectrum::polynomial(2);
    bool ok = true;
    std::ostringstream os;
    double worst = -INFINITY;
    for (std::uint64_t n : {8u, 64u}) {
        const IncrementModel m(IncrementKind::two_point_symmetric, sp, 10);
        std::vector<double> xs;
        const double scale = std::sqrt(static_cast<double>(n) * sp.total_variance());
        for (int i = 1; i <= 10; ++i) xs.push_back(0.5 * i * scale);
        for (const auto& p : empirical_check_montgomery_smith(m, n, xs, 10000, 7, workers())) {
            ok = ok && p.margin <= 4.0 * p.std_error;
            worst = std::max(worst, p.margin - 4.0 * p.std_error);
        }
    }
    const IncrementModel m1(IncrementKind::two_point_symmetric, sp, 1);
    std::vector<double> xs;
    for (int i = 1; i <= 10; ++i) xs.push_back(0.5 * i * std::sqrt(2.0 * sp.total_variance()));
    double worst_exact = -INFINITY;
    for (const auto& p : exact_check_montgomery_smith(m1, 2, xs)) {
        ok = ok && p.margin <= 0.0;
        worst_exact = std::max(worst_exact, p.margin);
    }
    os << "max(margin - 4SE)=" << worst << " exact n=2 max margin=" << worst_exact;
    return {ok, os.str()};
}

Verdict rosenthal_enumeration() {
    const auto sp = Spectrum::polynomial(2);
    const double s1 = std::sqrt(sp.sigma_sq(1)), s2 = std::sqrt(sp.sigma_sq(2));
    // all 2^6 sign patterns of (eps_jm), j = 1..3, m = 1..2
    double oracle = 0.0;
    for (int mask = 0; mask < 64; ++mask) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < 3; ++j) {
            a += (mask >> (2 * j) & 1 ? s1 : -s1);
            b += (mask >> (2 * j + 1) & 1 ? s2 : -s2);
        }
        oracle += std::pow(a * a + b * b, 2.0) / 64.0;
    }
    const IncrementModel m(IncrementKind::two_point_symmetric, sp, 2);
    const auto c = enumerate_rosenthal(m, 3, 4.0);
    const double rel = std::abs(c.moment - oracle) / oracle;
    std::ostringstream os;
    os << "E||S_3||^4 module=" << c.moment << " oracle=" << oracle << " rel diff=" << rel << " ratio=" << c.ratio;
    return {rel <= 1e-12 && c.ratio <= 3.0, os.str()};
}

Verdict scale_invariance() {
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + gen() % 80);
        for (auto& x : v) x = std::exp(-8.0 * u(gen));
        std::sort(v.rbegin(), v.rend());
        const double c = std::pow(10.0, -3.0 + 6.0 * u(gen));
        const double gamma = 2.0 + 6.0 * u(gen);
        ProblemInstance p{.n = 1 + gen() % 1000000000ULL,
                          .gamma = gamma,
                          .psi = 10.5 + 0.5 * std::max(u(gen), 1e-6),
                          .spectrum = Spectrum::explicit_values(v),
                          .moment_Z = std::exp(-3.0 + 6.0 * u(gen)),
                          .whitened = std::nullopt,
                          .tail_moments = std::nullopt,
                          .C_gamma = 1.0,
                          .strict_moments = false};
        ProblemInstance q = p;
        q.spectrum = p.spectrum.scaled(c * c);
        q.moment_Z = p.moment_Z * std::pow(c, gamma);
        if (select_max_feasible(ConditionVariant::thm9, p).d != select_max_feasible(ConditionVariant::thm9, q).d)
            ++mismatches;
    }
    return {mismatches == 0, "mismatches=" + std::to_string(mismatches) + "/100"};
}

std::string run_cli(const std::string& args) {
    std::string out;
    FILE* p = popen(("\"" SALAB_CLI_PATH "\" " + args).c_str(), "r");
    if (!p) return out;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    if (pclose(p) != 0) out += "<nonzero exit>";
    return out;
}

Verdict determinism() {
    const std::string sweep_args = "sweep --spectrum poly:2 --dim 6 --n-grid 4,16,64 --reps 300 --seed 9 --format csv";
    const std::string lb_args = "lower-bound --spectrum poly:2 --n 1000 --dim 3000 --reps 500 --seed 9";
    bool ok = true;
    std::ostringstream os;
    for (const auto& args : {sweep_args, lb_args}) {
        const auto a = run_cli(args), b = run_cli(args), c = run_cli(args + " --threads 4");
        const bool same = !a.empty() && a.find("<nonzero") == std::string::npos && a == b && a == c;
        ok = ok && same;
        os << args.substr(0, args.find(' ')) << ": " << a.size() << " bytes " << (same ? "identical" : "differ") << "; ";
    }
    return {ok, os.str()};
}

double quad_moment(double s, double lambda, int p) {
    auto f = [&](double t) {
        return std::pow(t, p) * std::exp(-0.5 * t * t / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
    };
    return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, lambda / 2.0, 15, 1e-15);
}

Verdict truncated_gaussian() {
    double worst = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 8.0})
        for (double lambda : {0.2, 1.0, 2.0, 6.0}) {
            const auto e = eta_moments(s * s, lambda);
            worst = std::max(worst, std::abs(e.m2 - quad_moment(s, lambda, 2)) / quad_moment(s, lambda, 2));
            worst = std::max(worst, std::abs(e.m4 - quad_moment(s, lambda, 4)) / quad_moment(s, lambda, 4));
        }
    const auto c1 = eta_moments(1.0, 2.0);
    const bool literals = std::abs(c1.m2 - 0.1987480) <= 1e-6 && std::abs(c1.m4 - 0.1123029) <= 1e-6;
    std::ostringstream os;
    os.precision(10);
    os << "max rel err over 20 points=" << worst << " c=1: " << c1.m2 << ", " << c1.m4;
    return {worst <= 1e-8 && literals, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"exact rate exponents", exact_exponents},
        {"lattice lower-bound pipeline", lattice_pipeline},
        {"pathwise certificate", pathwise_certificate},
        {"gaussian maximal scaling", gaussian_scaling},
        {"montgomery-smith margin", montgomery_smith},
        {"rosenthal enumeration", rosenthal_enumeration},
        {"dimension selection scale invariance", scale_invariance},
        {"cli determinism", determinism},
        {"truncated gaussian moments", truncated_gaussian},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << v.detail
                  << std::endl;
    }
    return failed ? 1 : 0;
}

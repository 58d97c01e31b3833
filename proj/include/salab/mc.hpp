// mc.hpp
// Monte Carlo orchestration: moment estimates with standard errors, log-log exponent fits,
// and n-grid sweeps. Replication r of any estimate draws from RngStream(master_seed, r),
// and per-replication results are reduced in index order, so output never depends on threads.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "salab/numeric.hpp"
#include "salab/parallel.hpp"
#include "salab/rng.hpp"
#include "salab/simulate.hpp"

namespace salab {

enum class Functional {
    coupling_delta,      // Delta_n(X, Y)
    coupling_delta_inf,  // Delta_n^inf(X, Y)
    gaussian_max_norm,   // max_s ||sum_{j<=s} Y_j||
    x_max_norm,          // max_s ||sum_{j<=s} X_j||
    x_final_norm,        // ||sum_{j<=n} X_j||
};

inline const char* to_string(Functional f) {
    switch (f) {
        case Functional::coupling_delta: return "delta";
        case Functional::coupling_delta_inf: return "delta-inf";
        case Functional::gaussian_max_norm: return "gaussian-max";
        case Functional::x_max_norm: return "x-max";
        case Functional::x_final_norm: return "x-final";
    }
    return "?";
}

inline Functional parse_functional(const std::string& s) {
    for (Functional f : {Functional::coupling_delta, Functional::coupling_delta_inf, Functional::gaussian_max_norm,
                         Functional::x_max_norm, Functional::x_final_norm})
        if (s == to_string(f)) return f;
    throw std::invalid_argument("functional '" + s + "' unknown (delta, delta-inf, gaussian-max, x-max, x-final)");
}

struct Scenario {
    IncrementModel model;
    std::uint64_t n = 1;
    Functional functional = Functional::coupling_delta;

    std::string id() const { return std::string(to_string(functional)) + "|" + model.str(); }
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(reps)
    std::uint64_t reps = 0;
    std::uint64_t master_seed = 0;
    std::string meta;             // scenario descriptor
    double discarded_mass = 0.0;  // B_D^2 not represented in the simulation
};

inline double evaluate(const PathSummary& p, Functional f) {
    switch (f) {
        case Functional::coupling_delta: return p.delta;
        case Functional::coupling_delta_inf: return p.delta_inf;
        case Functional::gaussian_max_norm: return p.y_max_norm;
        case Functional::x_max_norm: return p.x_max_norm;
        case Functional::x_final_norm: return p.x_final_norm;
    }
    return 0.0;
}

inline PathNeeds needs_of(Functional f) {
    switch (f) {
        case Functional::gaussian_max_norm: return {.x = false, .y = true};
        case Functional::x_max_norm:
        case Functional::x_final_norm: return {.x = true, .y = false};
        default: return {};
    }
}

// Per-replication values f(path)^gamma for streams first_stream .. first_stream + reps - 1.
inline std::vector<double> replicate(const Scenario& sc, double gamma, std::uint64_t reps, std::uint64_t master_seed,
                                     unsigned threads = 1, std::uint64_t first_stream = 0) {
    std::vector<double> vals(reps);
    const PathNeeds needs = needs_of(sc.functional);
    parallel_for(reps, threads, [&](std::size_t r) {
        RngStream rng(master_seed, first_stream + r);
        vals[r] = std::pow(evaluate(summarize_path(sc.model, sc.n, rng, needs), sc.functional), gamma);
    });
    for (std::size_t r = 0; r < reps; ++r)
        if (!std::isfinite(vals[r]))
            throw NumericalDiagnostic("estimate_moment: non-finite sample at replication " +
                                      std::to_string(first_stream + r));
    return vals;
}

inline MCEstimate summarize_samples(std::span<const double> vals, std::uint64_t master_seed, std::string meta) {
    const double R = static_cast<double>(vals.size());
    double s = 0.0;
    for (double v : vals) s += v;
    const double mean = s / R;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    MCEstimate e;
    e.mean = mean;
    e.std_error = vals.size() > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
    e.reps = vals.size();
    e.master_seed = master_seed;
    e.meta = std::move(meta);
    return e;
}

inline MCEstimate estimate_moment(const Scenario& sc, double gamma, std::uint64_t reps, std::uint64_t master_seed,
                                  unsigned threads = 1, std::uint64_t first_stream = 0) {
    if (reps < 2) throw std::invalid_argument("estimate_moment needs reps >= 2");
    if (!(gamma > 0.0)) throw std::invalid_argument("estimate_moment needs gamma > 0");
    const auto vals = replicate(sc, gamma, reps, master_seed, threads, first_stream);
    MCEstimate e = summarize_samples(vals, master_seed, sc.id() + "|n=" + std::to_string(sc.n) + "|gamma=" + format_double(gamma));
    e.discarded_mass = sc.model.discarded_mass();
    return e;
}

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_max = 0.0;
    std::vector<double> grid;
    double band = 0.1;  // acceptance half-width for slopes
    std::string warning;
};

inline constexpr double kSlopeBand = 0.1;
inline constexpr double kMinRSquared = 0.98;

// Ordinary least squares of log(estimate) on log(n).
inline ExponentFit fit_exponent(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_exponent needs at least 3 points");
    ExponentFit f;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [n, est] = points[i];
        if (i > 0 && !(n > points[i - 1].first)) throw std::invalid_argument("fit_exponent: grid must be strictly increasing");
        if (!(n > 0.0)) throw std::invalid_argument("fit_exponent: n must be positive");
        if (!(est > 0.0)) throw std::invalid_argument("fit_exponent: nonpositive estimate at n=" + format_double(n));
        f.grid.push_back(n);
        lx.push_back(std::log(n));
        ly.push_back(std::log(est));
    }
    const double k = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double res = ly[i] - (f.intercept + f.slope * lx[i]);
        sse += res * res;
        f.residual_max = std::max(f.residual_max, std::abs(res));
    }
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    if (f.r_squared < kMinRSquared) {
        f.band = kSlopeBand * (1.0 + 10.0 * (kMinRSquared - f.r_squared));
        f.warning = "r^2 = " + format_double(f.r_squared) + " below " + format_double(kMinRSquared) +
                    ": slope band widened to +-" + format_double(f.band);
    }
    return f;
}

struct SweepRow {
    std::uint64_t n = 0;
    MCEstimate estimate;
};

struct SweepResult {
    std::string scenario_id;
    double gamma = 0.0;
    std::vector<SweepRow> rows;
    std::optional<ExponentFit> fit;  // present when the grid has >= 3 points
};

inline SweepResult sweep(const Scenario& scenario_template, const std::vector<std::uint64_t>& n_grid, double gamma,
                         std::uint64_t reps, std::uint64_t master_seed, unsigned threads = 1) {
    if (n_grid.empty()) throw std::invalid_argument("sweep: empty n grid");
    SweepResult out;
    out.scenario_id = scenario_template.id();
    out.gamma = gamma;
    std::vector<std::pair<double, double>> pts;
    for (std::uint64_t n : n_grid) {
        Scenario sc = scenario_template;
        sc.n = n;
        out.rows.push_back({n, estimate_moment(sc, gamma, reps, master_seed, threads)});
        pts.emplace_back(static_cast<double>(n), out.rows.back().estimate.mean);
    }
    if (pts.size() >= 3) out.fit = fit_exponent(pts);
    return out;
}

// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline std::string sweep_csv(const SweepResult& res) {
    std::ostringstream os;
    os << "n,mean,stderr,reps,seed,scenario_id\r\n";
    for (const auto& row : res.rows) {
        os << row.n << ',' << format_double(row.estimate.mean) << ',' << format_double(row.estimate.std_error) << ','
           << row.estimate.reps << ',' << row.estimate.master_seed << ',' << csv_field(res.scenario_id) << "\r\n";
    }
    return os.str();
}

// Path dump: a header row with the model and seed, then j, m, X, Y per entry (1-based indices).
inline std::string paths_csv(const CouplingPaths& p, const std::string& model, std::uint64_t seed) {
    std::ostringstream os;
    os << "model," << csv_field(model) << ",seed," << seed << "\r\n";
    os << "j,m,X,Y\r\n";
    for (std::uint64_t j = 0; j < p.n; ++j)
        for (std::uint64_t m = 0; m < p.dim; ++m)
            os << j + 1 << ',' << m + 1 << ',' << format_double(p.x(j, m)) << ',' << format_double(p.y(j, m)) << "\r\n";
    return os.str();
}

}  // namespace salab

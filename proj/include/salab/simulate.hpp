// simulate.hpp
// i.i.d. Hilbert-valued increments truncated to D coordinates, an explicit coupling with
// Gaussian increments, and the partial-sum discrepancies Delta_n and Delta_n^inf.
//
// Every increment is stored as an int64 count on a per-coordinate grid (quantum). Lattice laws
// use their exact step, continuous laws the grid sigma_m * 2^-30. Partial sums are integer sums,
// so S[s] - S[s-1] == X[s] holds exactly and lattice partial sums are exact multiples of lambda.
#pragma once

#include <algorithm>
#include <numbers>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "salab/numeric.hpp"
#include "salab/parallel.hpp"
#include "salab/rng.hpp"
#include "salab/spectrum.hpp"

namespace salab {

enum class IncrementKind { three_point_lattice, two_point_symmetric, gaussian_exact, uniform_symmetric };

inline const char* to_string(IncrementKind k) {
    switch (k) {
        case IncrementKind::three_point_lattice: return "three-point";
        case IncrementKind::two_point_symmetric: return "two-point";
        case IncrementKind::gaussian_exact: return "gaussian";
        case IncrementKind::uniform_symmetric: return "uniform";
    }
    return "?";
}

inline IncrementKind parse_increment_kind(const std::string& s) {
    if (s == "three-point" || s == "lattice") return IncrementKind::three_point_lattice;
    if (s == "two-point") return IncrementKind::two_point_symmetric;
    if (s == "gaussian") return IncrementKind::gaussian_exact;
    if (s == "uniform") return IncrementKind::uniform_symmetric;
    throw std::invalid_argument("model kind '" + s + "' unknown (three-point, two-point, gaussian, uniform)");
}

inline constexpr double kContinuousGrid = 0x1.0p-30;

class IncrementModel {
public:
    IncrementModel(IncrementKind kind, Spectrum spectrum, std::uint64_t dim, double lambda = 0.0)
        : kind_(kind), spectrum_(std::move(spectrum)), dim_(dim), lambda_(lambda) {
        if (dim_ == 0) throw std::invalid_argument("increment model needs D >= 1");
        sigma_.resize(dim_);
        for (std::uint64_t m = 0; m < dim_; ++m) sigma_[m] = spectrum_.sigma(m + 1);
        if (kind_ == IncrementKind::three_point_lattice) {
            if (!(lambda_ > 0.0)) throw std::invalid_argument("three-point lattice model needs lambda > 0");
            if (spectrum_.sigma_sq(1) > lambda_ * lambda_)
                throw std::invalid_argument("three-point lattice model needs sigma_1^2 <= lambda^2");
            p_edge_.resize(dim_);
            for (std::uint64_t m = 0; m < dim_; ++m) p_edge_[m] = spectrum_.sigma_sq(m + 1) / (2.0 * lambda_ * lambda_);
        }
    }

    IncrementKind kind() const { return kind_; }
    const Spectrum& spectrum() const { return spectrum_; }
    std::uint64_t dim() const { return dim_; }
    double lambda() const { return lambda_; }
    double sigma(std::uint64_t m0) const { return sigma_[m0]; }  // zero-based coordinate
    bool is_lattice() const {
        return kind_ == IncrementKind::three_point_lattice || kind_ == IncrementKind::two_point_symmetric;
    }

    // Variance carried by the simulated coordinates and the mass B_D^2 left out.
    double simulated_variance() const {
        double v = 0.0;
        for (double s : sigma_) v += s * s;
        return v;
    }
    double discarded_mass() const { return spectrum_.tail_variance(dim_); }

    std::string str() const {
        std::string s = to_string(kind_);
        if (kind_ == IncrementKind::three_point_lattice) s += "(lambda=" + format_double(lambda_) + ")";
        return s + "|" + spectrum_.str() + "|D=" + std::to_string(dim_);
    }

    double x_quantum(std::uint64_t m0) const {
        switch (kind_) {
            case IncrementKind::three_point_lattice: return lambda_;
            case IncrementKind::two_point_symmetric: return sigma_[m0];
            default: return sigma_[m0] * kContinuousGrid;
        }
    }
    double y_quantum(std::uint64_t m0) const { return sigma_[m0] * kContinuousGrid; }

    // Quantile transform F_m^{-1}(u) of coordinate m as a grid count; nondecreasing in u.
    std::int64_t x_count(std::uint64_t m0, double u, double z) const {
        switch (kind_) {
            case IncrementKind::three_point_lattice:
                return u <= p_edge_[m0] ? -1 : (u <= 1.0 - p_edge_[m0] ? 0 : 1);
            case IncrementKind::two_point_symmetric: return u <= 0.5 ? -1 : 1;
            case IncrementKind::gaussian_exact: return continuous_count(z);
            case IncrementKind::uniform_symmetric: return continuous_count(std::numbers::sqrt3 * (2.0 * u - 1.0));
        }
        return 0;
    }
    // z = Phi^{-1}(u); the Gaussian partner shares the uniform.
    static std::int64_t y_count(double z) { return continuous_count(z); }

    bool x_needs_normal() const { return kind_ == IncrementKind::gaussian_exact; }

    // E|Z_m|^gamma for coordinate m (zero-based).
    double coordinate_abs_moment(std::uint64_t m0, double gamma) const {
        const double s = sigma_[m0];
        switch (kind_) {
            case IncrementKind::three_point_lattice:
                return std::pow(lambda_, gamma - 2.0) * s * s;
            case IncrementKind::two_point_symmetric: return std::pow(s, gamma);
            case IncrementKind::gaussian_exact:
                return std::pow(s, gamma) * std::pow(2.0, gamma / 2.0) * std::tgamma((gamma + 1.0) / 2.0) /
                       std::sqrt(std::numbers::pi);
            case IncrementKind::uniform_symmetric:
                return std::pow(std::numbers::sqrt3 * s, gamma) / (gamma + 1.0);
        }
        return 0.0;
    }

    // E|Z_m|^gamma / sigma_m^gamma for m = 1..d, the inputs of the independent-coordinate whitened bound.
    std::vector<double> coordinate_ratios(std::uint64_t d, double gamma) const {
        if (d > dim_) throw std::invalid_argument("coordinate_ratios: d exceeds the model dimension");
        std::vector<double> r(d);
        for (std::uint64_t m = 0; m < d; ++m) r[m] = coordinate_abs_moment(m, gamma) / std::pow(sigma_[m], gamma);
        return r;
    }

    // E||Z||^gamma of the truncated vector when a closed form exists: gamma = 2, gamma = 4,
    // or any gamma for two-point coordinates (||Z|| is then deterministic).
    std::optional<double> norm_moment_exact(double gamma) const {
        double var = 0.0;
        for (double s : sigma_) var += s * s;
        if (gamma == 2.0) return var;
        if (kind_ == IncrementKind::two_point_symmetric) return std::pow(var, gamma / 2.0);
        if (gamma == 4.0) {
            // E(sum W_m)^2 with W_m = Z_m^2 independent
            double excess = 0.0;
            for (std::uint64_t m = 0; m < dim_; ++m) excess += coordinate_abs_moment(m, 4.0) - std::pow(sigma_[m], 4.0);
            return var * var + excess;
        }
        return std::nullopt;
    }

    // Atoms of coordinate m for exhaustive enumeration (lattice kinds only): values and probabilities.
    std::vector<std::pair<double, double>> atoms(std::uint64_t m0) const {
        if (kind_ == IncrementKind::two_point_symmetric) return {{-sigma_[m0], 0.5}, {sigma_[m0], 0.5}};
        if (kind_ == IncrementKind::three_point_lattice)
            return {{-lambda_, p_edge_[m0]}, {0.0, 1.0 - 2.0 * p_edge_[m0]}, {lambda_, p_edge_[m0]}};
        throw std::invalid_argument("atoms: only lattice models can be enumerated");
    }

private:
    static std::int64_t continuous_count(double v) { return std::llround(v / kContinuousGrid); }

    IncrementKind kind_;
    Spectrum spectrum_;
    std::uint64_t dim_;
    double lambda_;
    std::vector<double> sigma_;
    std::vector<double> p_edge_;  // P{Z_m = lambda} = P{Z_m = -lambda}
};

// Row-major n x D matrix of doubles.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct DeltaPair {
    double delta = 0.0;      // max_s || sum_{j<=s} (X_j - Y_j) ||_2
    double delta_inf = 0.0;  // same with the sup norm
};

inline DeltaPair delta_n(const Matrix& X, const Matrix& Y) {
    if (X.rows != Y.rows || X.cols != Y.cols)
        throw std::invalid_argument("delta_n: shape mismatch " + std::to_string(X.rows) + "x" + std::to_string(X.cols) +
                                    " vs " + std::to_string(Y.rows) + "x" + std::to_string(Y.cols));
    std::vector<double> acc(X.cols, 0.0);
    DeltaPair out;
    for (std::size_t s = 0; s < X.rows; ++s) {
        double sq = 0.0, sup = 0.0;
        for (std::size_t m = 0; m < X.cols; ++m) {
            acc[m] += X(s, m) - Y(s, m);
            sq += acc[m] * acc[m];
            sup = std::max(sup, std::abs(acc[m]));
        }
        out.delta = std::max(out.delta, std::sqrt(sq));
        out.delta_inf = std::max(out.delta_inf, sup);
    }
    return out;
}

struct CouplingPaths {
    std::uint64_t n = 0, dim = 0;
    std::vector<double> x_quantum, y_quantum;  // per coordinate
    std::vector<std::int64_t> X, Y;            // increments, n x D counts
    std::vector<std::int64_t> SX, SY;          // partial sums, n x D counts
    double delta = 0.0;
    double delta_inf = 0.0;
    double discarded_mass = 0.0;  // B_D^2 of the spectrum

    double x(std::uint64_t j, std::uint64_t m) const { return static_cast<double>(X[j * dim + m]) * x_quantum[m]; }
    double y(std::uint64_t j, std::uint64_t m) const { return static_cast<double>(Y[j * dim + m]) * y_quantum[m]; }
    double sx(std::uint64_t s, std::uint64_t m) const { return static_cast<double>(SX[s * dim + m]) * x_quantum[m]; }
    double sy(std::uint64_t s, std::uint64_t m) const { return static_cast<double>(SY[s * dim + m]) * y_quantum[m]; }

    Matrix x_matrix() const { return to_matrix(&CouplingPaths::x); }
    Matrix y_matrix() const { return to_matrix(&CouplingPaths::y); }

private:
    Matrix to_matrix(double (CouplingPaths::*get)(std::uint64_t, std::uint64_t) const) const {
        Matrix M(n, dim);
        for (std::uint64_t j = 0; j < n; ++j)
            for (std::uint64_t m = 0; m < dim; ++m) M(j, m) = (this->*get)(j, m);
        return M;
    }
};

// Scalar functionals of one simulated path, all computed in a single pass.
struct PathSummary {
    double delta = 0.0;         // max_s ||SX_s - SY_s||
    double delta_inf = 0.0;     // max_s ||SX_s - SY_s||_inf
    double x_max_norm = 0.0;    // max_s ||SX_s||
    double x_final_norm = 0.0;  // ||SX_n||
    double y_max_norm = 0.0;    // max_s ||SY_s||
    double y_final_norm = 0.0;  // ||SY_n||
};

namespace detail {

// Drives one path: for each row j and coordinate m draws one uniform u, maps it to the
// X and Y counts, updates partial sums and calls row_done(j) after each row.
template <class RowDone>
void drive_path(const IncrementModel& model, std::uint64_t n, RngStream& rng, bool need_x, bool need_y,
                std::vector<std::int64_t>& sx, std::vector<std::int64_t>& sy, std::int64_t* x_row, std::int64_t* y_row,
                RowDone&& row_done) {
    const std::uint64_t D = model.dim();
    sx.assign(D, 0);
    sy.assign(D, 0);
    const bool normal_for_x = need_x && model.x_needs_normal();
    for (std::uint64_t j = 0; j < n; ++j) {
        for (std::uint64_t m = 0; m < D; ++m) {
            const double u = rng.uniform();
            const double z = (need_y || normal_for_x) ? normal_quantile(u) : 0.0;
            if (need_x) {
                const std::int64_t xc = model.x_count(m, u, z);
                sx[m] += xc;
                if (x_row) x_row[j * D + m] = xc;
            }
            if (need_y) {
                const std::int64_t yc = IncrementModel::y_count(z);
                sy[m] += yc;
                if (y_row) y_row[j * D + m] = yc;
            }
        }
        row_done(j);
    }
}

}  // namespace detail

// Which parts of the path a functional needs; skipping Phi^{-1} for lattice-only work is the main saving.
struct PathNeeds {
    bool x = true;
    bool y = true;
};

inline PathSummary summarize_path(const IncrementModel& model, std::uint64_t n, RngStream& rng,
                                  PathNeeds needs = {}) {
    if (n == 0) throw std::invalid_argument("path length n must be >= 1");
    const std::uint64_t D = model.dim();
    std::vector<double> qx(D), qy(D);
    for (std::uint64_t m = 0; m < D; ++m) {
        qx[m] = model.x_quantum(m);
        qy[m] = model.y_quantum(m);
    }
    std::vector<std::int64_t> sx, sy;
    PathSummary out;
    double x_sq = 0.0, y_sq = 0.0;
    detail::drive_path(model, n, rng, needs.x, needs.y, sx, sy, nullptr, nullptr, [&](std::uint64_t) {
        double d_sq = 0.0, d_sup = 0.0;
        x_sq = 0.0;
        y_sq = 0.0;
        for (std::uint64_t m = 0; m < D; ++m) {
            const double xv = static_cast<double>(sx[m]) * qx[m];
            const double yv = static_cast<double>(sy[m]) * qy[m];
            const double diff = xv - yv;
            d_sq += diff * diff;
            d_sup = std::max(d_sup, std::abs(diff));
            x_sq += xv * xv;
            y_sq += yv * yv;
        }
        out.delta = std::max(out.delta, std::sqrt(d_sq));
        out.delta_inf = std::max(out.delta_inf, d_sup);
        out.x_max_norm = std::max(out.x_max_norm, std::sqrt(x_sq));
        out.y_max_norm = std::max(out.y_max_norm, std::sqrt(y_sq));
    });
    out.x_final_norm = std::sqrt(x_sq);
    out.y_final_norm = std::sqrt(y_sq);
    return out;
}

// X_{jm} = F_m^{-1}(U_{jm}), Y_{jm} = sigma_m Phi^{-1}(U_{jm}) with one shared uniform per entry:
// exact marginals, matching covariances, comonotone per coordinate.
inline CouplingPaths couple_quantile(const IncrementModel& model, std::uint64_t n, RngStream& rng) {
    if (n == 0) throw std::invalid_argument("path length n must be >= 1");
    const std::uint64_t D = model.dim();
    CouplingPaths p;
    p.n = n;
    p.dim = D;
    p.discarded_mass = model.discarded_mass();
    p.x_quantum.resize(D);
    p.y_quantum.resize(D);
    for (std::uint64_t m = 0; m < D; ++m) {
        p.x_quantum[m] = model.x_quantum(m);
        p.y_quantum[m] = model.y_quantum(m);
    }
    p.X.resize(n * D);
    p.Y.resize(n * D);
    p.SX.resize(n * D);
    p.SY.resize(n * D);
    std::vector<std::int64_t> sx, sy;
    detail::drive_path(model, n, rng, true, true, sx, sy, p.X.data(), p.Y.data(), [&](std::uint64_t j) {
        double d_sq = 0.0, d_sup = 0.0;
        for (std::uint64_t m = 0; m < D; ++m) {
            p.SX[j * D + m] = sx[m];
            p.SY[j * D + m] = sy[m];
            const double diff = static_cast<double>(sx[m]) * p.x_quantum[m] - static_cast<double>(sy[m]) * p.y_quantum[m];
            d_sq += diff * diff;
            d_sup = std::max(d_sup, std::abs(diff));
        }
        p.delta = std::max(p.delta, std::sqrt(d_sq));
        p.delta_inf = std::max(p.delta_inf, d_sup);
    });
    return p;
}

// n i.i.d. rows of the model; row j, coordinate m uses the same uniform as couple_quantile.
inline Matrix sample_increments(const IncrementModel& model, std::uint64_t n, RngStream& rng) {
    const std::uint64_t D = model.dim();
    std::vector<std::int64_t> counts(n * D), sx, sy;
    detail::drive_path(model, n, rng, true, false, sx, sy, counts.data(), nullptr, [](std::uint64_t) {});
    Matrix M(n, D);
    for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t m = 0; m < D; ++m) M(j, m) = static_cast<double>(counts[j * D + m]) * model.x_quantum(m);
    return M;
}

// ---- exhaustive enumeration over lattice paths ----

// Calls visit(weight, increments) for every n x D atom pattern; increments is row-major n x D.
template <class Visit>
void enumerate_paths(const IncrementModel& model, std::uint64_t n, Visit&& visit, std::uint64_t max_patterns = 1u << 24) {
    const std::uint64_t D = model.dim();
    const std::uint64_t cells = n * D;
    std::vector<std::vector<std::pair<double, double>>> atoms(D);
    double patterns = 1.0;
    for (std::uint64_t m = 0; m < D; ++m) {
        atoms[m] = model.atoms(m);
        patterns *= std::pow(static_cast<double>(atoms[m].size()), static_cast<double>(n));
    }
    if (patterns > static_cast<double>(max_patterns))
        throw std::invalid_argument("enumerate_paths: " + format_double(patterns) + " patterns exceed the limit");
    std::vector<std::size_t> idx(cells, 0);
    std::vector<double> inc(cells);
    while (true) {
        double w = 1.0;
        for (std::uint64_t c = 0; c < cells; ++c) {
            const auto& a = atoms[c % D][idx[c]];
            inc[c] = a.first;
            w *= a.second;
        }
        if (w > 0.0) visit(w, static_cast<const std::vector<double>&>(inc));
        std::uint64_t c = 0;
        for (; c < cells; ++c) {
            if (++idx[c] < atoms[c % D].size()) break;
            idx[c] = 0;
        }
        if (c == cells) break;
    }
}

// ---- maximal inequality check: P{max_s ||S_s|| > x} <= 9 P{||S_n|| > x/30} ----

struct MarginPoint {
    double x = 0.0;
    double p_max = 0.0;    // P{max_s ||S_s|| > x}
    double p_final = 0.0;  // P{||S_n|| > x/30}
    double margin = 0.0;   // p_max - 9 p_final
    double std_error = 0.0;  // standard error of the margin (0 in enumeration mode)
};

inline std::vector<MarginPoint> empirical_check_montgomery_smith(const IncrementModel& model, std::uint64_t n,
                                                                 const std::vector<double>& x_grid, std::uint64_t reps,
                                                                 std::uint64_t seed, unsigned threads = 1) {
    if (reps < 2) throw std::invalid_argument("montgomery-smith check needs reps >= 2");
    std::vector<PathSummary> paths(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        paths[r] = summarize_path(model, n, rng, {.x = true, .y = false});
    });
    std::vector<MarginPoint> out;
    const double R = static_cast<double>(reps);
    for (double x : x_grid) {
        double a = 0.0, b = 0.0, s = 0.0, s2 = 0.0;
        for (const auto& p : paths) {
            const double ia = p.x_max_norm > x ? 1.0 : 0.0;
            const double ib = p.x_final_norm > x / 30.0 ? 1.0 : 0.0;
            const double diff = ia - 9.0 * ib;
            a += ia;
            b += ib;
            s += diff;
            s2 += diff * diff;
        }
        MarginPoint mp;
        mp.x = x;
        mp.p_max = a / R;
        mp.p_final = b / R;
        mp.margin = s / R;
        const double var = std::max(0.0, (s2 - s * s / R) / (R - 1.0));
        mp.std_error = std::sqrt(var / R);
        out.push_back(mp);
    }
    return out;
}

inline std::vector<MarginPoint> exact_check_montgomery_smith(const IncrementModel& model, std::uint64_t n,
                                                             const std::vector<double>& x_grid) {
    const std::uint64_t D = model.dim();
    std::vector<MarginPoint> out(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) out[i].x = x_grid[i];
    std::vector<double> acc(D);
    enumerate_paths(model, n, [&](double w, const std::vector<double>& inc) {
        std::fill(acc.begin(), acc.end(), 0.0);
        double max_norm = 0.0, sq = 0.0;
        for (std::uint64_t j = 0; j < n; ++j) {
            sq = 0.0;
            for (std::uint64_t m = 0; m < D; ++m) {
                acc[m] += inc[j * D + m];
                sq += acc[m] * acc[m];
            }
            max_norm = std::max(max_norm, std::sqrt(sq));
        }
        const double final_norm = std::sqrt(sq);
        for (auto& mp : out) {
            if (max_norm > mp.x) mp.p_max += w;
            if (final_norm > mp.x / 30.0) mp.p_final += w;
        }
    });
    for (auto& mp : out) mp.margin = mp.p_max - 9.0 * mp.p_final;
    return out;
}

// ---- moment inequality check: E||S_n||^gamma against n E||Z||^gamma + (n B^2)^(gamma/2) ----

struct RosenthalCheck {
    double moment = 0.0;  // E||S_n||^gamma (estimate or exact)
    double moment_stderr = 0.0;
    double norm_moment = 0.0;  // E||Z||^gamma of the truncated model
    bool norm_moment_exact = true;
    double denominator = 0.0;
    double ratio = 0.0;
    double ratio_stderr = 0.0;
    bool exact = false;  // enumeration mode
};

namespace detail {

inline void finish_rosenthal(RosenthalCheck& c, const IncrementModel& model, std::uint64_t n, double gamma) {
    const double nn = static_cast<double>(n);
    c.denominator = nn * c.norm_moment + std::pow(nn * model.simulated_variance(), gamma / 2.0);
    c.ratio = c.moment / c.denominator;
    c.ratio_stderr = c.moment_stderr / c.denominator;
}

}  // namespace detail

inline RosenthalCheck empirical_check_rosenthal(const IncrementModel& model, std::uint64_t n, double gamma,
                                                std::uint64_t reps, std::uint64_t seed, unsigned threads = 1) {
    if (!(gamma >= 2.0)) throw std::invalid_argument("rosenthal check needs gamma >= 2");
    if (reps < 2) throw std::invalid_argument("rosenthal check needs reps >= 2");
    std::vector<double> vals(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        vals[r] = std::pow(summarize_path(model, n, rng, {.x = true, .y = false}).x_final_norm, gamma);
    });
    RosenthalCheck c;
    const double R = static_cast<double>(reps);
    double s = 0.0, s2 = 0.0;
    for (double v : vals) {
        s += v;
        s2 += v * v;
    }
    c.moment = s / R;
    c.moment_stderr = std::sqrt(std::max(0.0, (s2 - s * s / R) / (R - 1.0)) / R);
    if (const auto exact = model.norm_moment_exact(gamma)) {
        c.norm_moment = *exact;
    } else {
        // single-increment paths on a disjoint stream family
        std::vector<double> z(reps);
        parallel_for(reps, threads, [&](std::size_t r) {
            RngStream rng(~seed, r);
            z[r] = std::pow(summarize_path(model, 1, rng, {.x = true, .y = false}).x_final_norm, gamma);
        });
        double zs = 0.0;
        for (double v : z) zs += v;
        c.norm_moment = zs / R;
        c.norm_moment_exact = false;
    }
    detail::finish_rosenthal(c, model, n, gamma);
    return c;
}

// Enumeration mode: exact E||S_n||^gamma over every lattice path.
inline RosenthalCheck enumerate_rosenthal(const IncrementModel& model, std::uint64_t n, double gamma) {
    if (!(gamma >= 2.0)) throw std::invalid_argument("rosenthal check needs gamma >= 2");
    const std::uint64_t D = model.dim();
    RosenthalCheck c;
    c.exact = true;
    std::vector<double> acc(D);
    enumerate_paths(model, n, [&](double w, const std::vector<double>& inc) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::uint64_t j = 0; j < n; ++j)
            for (std::uint64_t m = 0; m < D; ++m) acc[m] += inc[j * D + m];
        double sq = 0.0;
        for (double a : acc) sq += a * a;
        c.moment += w * std::pow(sq, gamma / 2.0);
    });
    double zm = 0.0;
    enumerate_paths(model, 1, [&](double w, const std::vector<double>& inc) {
        double sq = 0.0;
        for (double a : inc) sq += a * a;
        zm += w * std::pow(sq, gamma / 2.0);
    });
    c.norm_moment = zm;
    detail::finish_rosenthal(c, model, n, gamma);
    return c;
}

}  // namespace salab

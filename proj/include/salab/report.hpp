// report.hpp
// JSON views of the library's result types. Rationals become "p/q" strings; log-space magnitudes
// carry both the linear value (null once it leaves double range) and log10.
#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "salab/bounds.hpp"
#include "salab/lowerbound.hpp"
#include "salab/mc.hpp"
#include "salab/rates.hpp"
#include "salab/simulate.hpp"

namespace salab {

using json = nlohmann::ordered_json;

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const LogValue& v) {
    json j;
    j["value"] = v.exceeds_1e300() ? json(nullptr) : finite_or_null(v.linear());
    j["log10"] = finite_or_null(v.log10());
    return j;
}

inline json to_json(const BoundTerm& t) {
    json j = to_json(t.value);
    j["name"] = t.name;
    return j;
}

inline json to_json(const ConditionCheck& c) {
    return {{"variant", to_string(c.variant)}, {"d", c.d}, {"ok", c.ok}, {"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}};
}

inline json to_json(const BoundReport& r) {
    json j;
    j["theorem"] = r.theorem;
    j["d"] = r.d;
    j["condition_ok"] = r.condition_ok;
    j["condition"] = r.condition ? to_json(*r.condition) : json(nullptr);
    j["terms"] = json::array();
    for (const auto& t : r.terms) j["terms"].push_back(to_json(t));
    j["factors"] = json::array();
    for (const auto& t : r.factors) j["factors"].push_back(to_json(t));
    j["total"] = to_json(r.total);
    j["C_gamma"] = r.C_gamma;
    j["overflow"] = r.overflow();
    j["notes"] = r.notes;
    return j;
}

inline json to_json(const DimensionChoice& c) { return {{"d", c.d}, {"rule", c.rule}, {"notes", c.notes}}; }

inline json to_json(const RateRegime& r) {
    return {{"name", r.name}, {"n_power", r.n_power.str()}, {"log_power", r.log_power.str()}, {"formula", r.formula}};
}

inline json to_json(const RateReport& r) {
    json j;
    j["example"] = r.example_id;
    j["regimes"] = json::array();
    for (const auto& g : r.regimes) j["regimes"].push_back(to_json(g));
    j["dominant"] = to_json(r.dominant);
    j["aux"] = json::object();
    for (const auto& [k, v] : r.aux) j["aux"][k] = v.str();
    j["window_ok"] = r.window_ok;
    j["status"] = r.status;
    return j;
}

inline json to_json(const LowerUpperComparison& c) {
    json j;
    j["example"] = c.example_id;
    j["lower_n_power"] = c.lower_n_power.str();
    j["lower_log_power"] = c.lower_log_power ? json(c.lower_log_power->str()) : json(nullptr);
    j["upper_n_power"] = c.upper_n_power.str();
    j["upper_log_power"] = c.upper_log_power.str();
    j["tight"] = c.tight;
    j["note"] = c.note;
    return j;
}

inline json to_json(const MCEstimate& e) {
    return {{"mean", e.mean},
            {"stderr", e.std_error},
            {"reps", e.reps},
            {"seed", e.master_seed},
            {"meta", e.meta},
            {"discarded_mass", e.discarded_mass}};
}

inline json to_json(const ExponentFit& f) {
    return {{"slope", f.slope},       {"intercept", f.intercept}, {"r_squared", f.r_squared},
            {"residual_max", f.residual_max}, {"grid", f.grid}, {"band", f.band},
            {"warning", f.warning}};
}

inline json to_json(const SweepResult& s) {
    json j;
    j["scenario_id"] = s.scenario_id;
    j["gamma"] = s.gamma;
    j["rows"] = json::array();
    for (const auto& r : s.rows) {
        json row = to_json(r.estimate);
        row["n"] = r.n;
        j["rows"].push_back(std::move(row));
    }
    j["fit"] = s.fit ? to_json(*s.fit) : json(nullptr);
    return j;
}

inline json to_json(const MarginPoint& m) {
    return {{"x", m.x}, {"p_max", m.p_max}, {"p_final", m.p_final}, {"margin", m.margin}, {"stderr", m.std_error}};
}

inline json to_json(const RosenthalCheck& c) {
    return {{"moment", c.moment},       {"moment_stderr", c.moment_stderr}, {"norm_moment", c.norm_moment},
            {"norm_moment_exact", c.norm_moment_exact}, {"denominator", c.denominator},
            {"ratio", c.ratio},         {"ratio_stderr", c.ratio_stderr},   {"exact", c.exact}};
}

inline json to_json(const LatticeInstance& li, const USummary& u, const LowerMomentBound& lb, double gamma) {
    json j;
    j["lambda"] = li.lambda;
    j["k"] = li.k;
    j["dim"] = li.dim;
    j["a"] = li.a;
    j["b"] = li.b;
    j["feller_floor"] = li.feller_floor;
    j["empirical_prob"] = u.empirical_prob;
    j["empirical_prob_stderr"] = u.prob_std_error;
    j["mean_U"] = u.mean;
    j["mean_U_stderr"] = u.std_error;
    j["certified_quantiles"] = json::array();
    for (const auto& [p, q] : u.certified_quantiles) j["certified_quantiles"].push_back({{"p", p}, {"sqrt_U", q}});
    j["truncation_deficit"] = li.truncation_deficit();
    j["tail_bracket"] = {{"a_lo", li.a_tail_lo}, {"a_hi", li.a_tail_hi}, {"b_hi", li.b_tail_hi}};
    j["n_tail_mass"] = li.n_tail_mass;
    j["lower_moment_bound"] = {{"gamma", gamma},
                               {"tail_term", lb.tail_term},
                               {"head_term", lb.head_term},
                               {"head_term_grade", "heuristic"},
                               {"total", lb.total()}};
    j["reps"] = u.reps;
    j["seed"] = u.seed;
    j["notes"] = li.notes;
    return j;
}

}  // namespace salab

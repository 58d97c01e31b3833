#include <gtest/gtest.h>

#include <cmath>

#include "salab/report.hpp"

using namespace salab;

TEST(ReportJson, LogValueLinearAndLog) {
    const auto j = to_json(LogValue::from_linear(1000.0));
    EXPECT_DOUBLE_EQ(j["value"].get<double>(), 1000.0);
    EXPECT_NEAR(j["log10"].get<double>(), 3.0, 1e-14);
    const auto big = to_json(LogValue{400.0 * std::numbers::ln10});
    EXPECT_TRUE(big["value"].is_null());
    EXPECT_NEAR(big["log10"].get<double>(), 400.0, 1e-12);
    const auto zero = to_json(LogValue{});
    EXPECT_EQ(zero["value"].get<double>(), 0.0);
    EXPECT_TRUE(zero["log10"].is_null());
}

TEST(ReportJson, BoundReportFields) {
    const ProblemInstance inst{.n = 1000000,
                               .gamma = 4.0,
                               .psi = 11.0,
                               .spectrum = Spectrum::polynomial(2),
                               .moment_Z = 1.0,
                               .whitened = std::nullopt,
                               .tail_moments = std::nullopt,
                               .C_gamma = 1.0,
                               .strict_moments = false};
    const auto r = bound_thm9(inst, 3);
    const auto j = to_json(r);
    for (const char* k : {"theorem", "d", "condition_ok", "condition", "terms", "factors", "total", "C_gamma", "overflow", "notes"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["d"].get<std::uint64_t>(), 3u);
    EXPECT_FALSE(j["overflow"].get<bool>());
    EXPECT_EQ(j["terms"].size(), r.terms.size());
    for (const auto& t : j["terms"]) EXPECT_TRUE(t.contains("name") && t.contains("log10"));
    // key order is fixed
    EXPECT_EQ(j.begin().key(), "theorem");
    EXPECT_EQ(j.dump(), to_json(bound_thm9(inst, 3)).dump());
}

TEST(ReportJson, RationalsAsStrings) {
    RateParams p;
    p.b = Rational(2);
    const auto r = asymptotic_rate(3, p);
    const auto j = to_json(r);
    EXPECT_EQ(j["example"].get<int>(), 3);
    EXPECT_TRUE(j["dominant"]["n_power"].is_string());
    EXPECT_EQ(j["dominant"]["n_power"].get<std::string>(), r.dominant.n_power.str());
    for (const auto& [k, v] : r.aux) EXPECT_EQ(j["aux"][k].get<std::string>(), v.str());
    EXPECT_TRUE(j["window_ok"].get<bool>());
}

TEST(ReportJson, EstimateAndSweep) {
    MCEstimate e{.mean = 1.5, .std_error = 0.25, .reps = 10, .master_seed = 7, .meta = "m", .discarded_mass = 0.0};
    const auto j = to_json(e);
    EXPECT_EQ(j["stderr"].get<double>(), 0.25);
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), 7u);
    SweepResult s{.scenario_id = "x", .gamma = 2.0, .rows = {{4, e}}, .fit = std::nullopt};
    const auto js = to_json(s);
    EXPECT_TRUE(js["fit"].is_null());
    EXPECT_EQ(js["rows"][0]["n"].get<std::uint64_t>(), 4u);
}

TEST(ReportJson, NonFiniteBecomesNull) {
    EXPECT_TRUE(finite_or_null(std::nan("")).is_null());
    EXPECT_TRUE(finite_or_null(INFINITY).is_null());
    EXPECT_EQ(finite_or_null(2.0).get<double>(), 2.0);
}

TEST(ReportJson, LowerBoundLabelsHeadTerm) {
    const auto li = build_lattice_instance(Spectrum::polynomial(2), 1.0, 100, 2000);
    const auto u = simulate_U(li, 50, 3);
    const auto j = to_json(li, u, lower_moment_bound(li, 4.0), 4.0);
    EXPECT_EQ(j["lower_moment_bound"]["head_term_grade"].get<std::string>(), "heuristic");
    EXPECT_EQ(j["certified_quantiles"].size(), std::size(kQuantileLevels));
    EXPECT_EQ(j["k"].get<std::uint64_t>(), 10u);
}

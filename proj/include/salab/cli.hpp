// cli.hpp
// Subcommand dispatcher behind tools/salab.cpp. Every option is a key in one table; a JSON config
// file uses the same keys, and flags given on the command line override it. The resolved config is
// echoed at the top of every output. Exit codes: 0 ok, 2 invalid input or usage, 3 numerical diagnostic.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "salab/bounds.hpp"
#include "salab/lowerbound.hpp"
#include "salab/mc.hpp"
#include "salab/rates.hpp"
#include "salab/report.hpp"
#include "salab/simulate.hpp"
#include "salab/spectrum.hpp"

namespace salab::cli {

enum class Kind { integer, real, text, flag, int_list, real_list, rational };

struct Key {
    const char* name;
    Kind kind;
    const char* help;
};

inline const std::vector<Key>& key_table() {
    static const std::vector<Key> t = {
        {"spectrum", Kind::text, "exp:alpha,beta | poly:b | log:tau | explicit:v1,v2,..."},
        {"gamma", Kind::real, "moment order gamma"},
        {"psi", Kind::real, "exponent psi in (10.5, 11]"},
        {"n", Kind::integer, "number of summands"},
        {"n-grid", Kind::int_list, "comma-separated n values"},
        {"moment", Kind::real, "E||Z||^gamma"},
        {"C-gamma", Kind::real, "constant C(gamma) in the dimension conditions"},
        {"strict-moments", Kind::flag, "reject moments below the Lyapunov floor"},
        {"theorem", Kind::text, "3 | 6 | 9 | trivial"},
        {"d", Kind::integer, "dimension (0 selects it)"},
        {"whitened", Kind::real_list, "E||D_d^(-1/2) Z^(d)||^gamma for d = 1, 2, ..."},
        {"whitened-K", Kind::real, "uniform K with whitened moment K d^(gamma/2)"},
        {"whitened-mode", Kind::text, "none | crude | independent"},
        {"tail-moments", Kind::real_list, "E||Z^[d]||^gamma for d = 1, 2, ..."},
        {"rule", Kind::text,
         "max-feasible-thm4 | max-feasible-thm6 | max-feasible-thm9 | ex1 | ex2 | ex3 | ex3-fallback | ex4 | "
         "ex4-fallback | ex5"},
        {"example", Kind::integer, "example 1..5"},
        {"alpha", Kind::rational, "exponential spectrum alpha (rate)"},
        {"beta", Kind::rational, "exponential spectrum beta (rate)"},
        {"b", Kind::rational, "polynomial exponent b (rate)"},
        {"tau", Kind::rational, "logarithmic exponent tau (rate)"},
        {"compare", Kind::flag, "add the lower/upper comparison"},
        {"model", Kind::text, "three-point | two-point | gaussian | uniform"},
        {"lambda", Kind::real, "lattice step"},
        {"dim", Kind::integer, "simulated coordinates D (0: from rel-tol)"},
        {"rel-tol", Kind::real, "discarded tail share used when dim is 0"},
        {"functional", Kind::text, "delta | delta-inf | gaussian-max | x-max | x-final"},
        {"reps", Kind::integer, "replications"},
        {"seed", Kind::integer, "master seed (default from SA_LAB_SEED)"},
        {"inequality", Kind::text, "montgomery-smith | rosenthal"},
        {"mode", Kind::text, "empirical | enumerate"},
        {"x-multiples", Kind::real_list, "grid x / sqrt(n B_0^2)"},
        {"paths-out", Kind::text, "CSV path dump of replication 0"},
        {"format", Kind::text, "json | csv"},
        {"out", Kind::text, "output file (default stdout)"},
    };
    return t;
}

inline const Key& key(const std::string& name) {
    for (const auto& k : key_table())
        if (name == k.name) return k;
    throw std::invalid_argument("unknown key '" + name + "'");
}

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("SA_LAB_SEED")) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string("SA_LAB_SEED is not an unsigned integer: '") + env + "'");
    }
    return 1;
}

struct Subcommand {
    const char* name;
    const char* help;
    std::vector<std::string> keys;
};

inline const std::vector<Subcommand>& subcommands() {
    static const std::vector<Subcommand> s = {
        {"bound", "moment bound for Delta_n at a given or selected dimension",
         {"spectrum", "gamma", "psi", "n", "moment", "C-gamma", "strict-moments", "theorem", "d", "whitened",
          "whitened-K", "whitened-mode", "tail-moments", "model", "format", "out"}},
        {"select-dim", "truncation dimension by condition scan or example formula",
         {"spectrum", "gamma", "psi", "n", "moment", "C-gamma", "strict-moments", "rule", "whitened", "whitened-K",
          "whitened-mode", "model", "format", "out"}},
        {"rate", "exact rate exponents of the worked examples",
         {"example", "gamma", "psi", "alpha", "beta", "b", "tau", "compare", "format", "out"}},
        {"simulate", "quantile coupling and a Monte Carlo moment estimate",
         {"spectrum", "model", "lambda", "dim", "rel-tol", "n", "gamma", "functional", "reps", "seed", "paths-out",
          "format", "out"}},
        {"lower-bound", "lattice construction: k, Feller floor and simulated U",
         {"spectrum", "lambda", "n", "dim", "gamma", "reps", "seed", "format", "out"}},
        {"sweep", "moment estimates over an n grid with a log-log fit",
         {"spectrum", "model", "lambda", "dim", "rel-tol", "n-grid", "gamma", "functional", "reps", "seed", "format",
          "out"}},
        {"check", "maximal and moment inequality checks",
         {"inequality", "mode", "spectrum", "model", "lambda", "dim", "rel-tol", "n", "gamma", "reps", "seed",
          "x-multiples", "format", "out"}},
    };
    return s;
}

inline const Subcommand& subcommand(const std::string& name) {
    for (const auto& s : subcommands())
        if (name == s.name) return s;
    throw std::invalid_argument("unknown subcommand '" + name + "'");
}

inline json defaults(const std::string& sub) {
    json d;
    auto put = [&](const char* k, json v) {
        for (const auto& allowed : subcommand(sub).keys)
            if (allowed == k) d[k] = std::move(v);
    };
    put("gamma", sub == "simulate" ? 2.0 : 4.0);
    put("psi", 11.0);
    put("moment", 1.0);
    put("C-gamma", 1.0);
    put("strict-moments", false);
    put("theorem", "9");
    put("d", 0);
    put("whitened-mode", "none");
    put("rule", "max-feasible-thm9");
    put("compare", false);
    put("model", sub == "check" ? "two-point" : "three-point");
    put("lambda", 1.0);
    put("dim", sub == "lower-bound" ? 10000 : (sub == "check" ? 1 : 0));
    put("rel-tol", 1e-3);
    put("functional", "delta");
    put("reps", 10000);
    put("seed", default_seed());
    put("inequality", "montgomery-smith");
    put("mode", "empirical");
    put("x-multiples", json::array({0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0}));
    put("format", "json");
    put("out", "");
    return d;
}

// ---- value conversion: flag text or JSON value to the typed JSON stored in the config ----

inline double parse_real(const std::string& name, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw std::invalid_argument(name + ": '" + s + "' is not a number");
    return v;
}

inline std::uint64_t to_count(const std::string& name, double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
        throw std::invalid_argument(name + ": expected a nonnegative integer, got " + format_double(v));
    return static_cast<std::uint64_t>(v);
}

inline std::uint64_t parse_count(const std::string& name, const std::string& s) {
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw std::invalid_argument(name + ": '" + s + "' out of range");
        }
    }
    return to_count(name, parse_real(name, s));  // accepts 1e6
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

inline json convert(const Key& k, const json& v) {
    const std::string name = k.name;
    const bool is_text = v.is_string();
    const std::string s = is_text ? v.get<std::string>() : std::string();
    auto scalar_real = [&](const json& x) {
        if (x.is_number()) return x.get<double>();
        if (x.is_string()) return parse_real(name, x.get<std::string>());
        throw std::invalid_argument(name + ": expected a number");
    };
    auto scalar_count = [&](const json& x) -> std::uint64_t {
        if (x.is_number_unsigned()) return x.get<std::uint64_t>();
        if (x.is_number()) return to_count(name, x.get<double>());
        if (x.is_string()) return parse_count(name, x.get<std::string>());
        throw std::invalid_argument(name + ": expected an integer");
    };
    switch (k.kind) {
        case Kind::integer: return scalar_count(v);
        case Kind::real: return scalar_real(v);
        case Kind::text:
            if (!is_text) throw std::invalid_argument(name + ": expected a string");
            return s;
        case Kind::flag:
            if (v.is_boolean()) return v;
            if (is_text && (s == "true" || s == "1")) return true;
            if (is_text && (s == "false" || s == "0")) return false;
            throw std::invalid_argument(name + ": expected true or false");
        case Kind::rational: {
            const std::string text = is_text ? s : (v.is_number() ? format_double(v.get<double>()) : "");
            if (text.empty()) throw std::invalid_argument(name + ": expected a rational such as 3 or 2/3");
            return Rational::parse(text).str();
        }
        case Kind::int_list:
        case Kind::real_list: {
            json arr = json::array();
            const json items = is_text ? json(split_commas(s)) : v;
            if (!items.is_array() || items.empty()) throw std::invalid_argument(name + ": expected a nonempty list");
            for (const auto& x : items) {
                if (k.kind == Kind::int_list)
                    arr.push_back(scalar_count(x));
                else
                    arr.push_back(scalar_real(x));
            }
            return arr;
        }
    }
    return v;
}

// ---- typed access ----

inline bool has(const json& c, const char* k) { return c.contains(k) && !c[k].is_null(); }

inline const json& need(const json& c, const char* k) {
    if (!has(c, k)) throw std::invalid_argument(std::string("missing required option --") + k);
    return c.at(k);
}
inline std::uint64_t u64(const json& c, const char* k) { return need(c, k).get<std::uint64_t>(); }
inline double real(const json& c, const char* k) { return need(c, k).get<double>(); }
inline std::string text(const json& c, const char* k) { return need(c, k).get<std::string>(); }
inline std::vector<double> reals(const json& c, const char* k) { return need(c, k).get<std::vector<double>>(); }

inline Spectrum spectrum_of(const json& c) { return Spectrum::parse(text(c, "spectrum")); }

inline unsigned threads_or_default(std::optional<unsigned> t) { return t ? *t : 1u; }

// ---- subcommand bodies ----

struct Outcome {
    json result;
    std::string csv;       // nonempty when the subcommand produced CSV
    bool diagnostic = false;  // report produced but a numerical flag was raised
};

inline constexpr std::uint64_t kWhitenedTable = 10000;

inline ProblemInstance instance_of(const json& c) {
    ProblemInstance inst{.n = u64(c, "n"),
                         .gamma = real(c, "gamma"),
                         .psi = real(c, "psi"),
                         .spectrum = spectrum_of(c),
                         .moment_Z = real(c, "moment"),
                         .whitened = std::nullopt,
                         .tail_moments = std::nullopt,
                         .C_gamma = real(c, "C-gamma"),
                         .strict_moments = need(c, "strict-moments").get<bool>()};
    if (has(c, "whitened")) inst.whitened = WhitenedMoments{.per_dim = reals(c, "whitened"), .uniform_K = std::nullopt};
    if (has(c, "whitened-K")) inst.whitened = WhitenedMoments{.per_dim = {}, .uniform_K = real(c, "whitened-K")};
    if (has(c, "tail-moments")) inst.tail_moments = reals(c, "tail-moments");
    const std::string mode = text(c, "whitened-mode");
    if (mode != "none") {
        if (inst.whitened) throw std::invalid_argument("whitened-mode cannot be combined with whitened or whitened-K");
        std::uint64_t T = kWhitenedTable;
        if (const auto sz = inst.spectrum.support_size()) T = std::min<std::uint64_t>(T, *sz);
        // stop where sigma_d^2 underflows; no condition can hold past that point
        for (std::uint64_t d = 1; d <= T; ++d)
            if (!(inst.spectrum.sigma_sq(d) > 0.0) || !std::isfinite(std::pow(inst.spectrum.sigma_sq(d), -inst.gamma / 2.0))) {
                T = d - 1;
                break;
            }
        if (T == 0) throw std::invalid_argument("whitened-mode: sigma_1^gamma is not representable");
        WhitenedMoments w;
        if (mode == "crude") {
            for (std::uint64_t d = 1; d <= T; ++d)
                w.per_dim.push_back(whitened_moment_bound(inst, d, WhitenedMode::crude).value);
        } else if (mode == "independent") {
            const IncrementModel model(parse_increment_kind(text(c, "model")), inst.spectrum, T,
                                       std::sqrt(inst.spectrum.sigma_sq(1)));
            const auto ratios = model.coordinate_ratios(T, inst.gamma);
            double sum = 0.0;
            for (std::uint64_t d = 1; d <= T; ++d) {
                sum += ratios[d - 1];
                w.per_dim.push_back(std::pow(static_cast<double>(d), inst.gamma / 2.0) + sum);
            }
        } else {
            throw std::invalid_argument("whitened-mode must be none, crude or independent");
        }
        inst.whitened = std::move(w);
    }
    inst.validate();
    return inst;
}

inline Outcome run_bound(const json& c) {
    const ProblemInstance inst = instance_of(c);
    const std::string th = text(c, "theorem");
    Outcome o;
    std::uint64_t d = u64(c, "d");
    o.result["dimension"] = nullptr;
    if (th != "trivial" && th != "3" && th != "6" && th != "9")
        throw std::invalid_argument("theorem must be 3, 6, 9 or trivial");
    if (th != "trivial" && d == 0) {
        const ConditionVariant v =
            th == "3" ? ConditionVariant::thm4 : (th == "6" ? ConditionVariant::thm6 : ConditionVariant::thm9);
        const DimensionChoice choice = select_max_feasible(v, inst);
        o.result["dimension"] = to_json(choice);
        d = choice.d;
    }
    BoundReport rep;
    if (th == "trivial" || d == 0)
        rep = trivial_rosenthal_bound(inst);
    else if (th == "3")
        rep = bound_thm3(inst, d);
    else if (th == "6")
        rep = bound_thm6(inst, d);
    else
        rep = bound_thm9(inst, d);
    o.result["d"] = d;
    o.result["report"] = to_json(rep);
    const BoundReport triv = trivial_rosenthal_bound(inst);
    o.result["trivial"] = to_json(triv);
    o.diagnostic = rep.overflow() || triv.overflow();
    return o;
}

inline Outcome run_select_dim(const json& c) {
    const ProblemInstance inst = instance_of(c);
    const std::string rule = text(c, "rule");
    DimensionChoice choice;
    std::optional<ConditionVariant> v;
    if (rule == "max-feasible-thm4") v = ConditionVariant::thm4;
    if (rule == "max-feasible-thm6") v = ConditionVariant::thm6;
    if (rule == "max-feasible-thm9") v = ConditionVariant::thm9;
    if (v) {
        choice = select_max_feasible(*v, inst);
    } else {
        static const std::map<std::string, ExampleRule> rules = {
            {"ex1", ExampleRule::ex1}, {"ex2", ExampleRule::ex2}, {"ex3", ExampleRule::ex3},
            {"ex3-fallback", ExampleRule::ex3_fallback}, {"ex4", ExampleRule::ex4},
            {"ex4-fallback", ExampleRule::ex4_fallback}, {"ex5", ExampleRule::ex5}};
        const auto it = rules.find(rule);
        if (it == rules.end()) throw std::invalid_argument("rule '" + rule + "' unknown");
        choice = select_example_dimension(it->second, inst);
    }
    Outcome o;
    o.result = to_json(choice);
    return o;
}

inline Outcome run_rate(const json& c) {
    const auto ex = static_cast<int>(u64(c, "example"));
    RateParams p{.gamma = Rational::parse(format_double(real(c, "gamma"))),
                 .psi = Rational::parse(format_double(real(c, "psi"))),
                 .alpha = std::nullopt,
                 .beta = std::nullopt,
                 .b = std::nullopt,
                 .tau = std::nullopt};
    if (has(c, "alpha")) p.alpha = Rational::parse(text(c, "alpha"));
    if (has(c, "beta")) p.beta = Rational::parse(text(c, "beta"));
    if (has(c, "b")) p.b = Rational::parse(text(c, "b"));
    if (has(c, "tau")) p.tau = Rational::parse(text(c, "tau"));
    Outcome o;
    o.result = to_json(asymptotic_rate(ex, p));
    if (need(c, "compare").get<bool>()) {
        if (ex != 1 && ex != 3 && ex != 5) throw std::invalid_argument("compare is available for examples 1, 3 and 5");
        o.result["comparison"] = to_json(compare_lower_upper(ex, p));
    }
    return o;
}

inline std::uint64_t resolve_dim(const json& c, const Spectrum& s) {
    std::uint64_t D = u64(c, "dim");
    if (D == 0) D = truncation_dim(s, real(c, "rel-tol")).dim;
    return D;
}

inline IncrementModel model_of(const json& c) {
    const Spectrum s = spectrum_of(c);
    return IncrementModel(parse_increment_kind(text(c, "model")), s, resolve_dim(c, s), real(c, "lambda"));
}

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open '" + path + "' for writing");
    f << body;
}

inline Outcome run_simulate(const json& c, unsigned threads) {
    const Scenario sc{.model = model_of(c), .n = u64(c, "n"), .functional = parse_functional(text(c, "functional"))};
    const std::uint64_t seed = u64(c, "seed");
    const MCEstimate e = estimate_moment(sc, real(c, "gamma"), u64(c, "reps"), seed, threads);
    Outcome o;
    o.result = {{"model", sc.model.str()}, {"dim", sc.model.dim()}, {"n", sc.n}, {"estimate", to_json(e)}};
    if (has(c, "paths-out")) {
        RngStream rng(seed, 0);
        const CouplingPaths p = couple_quantile(sc.model, sc.n, rng);
        write_file(text(c, "paths-out"), paths_csv(p, sc.model.str(), seed));
        o.result["paths_out"] = text(c, "paths-out");
    }
    if (text(c, "format") == "csv") {
        SweepResult one;
        one.scenario_id = sc.id();
        one.gamma = real(c, "gamma");
        one.rows.push_back({sc.n, e});
        o.csv = sweep_csv(one);
    }
    return o;
}

inline Outcome run_sweep(const json& c, unsigned threads) {
    const Scenario sc{.model = model_of(c), .n = 1, .functional = parse_functional(text(c, "functional"))};
    const auto grid = need(c, "n-grid").get<std::vector<std::uint64_t>>();
    const SweepResult res = sweep(sc, grid, real(c, "gamma"), u64(c, "reps"), u64(c, "seed"), threads);
    Outcome o;
    o.result = to_json(res);
    if (text(c, "format") == "csv") o.csv = sweep_csv(res);
    return o;
}

inline Outcome run_lower_bound(const json& c, unsigned threads) {
    const LatticeInstance li = build_lattice_instance(spectrum_of(c), real(c, "lambda"), u64(c, "n"), u64(c, "dim"));
    const USummary u = simulate_U(li, u64(c, "reps"), u64(c, "seed"), threads);
    const double g = real(c, "gamma");
    Outcome o;
    o.result = to_json(li, u, lower_moment_bound(li, g), g);
    return o;
}

inline Outcome run_check(const json& c, unsigned threads) {
    const IncrementModel model = model_of(c);
    const std::uint64_t n = u64(c, "n");
    const std::string ineq = text(c, "inequality");
    const std::string mode = text(c, "mode");
    if (mode != "empirical" && mode != "enumerate") throw std::invalid_argument("mode must be empirical or enumerate");
    Outcome o;
    o.result["model"] = model.str();
    o.result["n"] = n;
    if (ineq == "montgomery-smith") {
        const double scale = std::sqrt(static_cast<double>(n) * model.spectrum().total_variance());
        std::vector<double> xs;
        for (double m : reals(c, "x-multiples")) xs.push_back(m * scale);
        const auto pts = mode == "enumerate"
                             ? exact_check_montgomery_smith(model, n, xs)
                             : empirical_check_montgomery_smith(model, n, xs, u64(c, "reps"), u64(c, "seed"), threads);
        bool holds = true;
        o.result["points"] = json::array();
        for (const auto& p : pts) {
            o.result["points"].push_back(to_json(p));
            holds = holds && p.margin <= 4.0 * p.std_error;
        }
        o.result["holds"] = holds;
    } else if (ineq == "rosenthal") {
        const double g = real(c, "gamma");
        const RosenthalCheck r = mode == "enumerate"
                                     ? enumerate_rosenthal(model, n, g)
                                     : empirical_check_rosenthal(model, n, g, u64(c, "reps"), u64(c, "seed"), threads);
        o.result["rosenthal"] = to_json(r);
        o.result["holds"] = r.ratio <= 3.0 + 4.0 * r.ratio_stderr;
    } else {
        throw std::invalid_argument("inequality must be montgomery-smith or rosenthal");
    }
    return o;
}

// ---- entry point ----

inline json read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config file '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
}

inline json resolve(const Subcommand& sub, const std::string& config_path,
                    const std::map<std::string, std::string>& flags) {
    json cfg = defaults(sub.name);
    auto allowed = [&](const std::string& k) {
        for (const auto& a : sub.keys)
            if (a == k) return true;
        return false;
    };
    if (!config_path.empty()) {
        const json file = read_config_file(config_path);
        if (!file.is_object()) throw std::invalid_argument("config file must hold a JSON object");
        for (const auto& [k, v] : file.items()) {
            if (k == "subcommand") {
                if (v != sub.name) throw std::invalid_argument("config file is for subcommand " + v.dump());
                continue;
            }
            if (k == "threads") continue;
            if (!allowed(k)) throw std::invalid_argument("config key '" + k + "' is not valid for " + sub.name);
            cfg[k] = convert(key(k), v);
        }
    }
    for (const auto& [k, v] : flags) cfg[k] = convert(key(k), json(v));
    const std::string fmt = cfg.value("format", "json");
    if (fmt != "json" && fmt != "csv") throw std::invalid_argument("format must be json or csv");
    if (fmt == "csv" && std::string(sub.name) != "sweep" && std::string(sub.name) != "simulate")
        throw std::invalid_argument("csv output is available for sweep and simulate");
    return cfg;
}

inline std::string render(const std::string& sub, const json& cfg, const Outcome& o) {
    // key-sorted so a config read from file and the same config given as flags render alike
    nlohmann::json echo = nlohmann::json::parse(cfg.dump());
    echo.erase("out");
    if (!o.csv.empty()) return "# config: " + nlohmann::json{{"config", echo}, {"subcommand", sub}}.dump() + "\r\n" + o.csv;
    json doc;
    doc["subcommand"] = sub;
    doc["config"] = echo;
    doc["result"] = o.result;
    return doc.dump(2) + "\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"strong approximation lab"};
    app.require_subcommand(1);
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::map<std::string, bool>> raw_flags;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, unsigned> thread_counts;
    for (const auto& s : subcommands()) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", config_paths[s.name], "JSON config file; flags override it");
        sc->add_option("--threads", thread_counts[s.name], "worker cap (results do not depend on it)");
        for (const auto& k : s.keys) {
            const Key& kk = key(k);
            if (kk.kind == Kind::flag)
                sc->add_flag("--" + k, raw_flags[s.name][k], kk.help);
            else
                sc->add_option("--" + k, raw[s.name][k], kk.help);
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    const CLI::App* chosen = app.get_subcommands().front();
    const Subcommand& sub = subcommand(chosen->get_name());
    try {
        std::map<std::string, std::string> flags;
        for (const auto& k : sub.keys) {
            if (chosen->count("--" + k) == 0) continue;
            flags[k] = key(k).kind == Kind::flag ? (raw_flags[sub.name][k] ? "true" : "false") : raw[sub.name][k];
        }
        const json cfg = resolve(sub, config_paths[sub.name], flags);
        const std::optional<unsigned> threads =
            chosen->count("--threads") ? std::optional<unsigned>(thread_counts[sub.name]) : std::nullopt;
        const unsigned t = threads_or_default(threads);
        const std::string name = sub.name;
        Outcome o;
        if (name == "bound") o = run_bound(cfg);
        else if (name == "select-dim") o = run_select_dim(cfg);
        else if (name == "rate") o = run_rate(cfg);
        else if (name == "simulate") o = run_simulate(cfg, t);
        else if (name == "sweep") o = run_sweep(cfg, t);
        else if (name == "lower-bound") o = run_lower_bound(cfg, t);
        else o = run_check(cfg, t);
        const std::string body = render(name, cfg, o);
        const std::string path = cfg.value("out", "");
        if (path.empty())
            out << body;
        else
            write_file(path, body);
        if (o.diagnostic) {
            err << "numerical diagnostic: magnitude above 1e300 (see log10 fields)\n";
            return 3;
        }
        return 0;
    } catch (const NumericalDiagnostic& e) {
        err << "numerical diagnostic: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        err << "numerical diagnostic: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n\n" << chosen->help();
        return 2;
    }
}

}  // namespace salab::cli

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" SALAB_CLI_PATH "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json result_of(const Run& r) { return nlohmann::json::parse(r.out).at("result"); }

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("bound --no-such-flag 1").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
    EXPECT_EQ(cli("bound --help").code, 0);
}

TEST(Cli, InvalidInputExitsTwo) {
    EXPECT_EQ(cli("bound --spectrum poly:2 --n 1e6 --gamma 0.5").code, 2);
    EXPECT_EQ(cli("bound --spectrum poly:0.5 --n 10").code, 2);
    EXPECT_EQ(cli("bound --spectrum poly:2 --n 10 --psi 12").code, 2);
    EXPECT_EQ(cli("rate --example 9").code, 2);
    EXPECT_EQ(cli("bound --spectrum poly:2 --n 10 --format csv").code, 2);
    EXPECT_EQ(cli("simulate --spectrum poly:2 --n 3 --dim 2 --reps 1").code, 2);
}

TEST(Cli, NumericalDiagnosticExitsThree) {
    EXPECT_EQ(cli("lower-bound --spectrum poly:2 --n 1e4 --dim 150 --reps 10").code, 3);
    const auto big = cli("bound --spectrum poly:2 --n 1e18 --gamma 60 --theorem 9 --d 2");
    EXPECT_EQ(big.code, 3);
    const auto total = result_of(big)["report"]["total"];
    EXPECT_TRUE(total["value"].is_null());
    EXPECT_GT(total["log10"].get<double>(), 300.0);
}

TEST(Cli, BoundSelectsDimension) {
    const auto r = cli("bound --spectrum poly:2 --n 1e6 --theorem 9");
    ASSERT_EQ(r.code, 0);
    const auto j = result_of(r);
    EXPECT_EQ(j["d"].get<int>(), 3);
    EXPECT_TRUE(j["report"]["condition_ok"].get<bool>());
}

TEST(Cli, RateExampleThree) {
    const auto r = cli("rate --example 3 --b 2");
    ASSERT_EQ(r.code, 0);
    const auto j = result_of(r);
    EXPECT_EQ(j["aux"]["r"].get<std::string>(), "1/25");
    EXPECT_EQ(j["aux"]["delta"].get<std::string>(), "1/4");
    EXPECT_EQ(j["dominant"]["n_power"].get<std::string>(), "49/25");
}

TEST(Cli, DeterministicAcrossRunsAndThreads) {
    const std::string args = "simulate --spectrum poly:2 --n 20 --dim 8 --reps 400 --seed 5 --gamma 4";
    const auto a = cli(args), b = cli(args), c = cli(args + " --threads 4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_NE(a.out, cli("simulate --spectrum poly:2 --n 20 --dim 8 --reps 400 --seed 6 --gamma 4").out);
}

TEST(Cli, SeedFromEnvironment) {
    const auto r = cli("simulate --spectrum poly:2 --n 5 --dim 4 --reps 10", "SA_LAB_SEED=77");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["config"]["seed"].get<int>(), 77);
    const auto flag = cli("simulate --spectrum poly:2 --n 5 --dim 4 --reps 10 --seed 3", "SA_LAB_SEED=77");
    EXPECT_EQ(nlohmann::json::parse(flag.out)["config"]["seed"].get<int>(), 3);
}

TEST(Cli, ConfigFileAndFlagOverride) {
    const auto path = temp_file("salab_test_config.json");
    {
        std::ofstream f(path);
        f << R"({"subcommand": "bound", "spectrum": "poly:2", "n": 1000000, "theorem": "9", "threads": 2})";
    }
    const auto from_file = cli("bound --config " + path.string());
    const auto from_flags = cli("bound --spectrum poly:2 --n 1e6 --theorem 9");
    ASSERT_EQ(from_file.code, 0);
    EXPECT_EQ(from_file.out, from_flags.out);
    const auto overridden = cli("bound --config " + path.string() + " --n 100");
    EXPECT_EQ(nlohmann::json::parse(overridden.out)["config"]["n"].get<int>(), 100);
    {
        std::ofstream f(path);
        f << R"({"spectrum": "poly:2", "reps": 10})";
    }
    EXPECT_EQ(cli("bound --config " + path.string()).code, 2);
    std::filesystem::remove(path);
    EXPECT_EQ(cli("bound --config /nonexistent/salab.json").code, 2);
}

TEST(Cli, CsvSweep) {
    const auto r = cli("sweep --spectrum poly:2 --dim 4 --n-grid 2,4,8 --reps 20 --functional gaussian-max --format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("# config: ", 0), 0u);
    EXPECT_NE(r.out.find("\r\nn,mean,stderr,reps,seed,scenario_id\r\n"), std::string::npos);
    EXPECT_NE(r.out.find("\r\n8,"), std::string::npos);
}

TEST(Cli, OutputFile) {
    const auto path = temp_file("salab_test_out.json");
    const auto r = cli("rate --example 4 --b 2 --out " + path.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    const auto doc = nlohmann::json::parse(f);
    EXPECT_EQ(doc["subcommand"].get<std::string>(), "rate");
    EXPECT_FALSE(doc["config"].contains("out"));
    std::filesystem::remove(path);
}

TEST(Cli, LowerBoundAndCheck) {
    const auto lb = cli("lower-bound --spectrum poly:2 --n 1e3 --dim 3000 --reps 200");
    ASSERT_EQ(lb.code, 0);
    EXPECT_EQ(result_of(lb)["k"].get<int>(), 31);
    const auto ms = cli("check --spectrum poly:2 --n 2 --dim 1 --mode enumerate");
    ASSERT_EQ(ms.code, 0) << ms.out;
    EXPECT_TRUE(result_of(ms)["holds"].get<bool>());
}

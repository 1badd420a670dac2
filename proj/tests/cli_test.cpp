// Contract tests for the pcosync CLI: exit codes, file outputs and the
// reproduce-from-embedded-config property. The binary path and the shipped
// config directory come in through compile definitions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = PCOSYNC_CLI_PATH;
const fs::path kConfigs = PCOSYNC_CONFIG_DIR;

int run(const std::string& args, const fs::path& cwd) {
    const std::string cmd = "cd " + cwd.string() + " && " + kCli + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pcosync_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("prf-check exit codes") {
    TempDir tmp;
    CHECK(run("prf-check --family tanh --epsilon 0.4 --grid 2000", tmp.path) == 0);
    CHECK(run("prf-check --family sine --amplitude 1.0", tmp.path) == 0);
    CHECK(run("prf-check --family tanh --epsilon -1", tmp.path) == 2);
    CHECK(run("prf-check --no-such-flag", tmp.path) == 2);

    // a sign-violating table fails the check (exit 1), with violations listed
    {
        std::ofstream csv(tmp.path / "bad.csv");
        csv << "angle,value\n";
        for (double x = -3.1; x <= 3.1; x += 0.1) csv << x << "," << -std::sin(x) << "\n";
    }
    CHECK(run("prf-check --table bad.csv", tmp.path) == 1);
    CHECK(slurp(tmp.path / "cli_stdout.txt").find("sign") != std::string::npos);
    CHECK(run("prf-check --table missing.csv", tmp.path) == 2);
}

TEST_CASE("bounds regime dispatch") {
    TempDir tmp;
    const std::string scenario = (kConfigs / "two_node.json").string();
    REQUIRE(run("bounds --scenario " + scenario + " --eps-bar 1.0 -o b1.json", tmp.path) == 0);
    const auto inner = nlohmann::json::parse(slurp(tmp.path / "b1.json"));
    CHECK(inner["bounds"]["regime"] == "inside_half_pi");
    CHECK(inner["bounds"].contains("alpha1"));
    CHECK(inner["bounds"]["guarantee_applicable"] == true);

    REQUIRE(run("bounds --scenario " + scenario + " --eps-bar 2.0 -o b2.json", tmp.path) == 0);
    const auto outer = nlohmann::json::parse(slurp(tmp.path / "b2.json"));
    CHECK(outer["bounds"]["regime"] == "outside_half_pi");
    CHECK(outer["bounds"].contains("alpha2"));

    CHECK(run("bounds --scenario " + scenario + " --eps-bar 4.0", tmp.path) == 2);
    CHECK(run("bounds --scenario nope.json --eps-bar 1.0", tmp.path) == 2);
}

TEST_CASE("simulate writes a trajectory and a summary that round-trips") {
    TempDir tmp;
    // zero-init scenario: synchronized from the start
    {
        nlohmann::json sc;
        sc["topology"] = {{"n", 2}, {"edges", {{0, 1}}}, {"g", {0.01, 0.01}}, {"l", 0.01}, {"T", 1.0}};
        sc["qg"] = {{"family", "tanh"}, {"epsilon", 0.4}};
        sc["ql"] = {{"family", "tanh"}, {"epsilon", 0.4}};
        sc["init"] = {0.0, 0.0};
        sc["t_max"] = 10.0;
        std::ofstream out(tmp.path / "zero.json");
        out << sc.dump();
    }
    REQUIRE(run("simulate --scenario zero.json -o run1", tmp.path) == 0);
    const auto summary = nlohmann::json::parse(slurp(tmp.path / "run1.json"));
    CHECK(summary["converged"] == true);
    CHECK(summary["t_sync"] == 0.0);
    const std::string csv = slurp(tmp.path / "run1.csv");
    CHECK(csv.find("# config:") != std::string::npos);
    CHECK(csv.find("t,xi_0,xi_1,norm2,norm_inf") != std::string::npos);

    // re-running from the embedded config reproduces the outputs byte for byte
    {
        std::ofstream out(tmp.path / "embedded.json");
        out << summary["config"].dump();
    }
    REQUIRE(run("simulate --scenario embedded.json -o run2", tmp.path) == 0);
    CHECK(slurp(tmp.path / "run2.csv") == csv);

    // pulse simulator on the shipped two-node scenario
    const std::string scenario = (kConfigs / "two_node.json").string();
    REQUIRE(run("simulate --scenario " + scenario + " --simulator pulse --t-max 30 -o pulse1", tmp.path) == 0);
    const auto psum = nlohmann::json::parse(slurp(tmp.path / "pulse1.json"));
    CHECK(psum.contains("pulse_totals"));
}

TEST_CASE("sweep writes report files deterministically") {
    TempDir tmp;
    {
        nlohmann::json cfg;
        cfg["topology"] = {{"n", 3}, {"edges", {{0, 1}, {1, 2}}}, {"g", {0.05, 0.0, 0.0}}, {"l", 0.05}, {"T", 1.0}};
        cfg["qg"] = {{"family", "tanh"}, {"epsilon", 0.4}};
        cfg["ql"] = {{"family", "tanh"}, {"epsilon", 0.4}};
        cfg["init"] = {{"uniform", {-1.4, 1.4}}};
        cfg["seed"] = 7;
        cfg["runs"] = 4;
        cfg["t_max"] = 400.0;
        cfg["dt"] = 0.05;
        cfg["rows"] = {{"param", "eps_g"}, {"values", {0.8, 0.4}}};
        std::ofstream out(tmp.path / "exp.json");
        out << cfg.dump();
    }
    REQUIRE(run("sweep --config exp.json -o out1 --format csv", tmp.path) == 0);
    REQUIRE(run("sweep --config exp.json -o out2 --format csv", tmp.path) == 0);
    const std::string a = slurp(tmp.path / "out1/report.csv");
    CHECK(a == slurp(tmp.path / "out2/report.csv"));
    CHECK(slurp(tmp.path / "out1/report.json") == slurp(tmp.path / "out2/report.json"));
    CHECK(a.find("# config:") != std::string::npos);
    CHECK(fs::exists(tmp.path / "out1/table.txt"));

    // reproduce from the embedded config
    const auto rep = nlohmann::json::parse(slurp(tmp.path / "out1/report.json"));
    {
        std::ofstream out(tmp.path / "embedded_exp.json");
        out << rep["config"].dump();
    }
    REQUIRE(run("sweep --config embedded_exp.json -o out3 --format csv", tmp.path) == 0);
    CHECK(slurp(tmp.path / "out3/report.csv") == a);

    CHECK(run("sweep --config exp.json --format nope", tmp.path) == 2);
}

TEST_CASE("desync census on a trivially synchronized cell") {
    TempDir tmp;
    {
        nlohmann::json cfg;
        cfg["topology"] = {{"n", 2}, {"edges", {{0, 1}}}, {"g", {0.05, 0.05}}, {"l", 0.05}, {"T", 1.0}};
        cfg["qg"] = {{"family", "tanh"}, {"epsilon", 0.4}};
        cfg["ql"] = {{"family", "tanh"}, {"epsilon", 0.4}};
        cfg["init"] = {{"uniform", {-1.0, 1.0}}};
        cfg["seed"] = 3;
        cfg["runs"] = 5;
        cfg["t_max"] = 300.0;
        cfg["dt"] = 0.05;
        std::ofstream out(tmp.path / "census.json");
        out << cfg.dump();
    }
    REQUIRE(run("desync-census --config census.json -o census_out.json", tmp.path) == 0);
    const auto j = nlohmann::json::parse(slurp(tmp.path / "census_out.json"));
    CHECK(j["runs"] == 5);
    CHECK(j["fraction"] == 0.0);
}

TEST_CASE("environment variable supplies the default output directory") {
    TempDir tmp;
    const std::string scenario = (kConfigs / "two_node.json").string();
    const std::string cmd = "cd " + tmp.path.string() + " && PCOSYNC_OUT_DIR=envout " + kCli +
                            " simulate --scenario " + scenario + " --t-max 5 >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(tmp.path / "envout" / "simulate.csv"));
    CHECK(fs::exists(tmp.path / "envout" / "simulate.json"));
}

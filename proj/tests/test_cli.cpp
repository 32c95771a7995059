// End-to-end checks of the command-line tool: artifact determinism, exit
// codes, and the verify round trip. Runs the built binary in scratch
// directories.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const fs::path& dir, const std::string& args) {
    const std::string cmd = "cd " + dir.string() + " && " + SOLITON_BIN + " " + args +
                            " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("soliton_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("bowl artifacts are byte-deterministic") {
    const auto d1 = scratch("bowl1");
    const auto d2 = scratch("bowl2");
    const std::string args = "bowl --n 2 --f0 0 --s-max 5 --verify";
    REQUIRE(run_cli(d1, args) == 0);
    REQUIRE(run_cli(d2, args) == 0);
    for (const char* name : {"bowl.csv", "bowl.svg", "bowl_residual.json", "bowl.obj",
                             "bowl_meta.json"}) {
        CHECK(fs::exists(d1 / name));
        CHECK(slurp(d1 / name) == slurp(d2 / name));
    }
}

TEST_CASE("verify on an emitted CSV reproduces the in-process residual") {
    const auto dir = scratch("roundtrip");
    REQUIRE(run_cli(dir, "bowl --n 2 --f0 0 --s-max 5 --verify") == 0);
    REQUIRE(run_cli(dir, "verify --input bowl.csv --family rotation --n 2") == 0);
    const auto bundle = nlohmann::json::parse(slurp(dir / "bowl_residual.json"));
    const auto standalone = nlohmann::json::parse(slurp(dir / "bowl_ode_residual.json"));
    const double a = bundle["ode"]["max"].get<double>();
    const double b = standalone["max"].get<double>();
    CHECK(std::abs(a - b) <= 1e-12);
    const auto soliton = nlohmann::json::parse(slurp(dir / "bowl_soliton_residual.json"));
    CHECK(std::abs(bundle["soliton"]["max"].get<double>() - soliton["max"].get<double>()) <=
          1e-12);
}

TEST_CASE("wing emits the branch-tagged traversal") {
    const auto dir = scratch("wing");
    REQUIRE(run_cli(dir, "wing --n 2 --s0 1 --r0 0 --s-max 6") == 0);
    const auto csv = slurp(dir / "wing.csv");
    CHECK(csv.rfind("s,f,branch\n", 0) == 0);
    CHECK(csv.find(",vertex\n") != std::string::npos);
    CHECK(csv.find(",minus\n") != std::string::npos);
    CHECK(csv.find(",plus\n") != std::string::npos);
    CHECK(fs::exists(dir / "wing.svg"));
}

TEST_CASE("phase reports the saddle") {
    const auto dir = scratch("phase");
    REQUIRE(run_cli(dir, "phase --n 2 --box -0.5,5,-2,2") == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "phase_equilibria.json"));
    REQUIRE(doc["equilibria"].size() == 1);
    const auto& eq = doc["equilibria"][0];
    CHECK(std::abs(eq["location"][0].get<double>()) <= 1e-10);
    CHECK(std::abs(eq["location"][1].get<double>()) <= 1e-10);
    CHECK(eq["eigenvalues"][0].get<double>() == 1.0);
    CHECK(eq["eigenvalues"][1].get<double>() == -2.0);
    CHECK(eq["admissible_saddle"].get<bool>());
    CHECK(fs::exists(dir / "phase.svg"));
}

TEST_CASE("fiber-check JSON matches the formula") {
    const auto dir = scratch("fiber");
    REQUIRE(run_cli(dir, "fiber-check --n 2 --s 1") == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "fiber_check.json"));
    CHECK(doc["h_rel_err"].get<double>() <= 1e-6);
    CHECK(doc["grad_pi_max_abs_err"].get<double>() <= 1e-10);
}

TEST_CASE("numerical events exit with code 2 but still write artifacts") {
    const auto dir = scratch("event");
    const int code = run_cli(dir, "trajectory --family dilation --n 2 --from 0.5,0,0 --to 1");
    CHECK(code == 2);
    CHECK(fs::exists(dir / "trajectory.csv"));
    const auto meta = slurp(dir / "trajectory_meta.json");
    CHECK((meta.find("step_underflow") != std::string::npos ||
           meta.find("blow_up") != std::string::npos));
}

TEST_CASE("validation failures exit with code 1") {
    const auto dir = scratch("badargs");
    CHECK(run_cli(dir, "bowl --n 1 --f0 0 --s-max 5") == 1);
    CHECK(run_cli(dir, "trajectory --family custom --from 1,0,0 --to 2") == 1);
    CHECK(run_cli(dir, "trajectory --family rotation --from 1,0 --to 2") == 1);
    CHECK(run_cli(dir, "verify --input missing.csv --family rotation") == 1);
}

TEST_CASE("config file supplies defaults, flags win") {
    const auto dir = scratch("config");
    {
        std::ofstream cfg(dir / "run.json");
        cfg << R"({"n": 2, "f0": 0.5, "s_max": 2.0, "out": "from_config"})";
    }
    REQUIRE(run_cli(dir, "bowl --config run.json") == 0);
    CHECK(fs::exists(dir / "from_config.csv"));
    REQUIRE(run_cli(dir, "bowl --config run.json --out flag_wins") == 0);
    CHECK(fs::exists(dir / "flag_wins.csv"));
    // f0 from the config shows up in the first CSV row.
    const auto csv = slurp(dir / "from_config.csv");
    const auto second_line = csv.substr(csv.find('\n') + 1, 80);
    CHECK(second_line.find("5.0000000000000000e-01") != std::string::npos);
}

TEST_CASE("custom profile file drives the trajectory subcommand") {
    const auto dir = scratch("custom");
    {
        std::ofstream p(dir / "flat.json");
        p << R"({"n": 2, "domain": [0, 10], "alpha": "1", "phi_hat": "1", "h": "0"})";
    }
    REQUIRE(run_cli(dir, "trajectory --family custom --profile flat.json --from 5,0,0 --to 5.5") ==
            0);
    const auto meta = slurp(dir / "trajectory_meta.json");
    CHECK(meta.find("reached_end") != std::string::npos);
}

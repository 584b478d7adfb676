#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "steerlab/cli.hpp"

using namespace steerlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

// Drops the trailing wall_ms column so timing noise does not enter
// byte-for-byte comparisons.
std::string strip_last_column(const std::string& csv) {
    std::string out;
    for (const auto& line : split_lines(csv)) {
        const auto pos = line.rfind(',');
        out += line.substr(0, pos) + "\n";
    }
    return out;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "steerlab_test_cli" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = std::string("\"") + STEERLAB_CLI_PATH + "\" " + args + " > /dev/null";
    if (!stderr_to.empty()) cmd += " 2> \"" + stderr_to.string() + "\"";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config: minimal loop config gets defaults") {
    auto cfg = cli::parse_config_json(R"({"experiment":"loop","r":0.5,"xi":1e-3})");
    cli::validate_config(cfg);
    REQUIRE(cfg.experiment == cli::ExperimentKind::Loop);
    REQUIRE(cfg.r_or_default() == 0.5);
    REQUIRE(cfg.xi.size() == 1);
    REQUIRE(cfg.xi[0] == 1e-3);
    REQUIRE(cfg.phi0 == 0.0);
    REQUIRE(cfg.frame == Frame::Lab);
    REQUIRE(cfg.out_dir == "out");
}

TEST_CASE("config: unknown keys are rejected by name") {
    try {
        cli::parse_config_json(R"({"experiment":"loop","bogus":1,"wurst":2})");
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("bogus") != std::string::npos);
        REQUIRE(msg.find("wurst") != std::string::npos);
    }
}

TEST_CASE("config: out-of-range values name the field") {
    auto cfg = cli::parse_config_json(R"({"experiment":"loop","xi":0})");
    try {
        cli::validate_config(cfg);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("xi") == 0);
    }

    auto cfg2 = cli::parse_config_json(R"({"experiment":"loop","r":-1})");
    REQUIRE_THROWS_AS(cli::validate_config(cfg2), std::invalid_argument);
    REQUIRE_THROWS_AS(cli::parse_config_json("not json at all"), std::invalid_argument);
    REQUIRE_THROWS_AS(cli::parse_config_json(R"({"r":0.2,"r1":0.3})"), std::invalid_argument);
    REQUIRE_THROWS_AS(cli::parse_config_json(R"({"frame":"bogus"})"), std::invalid_argument);
}

TEST_CASE("config: xi_range expands geometrically") {
    auto cfg = cli::parse_config_json(R"({"experiment":"sweep","xi_range":"1e-1:1e-4:0.5"})");
    cli::validate_config(cfg);
    REQUIRE(cfg.xi.size() == 10);
    REQUIRE(cfg.xi.front() == 1e-1);
    for (size_t k = 1; k < cfg.xi.size(); ++k)
        REQUIRE(cfg.xi[k] == Catch::Approx(cfg.xi[k - 1] * 0.5).epsilon(1e-12));
    REQUIRE(cfg.xi.back() >= 1e-4);
    REQUIRE(cfg.xi.back() * 0.5 < 1e-4);

    REQUIRE_THROWS_AS(cli::expand_xi_range(1e-1, 1e-4, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(cli::expand_xi_range(1e-1, 1e-4, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(cli::expand_xi_range(1e-4, 1e-1, 0.5), std::invalid_argument);
    std::vector<double> v;
    REQUIRE_FALSE(cli::parse_xi_range_spec("nonsense", v).empty());
}

TEST_CASE("config: loop takes exactly one xi") {
    auto cfg = cli::parse_config_json(R"({"experiment":"loop","xi":[1e-2,1e-3]})");
    REQUIRE_THROWS_AS(cli::validate_config(cfg), std::invalid_argument);
}

TEST_CASE("csv serialization: 12 significant digits, LF endings") {
    REQUIRE(cli::sci(1.0) == "1.00000000000e+00");
    REQUIRE(cli::sci(-0.0118088731474304) == "-1.18088731474e-02");
    cli::CsvTable t;
    t.header = {"a", "b"};
    t.rows = {{"1", "2"}};
    REQUIRE(t.render() == "a,b\n1,2\n");
}

TEST_CASE("loop experiment writes deterministic artifacts") {
    auto cfg = cli::parse_config_json(R"({"experiment":"loop","r":0.3,"xi":5e-2})");
    cli::validate_config(cfg);

    const auto dir1 = fresh_dir("loop1");
    const auto dir2 = fresh_dir("loop2");
    std::ostringstream sink;

    cfg.out_dir = dir1.string();
    REQUIRE(cli::run_experiment(cfg, sink) == 0);
    cfg.out_dir = dir2.string();
    REQUIRE(cli::run_experiment(cfg, sink) == 0);

    const std::string csv1 = slurp(dir1 / "results.csv");
    const std::string csv2 = slurp(dir2 / "results.csv");
    REQUIRE_FALSE(csv1.empty());
    REQUIRE(strip_last_column(csv1) == strip_last_column(csv2));

    const auto lines = split_lines(csv1);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[0] ==
            "r,xi,phase_sim,phase_closed,phase_delta,visibility_sim,visibility_closed,"
            "visibility_delta,steps,wall_ms");
    REQUIRE(csv1.find("\r") == std::string::npos);

    auto report = nlohmann::json::parse(slurp(dir1 / "report.json"));
    REQUIRE(report["inputs"]["experiment"] == "loop");
    REQUIRE(report["results"].size() == 1);
    REQUIRE(report["results"][0]["phase_delta"].get<double>() < 0.05);
    REQUIRE(report["results"][0]["visibility_delta"].get<double>() < 0.01);
}

TEST_CASE("sweep experiment sorts rows by xi and keeps going after failures") {
    auto cfg = cli::parse_config_json(
        R"({"experiment":"sweep","r":0.3,"xi":[8e-2,4e-2,6e-2]})");
    cli::validate_config(cfg);
    const auto dir = fresh_dir("sweep");
    cfg.out_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(cli::run_experiment(cfg, sink) == 0);
    auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    REQUIRE(report["results"].size() == 3);
    double prev = 0.0;
    for (const auto& row : report["results"]) {
        REQUIRE(row["xi"].get<double>() > prev);
        prev = row["xi"].get<double>();
    }

    // a deliberately unstable run errors per point but still emits all rows
    cfg.steps_per_period = 10;
    cfg.out_dir = fresh_dir("sweep_fail").string();
    const int rc = cli::run_experiment(cfg, sink);
    REQUIRE(rc == 3);
    auto rep2 = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "report.json"));
    REQUIRE(rep2["results"].size() == 3);
    for (const auto& row : rep2["results"]) REQUIRE(row.contains("error"));
}

TEST_CASE("berry experiment covers the default grid") {
    auto cfg = cli::parse_config_json(R"({"experiment":"berry"})");
    cli::validate_config(cfg);
    const auto dir = fresh_dir("berry");
    cfg.out_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(cli::run_experiment(cfg, sink) == 0);
    auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    REQUIRE(report["results"].size() == 3);
    for (const auto& row : report["results"])
        REQUIRE(row["delta"].get<double>() < 1e-6);
}

TEST_CASE("polarization experiment emits the Stokes readout") {
    auto cfg = cli::parse_config_json(R"({"experiment":"polarization","r":0.5,"r2":1.0})");
    cli::validate_config(cfg);
    const auto dir = fresh_dir("pol");
    cfg.out_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(cli::run_experiment(cfg, sink) == 0);
    auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    const double delta = report["results"][0]["delta_rad"].get<double>();
    REQUIRE(delta == Catch::Approx(1.2008802158569939).epsilon(1e-12));
    const auto stokes = report["results"][0]["stokes"];
    REQUIRE(stokes[0].get<double>() == 1.0);
    REQUIRE(stokes[1].get<double>() == Catch::Approx(std::cos(delta)).margin(1e-15));
    REQUIRE(stokes[2].get<double>() == Catch::Approx(std::sin(delta)).margin(1e-15));
    REQUIRE(stokes[3].get<double>() == 0.0);
}

TEST_CASE("worker pool honors STEERLAB_WORKERS") {
    ::setenv("STEERLAB_WORKERS", "1", 1);
    REQUIRE(cli::worker_count(8) == 1);
    ::setenv("STEERLAB_WORKERS", "3", 1);
    REQUIRE(cli::worker_count(8) <= 3);
    ::unsetenv("STEERLAB_WORKERS");
    REQUIRE(cli::worker_count(2) <= 2);
}

TEST_CASE("cli binary: loop run end to end") {
    const auto dir = fresh_dir("cli_loop");
    const int rc =
        run_cli("run --experiment loop --r 0.3 --xi 5e-2 --out \"" + dir.string() + "\"");
    REQUIRE(rc == 0);
    REQUIRE(fs::exists(dir / "results.csv"));
    REQUIRE(fs::exists(dir / "report.json"));
}

TEST_CASE("cli binary: bad input exits 2 and names the field") {
    const auto dir = fresh_dir("cli_err");
    const int rc = run_cli("run --experiment loop --xi 0 --out \"" + dir.string() + "\"",
                           dir / "stderr.txt");
    REQUIRE(rc != 0);
    const std::string err = slurp(dir / "stderr.txt");
    REQUIRE(err.find("xi") != std::string::npos);
}

TEST_CASE("cli binary: config file with unknown key is rejected") {
    const auto dir = fresh_dir("cli_cfg");
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"experiment":"loop","typo_key":1})";
    }
    const int rc = run_cli("run --config \"" + (dir / "cfg.json").string() + "\"",
                           dir / "stderr.txt");
    REQUIRE(rc != 0);
    REQUIRE(slurp(dir / "stderr.txt").find("typo_key") != std::string::npos);
}

TEST_CASE("cli binary: coarse-step verify is a loud negative control") {
    const auto dir = fresh_dir("cli_neg");
    const int rc = run_cli("verify --steps-per-period 10 --out \"" + dir.string() + "\"");
    REQUIRE(rc != 0);
    const std::string csv = slurp(dir / "results.csv");
    REQUIRE_FALSE(csv.empty());
    // failing criteria are named in the report
    auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    bool some_failed = false;
    for (const auto& c : report["criteria"])
        if (!c["pass"].get<bool>()) {
            some_failed = true;
            REQUIRE_FALSE(c["detail"].get<std::string>().empty());
        }
    REQUIRE(some_failed);
}

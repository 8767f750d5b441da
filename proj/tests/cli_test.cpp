#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "awgnbandit/experiment.hpp"

using namespace awgnbandit;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
    const fs::path dir =
        fs::temp_directory_path() / ("awgnbandit_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file = {},
            const fs::path& stderr_file = {}) {
    std::string cmd = std::string(AWGNBANDIT_CLI_PATH) + " " + args;
    if (!stdout_file.empty()) {
        cmd += " > " + stdout_file.string();
    }
    if (!stderr_file.empty()) {
        cmd += " 2> " + stderr_file.string();
    } else {
        cmd += " 2> /dev/null";
    }
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

std::string base_config(const std::string& out_dir) {
    return "instance = gap\n"
           "k = 2\n"
           "delta = 0.2\n"
           "b = 1\n"
           "snr = 1\n"
           "algorithm = ucb0\n"
           "horizon = 1000\n"
           "replications = 10\n"
           "seed = 5\n"
           "out_dir = " +
           out_dir + "\n";
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parse/serialize round-trip is the identity") {
    const std::string text =
        "# comment\n"
        "instance = gaussian\n"
        "k = 3\n"
        "means = 0.5,0.25,0\n"
        "b = 4\n"
        "power = 2\n"
        "noise_variance = 0.5\n"
        "algorithm = ue-ucb++\n"
        "horizon = 5000\n"
        "replications = 20\n"
        "seed = 9\n"
        "audit_tolerance = 0.2\n"
        "retain_full_transcript = true\n"
        "parallel = 2\n"
        "out_dir = somewhere\n"
        "sweep_snr = 0.25,1,4\n";
    const ExperimentConfig parsed = ExperimentConfig::parse(text);
    CHECK(parsed.means == std::vector<double>{0.5, 0.25, 0.0});
    CHECK(parsed.power == 2.0);
    const ExperimentConfig reparsed = ExperimentConfig::parse(parsed.serialize());
    CHECK(parsed == reparsed);

    // snr sugar round-trips too
    const ExperimentConfig sugar = ExperimentConfig::parse("snr = 4\n");
    CHECK(sugar.noise_variance == 0.25);
    CHECK(ExperimentConfig::parse(sugar.serialize()) == sugar);

    CHECK_THROWS_AS(ExperimentConfig::parse("unknown_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::parse("horizon\n"), std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::parse("horizon = abc\n"), std::invalid_argument);
}

TEST_CASE("config validation catches bad cells before running") {
    ExperimentConfig config = ExperimentConfig::parse(base_config("x"));
    CHECK_NOTHROW(config.validate());

    ExperimentConfig bad_delta = config;
    bad_delta.delta = 0.5;
    CHECK_THROWS_WITH_AS(bad_delta.validate(), doctest::Contains("(0, 1/4)"),
                         std::invalid_argument);

    ExperimentConfig bad_b = config;
    bad_b.b = 2.0; // gap fixes b = 1
    CHECK_THROWS_AS(bad_b.validate(), std::invalid_argument);

    ExperimentConfig short_horizon = config;
    short_horizon.algorithm = "ue-ucb";
    short_horizon.horizon = 4; // tau = 2, K = 2 -> needs T > 4
    CHECK_THROWS_AS(short_horizon.validate(), std::invalid_argument);
}

TEST_CASE("run writes a trace and summary that agree") {
    const fs::path dir = make_temp_dir("run");
    const fs::path out = dir / "out";
    write(dir / "config.cfg", base_config(out.string()));
    const int code = run_cli("run --config " + (dir / "config.cfg").string());
    CHECK(code == 0);

    const std::string csv = slurp(out / "trace.csv");
    std::stringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "algorithm,snr,b,k,t_horizon,replication,round,cumulative_regret");

    // horizon 1000 -> stride 1 -> 1000 retained rounds per replication
    std::int64_t rows = 0;
    double final_sum = 0.0;
    std::int64_t finals = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto last_comma = line.rfind(',');
        const auto prev_comma = line.rfind(',', last_comma - 1);
        const std::string round = line.substr(prev_comma + 1, last_comma - prev_comma - 1);
        if (round == "1000") {
            final_sum += std::stod(line.substr(last_comma + 1));
            ++finals;
        }
    }
    CHECK(rows == 10 * 1000);
    CHECK(finals == 10);

    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["mean_final_regret"].get<double>() ==
          doctest::Approx(final_sum / 10.0).epsilon(1e-9));
    CHECK(summary["power_audit"]["pass"].get<bool>());
    CHECK(summary["bound_values"]["ucb0"].get<double>() > 0.0);
    CHECK(summary["config"]["seed"].get<std::uint64_t>() == 5);
    fs::remove_all(dir);
}

TEST_CASE("unreadable config exits 1") {
    const fs::path dir = make_temp_dir("noconfig");
    const fs::path err = dir / "stderr.txt";
    CHECK(run_cli("run --config " + (dir / "missing.cfg").string(), {}, err) == 1);
    CHECK(slurp(err).find("cannot read") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("invalid delta exits 1 naming the constraint") {
    const fs::path dir = make_temp_dir("baddelta");
    std::string cfg = base_config((dir / "out").string());
    cfg += "delta = 0.5\n"; // later key wins
    write(dir / "config.cfg", cfg);
    const fs::path err = dir / "stderr.txt";
    const int code = run_cli("run --config " + (dir / "config.cfg").string(), {}, err);
    CHECK(code == 1);
    CHECK(slurp(err).find("(0, 1/4)") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("identical config and seed give byte-identical output") {
    const fs::path dir = make_temp_dir("determinism");
    write(dir / "a.cfg", base_config((dir / "out_a").string()));
    write(dir / "b.cfg", base_config((dir / "out_b").string()));
    CHECK(run_cli("run --config " + (dir / "a.cfg").string()) == 0);
    CHECK(run_cli("run --config " + (dir / "b.cfg").string()) == 0);
    CHECK(slurp(dir / "out_a" / "trace.csv") == slurp(dir / "out_b" / "trace.csv"));

    // and a rerun into the same directory reproduces the summary bytes
    const std::string first = slurp(dir / "out_a" / "summary.json");
    CHECK(run_cli("run --config " + (dir / "a.cfg").string()) == 0);
    CHECK(slurp(dir / "out_a" / "summary.json") == first);
    fs::remove_all(dir);
}

TEST_CASE("flag overrides take precedence over config keys") {
    const fs::path dir = make_temp_dir("override");
    write(dir / "config.cfg", base_config((dir / "out").string()));
    const int code = run_cli("run --config " + (dir / "config.cfg").string() +
                             " --reps 3 --seed 77 --out " + (dir / "other").string());
    CHECK(code == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "other" / "summary.json"));
    CHECK(summary["config"]["replications"].get<int>() == 3);
    CHECK(summary["config"]["seed"].get<std::uint64_t>() == 77);
    fs::remove_all(dir);
}

TEST_CASE("sweep over snr produces one group per axis value") {
    const fs::path dir = make_temp_dir("sweep");
    std::string cfg = base_config((dir / "out").string());
    cfg += "sweep_snr = 0.25,1,4\n";
    cfg += "replications = 3\n";
    cfg += "horizon = 500\n";
    write(dir / "config.cfg", cfg);
    CHECK(run_cli("sweep --config " + (dir / "config.cfg").string()) == 0);

    const std::string csv = slurp(dir / "out" / "trace.csv");
    for (const std::string snr : {"0.25", "1", "4"}) {
        CHECK(csv.find("ucb0," + snr + ",") != std::string::npos);
    }
    const auto cells = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    REQUIRE(cells.is_array());
    CHECK(cells.size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("sweep without an axis exits 1") {
    const fs::path dir = make_temp_dir("sweepempty");
    write(dir / "config.cfg", base_config((dir / "out").string()));
    CHECK(run_cli("sweep --config " + (dir / "config.cfg").string()) == 1);
    fs::remove_all(dir);
}

TEST_CASE("sweep over B reports growing exploration phases for ue-ucb++") {
    const fs::path dir = make_temp_dir("sweepb");
    std::string cfg = "instance = gaussian\n"
                      "k = 2\n"
                      "means = 0.2,0\n"
                      "b = 2\n"
                      "snr = 1\n"
                      "algorithm = ue-ucb++\n"
                      "horizon = 500\n"
                      "replications = 2\n"
                      "seed = 3\n"
                      "sweep_b = 2,4,8\n"
                      "out_dir = " +
                      (dir / "out").string() + "\n";
    write(dir / "config.cfg", cfg);
    CHECK(run_cli("sweep --config " + (dir / "config.cfg").string()) == 0);
    const auto cells = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    REQUIRE(cells.size() == 3);
    // L*K*tau with K=2, tau=2: L = 2,4,6 for B = 2,4,8
    CHECK(cells[0]["effective"]["exploration_rounds"].get<int>() == 8);
    CHECK(cells[1]["effective"]["exploration_rounds"].get<int>() == 16);
    CHECK(cells[2]["effective"]["exploration_rounds"].get<int>() == 24);
    fs::remove_all(dir);
}

TEST_CASE("bounds subcommand prints the expected values") {
    const fs::path dir = make_temp_dir("bounds");
    const fs::path out = dir / "stdout.txt";
    CHECK(run_cli("bounds --k 4 --t 10000 --b 1 --snr 1 --c1 1", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("204") != std::string::npos);          // lower bound with c1 = 1
    CHECK(text.find("warning") != std::string::npos);      // B < 2 degenerates ue-ucb++
    CHECK(text.find("capacity = 0.5") != std::string::npos);
    CHECK(run_cli("bounds --k 2 --t 1 --b 1 --snr 1") == 1); // T < 2
    fs::remove_all(dir);
}

TEST_CASE("verify subcommand exit codes") {
    const fs::path dir = make_temp_dir("verify");
    const fs::path out = dir / "stdout.txt";
    CHECK(run_cli("verify recursion", out) == 0);
    CHECK(slurp(out).find("[ OK ]") != std::string::npos);

    CHECK(run_cli("verify infotheory --inject-fault chi2", out) == 3);
    const std::string text = slurp(out);
    CHECK(text.find("[FAIL]") != std::string::npos);
    CHECK(text.find("fact1") != std::string::npos);

    CHECK(run_cli("verify nosuchsuite") == 1);
    CHECK(run_cli("verify infotheory --inject-fault bogus") == 1);
    fs::remove_all(dir);
}

TEST_CASE("full verify run is clean") {
    const fs::path dir = make_temp_dir("verifyall");
    const fs::path out = dir / "stdout.txt";
    CHECK(run_cli("verify all", out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("[FAIL]") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("retain-full-transcript emits every round") {
    const fs::path dir = make_temp_dir("retain");
    std::string cfg = base_config((dir / "out").string());
    cfg += "horizon = 2500\nreplications = 2\n";
    write(dir / "config.cfg", cfg);
    CHECK(run_cli("run --config " + (dir / "config.cfg").string() +
                  " --retain-full-transcript") == 0);
    const std::string csv = slurp(dir / "out" / "trace.csv");
    std::int64_t rows = -1; // header
    for (char c : csv) {
        rows += c == '\n' ? 1 : 0;
    }
    CHECK(rows == 2 * 2500);
    fs::remove_all(dir);
}

} // TEST_SUITE

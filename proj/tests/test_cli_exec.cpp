// Subcommand-level checks against the built binary: argument surfaces and
// the documented exit codes (0 ok, 2 config, 3 data, 4 runtime).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowcast/csv.hpp"

using namespace flowcast;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    const std::string out_file = temp_path("fc_cli_out.txt");
    const std::string cmd = std::string(FLOWCAST_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(out_file);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    return WEXITSTATUS(status);
}

std::string write_sine(const std::string& name, int n, double period) {
    Dataset d;
    std::vector<double> v(n);
    for (int t = 0; t < n; ++t)
        v[static_cast<std::size_t>(t)] = 4.0 + 2.0 * std::sin(2.0 * M_PI * t / period);
    d.features.emplace_back("bw", std::move(v));
    const std::string path = temp_path(name);
    save_csv(d, path);
    return path;
}

const std::string kFastOverrides =
    " -s hyper=manual -s nlayers=1 -s units1=4 -s nepochs=2 -s bs=16 -s nlags=4 -s seed=3";

}  // namespace

TEST_CASE("automal subcommand prints a tagged recommendation") {
    const std::string csv = write_sine("fc_cli_sine24.csv", 600, 24.0);
    std::string out;
    const int code = run_cli("automal -i " + csv, &out);
    CHECK(code == 0);
    CHECK(out.find("recommendation") != std::string::npos);
    CHECK(out.find("lags 24") != std::string::npos);
}

TEST_CASE("run subcommand end to end with flags and env output dir") {
    const std::string csv = write_sine("fc_cli_run.csv", 120, 10.0);
    const std::string out_dir = temp_path("fc_cli_run_out");
    std::filesystem::remove_all(out_dir);
    std::string out;
    const int code = run_cli("run -i " + csv + kFastOverrides + " -o " + out_dir, &out);
    CHECK(code == 0);
    CHECK(std::filesystem::exists(out_dir + "/metrics.txt"));
    CHECK(out.find("test") != std::string::npos);

    // FLOWCAST_OUTPUT_DIR supplies the default output directory.
    const std::string env_dir = temp_path("fc_cli_env_out");
    std::filesystem::remove_all(env_dir);
    setenv("FLOWCAST_OUTPUT_DIR", env_dir.c_str(), 1);
    const int env_code = run_cli("run -i " + csv + kFastOverrides);
    unsetenv("FLOWCAST_OUTPUT_DIR");
    CHECK(env_code == 0);
    CHECK(std::filesystem::exists(env_dir + "/metrics.txt"));
}

TEST_CASE("run subcommand reads a config file with flag overrides on top") {
    const std::string csv = write_sine("fc_cli_cfg.csv", 120, 10.0);
    const std::string out_dir = temp_path("fc_cli_cfg_out");
    std::filesystem::remove_all(out_dir);
    const std::string cfg_path = temp_path("fc_cli_cfg.txt");
    {
        std::ofstream cfg(cfg_path);
        cfg << "input = " << csv << "\n"
            << "hyper = manual\nnlayers = 1\nunits1 = 4\nnepochs = 2\nbs = 16\nnlags = 6\n";
    }
    std::string out;
    const int code = run_cli("run " + cfg_path + " -s nlags=4 -o " + out_dir, &out);
    CHECK(code == 0);
    std::ifstream metrics(out_dir + "/metrics.txt");
    std::stringstream ss;
    ss << metrics.rdbuf();
    CHECK(ss.str().find("resolved_nlags = 4") != std::string::npos);  // override wins
}

TEST_CASE("predict subcommand reuses a stored model") {
    const std::string csv = write_sine("fc_cli_pred.csv", 120, 10.0);
    const std::string out_dir = temp_path("fc_cli_pred_out");
    std::filesystem::remove_all(out_dir);
    REQUIRE(run_cli("run -i " + csv + kFastOverrides + " -o " + out_dir) == 0);

    const std::string pred_file = temp_path("fc_cli_pred.csv.out");
    std::string out;
    const int code =
        run_cli("predict " + out_dir + "/model.fcm -i " + csv + " -o " + pred_file, &out);
    CHECK(code == 0);
    std::ifstream pf(pred_file);
    std::string header;
    std::getline(pf, header);
    CHECK(header == "time,member,step,truth,prediction");
    int rows = 0;
    std::string line;
    while (std::getline(pf, line)) ++rows;
    CHECK(rows == 120 - 4);  // windowable rows at nlags=4, msteps=1

    // Wrong member count -> data error.
    CHECK(run_cli("predict " + out_dir + "/model.fcm -i " + csv + " -i " + csv) == 3);
}

TEST_CASE("exit codes: config=2, data=3") {
    const std::string csv = write_sine("fc_cli_codes.csv", 60, 10.0);
    CHECK(run_cli("run -i " + csv + " -s split=1.5") == 2);
    CHECK(run_cli("run -i " + csv + " -s no_such_key=1") == 2);
    CHECK(run_cli("run -i /nonexistent/missing.csv" + kFastOverrides) == 3);
    CHECK(run_cli("automal -i /nonexistent/missing.csv") == 3);
    CHECK(run_cli("predict /nonexistent/model.fcm -i " + csv) == 3);
    CHECK(run_cli("") == 2);               // missing subcommand
    CHECK(run_cli("run --bogus-flag") == 2);
}

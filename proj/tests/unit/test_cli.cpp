#include "cli.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = relcpd::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "relcpd_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path simulated(const std::string& name, const std::vector<std::string>& design) {
    const auto path = scratch() / name;
    std::vector<std::string> args{"simulate", "--out", path.string()};
    args.insert(args.end(), design.begin(), design.end());
    REQUIRE(call(args).code == 0);
    return path;
}

} // namespace

TEST_CASE("usage errors") {
    CHECK(call({}).code == relcpd::cli::kUsage);
    CHECK(call({"frobnicate"}).code == relcpd::cli::kUsage);
    const auto data = simulated("usage.csv", {"--n", "60", "--p", "4"});
    const auto r = call({"test", data.string()});
    CHECK(r.code == relcpd::cli::kUsage);
    CHECK(r.err.find("--delta") != std::string::npos);
}

TEST_CASE("missing input file names the path") {
    const auto r = call({"test", "/nonexistent/data.csv", "--delta", "1"});
    CHECK(r.code == relcpd::cli::kDataError);
    CHECK(r.err.find("/nonexistent/data.csv") != std::string::npos);
}

TEST_CASE("unknown config key names the key") {
    const auto cfg = scratch() / "bad.cfg";
    std::ofstream(cfg) << "delta=1\nbandwidth=3\n";
    const auto data = simulated("cfg.csv", {"--n", "60", "--p", "4"});
    const auto r = call({"--config", cfg.string(), "test", data.string()});
    CHECK(r.code == relcpd::cli::kUsage);
    CHECK(r.err.find("bandwidth") != std::string::npos);

    const auto good = scratch() / "good.cfg";
    std::ofstream(good) << "delta=1e9\n";
    const auto ok = call({"--config", good.string(), "test", data.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("reject=false") != std::string::npos);
}

TEST_CASE("simulated data round-trips through the test") {
    const auto data = simulated("strong.csv", {"--n", "200", "--p", "50", "--signal", "2", "--seed", "5"});
    const auto small = call({"test", data.string(), "--delta", "0.1", "--quantile-reps", "5000"});
    CHECK(small.code == 0);
    CHECK(small.out.find("reject=true") != std::string::npos);
    CHECK(small.out.find("k_hat=") != std::string::npos);
    const auto huge = call({"test", data.string(), "--delta", "1e9", "--quantile-reps", "5000"});
    CHECK(huge.out.find("reject=false") != std::string::npos);

    const auto csv = call({"--format", "csv", "test", data.string(), "--delta", "0.1", "--quantile-reps", "5000"});
    CHECK(csv.code == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 2);
}

TEST_CASE("strict mode flags degenerate splits") {
    const auto data = simulated("short.csv", {"--n", "30", "--p", "3", "--signal", "1"});
    const auto lax = call({"test", data.string(), "--delta", "0.1", "--m", "20", "--quantile-reps", "2000"});
    CHECK(lax.code == 0);
    CHECK(lax.err.find("degenerate") != std::string::npos);
    const auto strict =
        call({"--strict", "test", data.string(), "--delta", "0.1", "--m", "20", "--quantile-reps", "2000"});
    CHECK(strict.code == relcpd::cli::kDegenerate);
}

TEST_CASE("subcommands produce output") {
    const auto data = simulated("sub.csv", {"--n", "100", "--p", "20", "--signal", "1", "--model", "MA2"});
    CHECK(call({"estimate-cp", data.string()}).out.find("k_hat=") != std::string::npos);
    CHECK(call({"select-m", data.string()}).out.find("m_hat=") != std::string::npos);
    CHECK(call({"estimate-set", data.string()}).code == 0);
    const auto q = call({"quantiles", "G", "10", "--reps", "2000"});
    CHECK(q.code == 0);
    CHECK(q.out.find("0.95") != std::string::npos);
    CHECK(call({"quantiles", "G", "10", "--reps", "10"}).code == relcpd::cli::kUsage);
    CHECK(call({"--version"}).code == 0);
}

TEST_CASE("output is identical across thread counts") {
    const auto data = simulated("threads.csv", {"--n", "120", "--p", "30", "--signal", "1"});
    std::string first;
    for (const char* t : {"1", "4", "8"}) {
        const auto r = call({"--threads", t, "test", data.string(), "--delta", "0.5", "--quantile-reps", "4000"});
        const auto q = call({"--threads", t, "quantiles", "H", "--reps", "2000", "--grid-size", "200"});
        const auto all = r.out + q.out;
        if (first.empty()) {
            first = all;
        }
        CHECK(all == first);
    }
}

TEST_CASE("installed binary exit codes") {
    const std::string bin = RELCPD_TOOL_PATH;
    CHECK(std::system((bin + " --version > /dev/null").c_str()) == 0);
    const int code = std::system((bin + " test /nonexistent.csv --delta 1 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(code) == 2);
}

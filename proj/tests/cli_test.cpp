#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef DEVSTONE_CLI_PATH
#error "DEVSTONE_CLI_PATH must point at the devstone executable"
#endif

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr, interleaved
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(DEVSTONE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    std::array<char, 4096> buffer;
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace

TEST_CASE("counts prints the analytical counts on one line") {
    CommandResult r = run_cli("counts --type LI --depth 3 --width 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "7 9 3 0 7\n");

    r = run_cli("counts --type HMOD --depth 2 --width 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "6 6 2 7 10\n");

    r = run_cli("counts --type HO --depth 1 --width 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "1 1 1 0 1\n");
}

TEST_CASE("run --stats reports MATCH when counters meet the formulas") {
    const CommandResult r = run_cli("run --type HI --depth 2 --width 3 --stats");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("lambda 4 (expected events 4)") != std::string::npos);
    CHECK(r.output.find("transitions int 3 ext 3 con 1") != std::string::npos);
    CHECK(r.output.find("messages routed 7 discarded 3") != std::string::npos);
    CHECK(r.output.find("MATCH") != std::string::npos);
    CHECK(r.output.find("MISMATCH") == std::string::npos);
}

TEST_CASE("verify sweeps a small grid cleanly") {
    const CommandResult r = run_cli(
        "verify --max-depth 3 --max-width 3 --hmod-max-depth 3 --hmod-max-width 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0 mismatches") != std::string::npos);
    CHECK(r.output.find('X') == std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("counts --type XL --depth 1 --width 1").exit_code == 2);
    CHECK(run_cli("counts --type LI --depth 0 --width 1").exit_code == 2);
    CHECK(run_cli("run --type LI").exit_code == 2);           // missing required options
    CHECK(run_cli("frobnicate").exit_code == 2);              // unknown subcommand
    CHECK(run_cli("").exit_code == 2);                        // subcommand required
    CHECK(run_cli("metric --reps 1 --format xml").exit_code == 2);
}

TEST_CASE("--help exits with code 0") {
    const CommandResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("metric") != std::string::npos);
    CHECK(r.output.find("verify") != std::string::npos);
}

TEST_CASE("microstep budget env var aborts runaway-sized runs") {
    const std::string env = "DEVSTONE_MICROSTEP_BUDGET=3 ";
    const std::string command =
        env + std::string(DEVSTONE_CLI_PATH) + " run --type HI --depth 5 --width 5 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buffer;
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), n);
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 1);
    CHECK(output.find("error:") != std::string::npos);
}

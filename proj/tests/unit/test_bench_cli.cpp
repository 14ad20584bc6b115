#include "doctest.h"

#include "sprd/bench.hpp"
#include "sprd/errors.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace sprd;
using namespace sprd::bench;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "sprd_bench");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    CliResult result;
    result.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::string temp_path(const std::string& name) { return std::string(SPRD_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

int shell(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) {
        lines += c == '\n' ? 1 : 0;
    }
    return lines;
}

}  // namespace

TEST_CASE("eps exponent lists") {
    CHECK(parse_eps_exponents("12") == std::vector<int>{12});
    CHECK(parse_eps_exponents("4..32:4") == std::vector<int>{4, 8, 12, 16, 20, 24, 28, 32});
    CHECK(parse_eps_exponents("3..5") == std::vector<int>{3, 4, 5});
    CHECK_THROWS_AS((void)parse_eps_exponents("0"), ConfigError);
    CHECK_THROWS_AS((void)parse_eps_exponents("8..4"), ConfigError);
    CHECK_THROWS_AS((void)parse_eps_exponents("4..8:0"), ConfigError);
    CHECK_THROWS_AS((void)parse_eps_exponents("x"), ConfigError);
}

TEST_CASE("l-mode strings") {
    CHECK(std::holds_alternative<LStar>(parse_l_mode("lstar")));
    CHECK(std::holds_alternative<LLogN>(parse_l_mode("lnN")));
    CHECK(std::get<LExplicit>(parse_l_mode("value:3.5")).value == 3.5);
    CHECK_THROWS_AS((void)parse_l_mode("value:abc"), ConfigError);
    CHECK_THROWS_AS((void)parse_l_mode("bakhvalov"), ConfigError);
    CHECK(l_mode_label(LStar{}) == "L = L*");
}

TEST_CASE("command line defaults") {
    const std::vector<const char*> argv = {"sprd_bench", "table", "--id", "3"};
    const RunConfig config = parse_command_line(static_cast<int>(argv.size()), argv.data());
    CHECK(config.command == Command::table);
    CHECK(config.table_id == 3);
    CHECK(config.eps_exponents.size() == 8);
    CHECK(config.n0 == 64);
    CHECK(config.dt0 == 0.5);
    CHECK(config.levels == 5);
    CHECK(config.gamma == kDefaultGamma);
    CHECK(config.format == OutputFormat::text);
    CHECK_FALSE(config.sigma0_override.has_value());
    CHECK(config.ladder().back().n == 1024);
}

TEST_CASE("configuration errors exit with 1") {
    CHECK(run({"table", "--id", "9"}).code == kExitConfig);
    CHECK(run({"solve", "--n", "30"}).code == kExitConfig);
    CHECK(run({"solve", "--dt", "0.3"}).code == kExitConfig);
    CHECK(run({"rates", "--levels", "0"}).code == kExitConfig);
    CHECK(run({"solve", "--example", "7"}).code == kExitConfig);
    CHECK(run({"solve", "--format", "xml"}).code == kExitConfig);
    CHECK(run({"bogus"}).code == kExitConfig);
    CHECK(run({}).code == kExitConfig);
    const auto bad = run({"solve", "--sigma0", "-1"});
    CHECK(bad.code == kExitConfig);
    CHECK(bad.err.find("configuration error") != std::string::npos);
}

TEST_CASE("help exits with 0") {
    const auto help = run({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("solve") != std::string::npos);
}

TEST_CASE("a degenerate mesh constant is a numerical failure") {
    const auto result = run({"solve", "--sigma0", "1e-300", "--eps-exp", "8"});
    CHECK(result.code == kExitNumerical);
    CHECK(result.err.find("numerical failure") != std::string::npos);
    CHECK(result.out.empty());
}

TEST_CASE("failed tables emit nothing") {
    const std::string path = temp_path("never_written.csv");
    std::remove(path.c_str());
    const auto result = run({"rates", "--example", "1", "--eps-exp", "8", "--levels", "2",
                             "--sigma0", "1e-300", "--format", "csv", "--out", path});
    CHECK(result.code == kExitNumerical);
    CHECK(result.out.empty());
    CHECK_FALSE(std::ifstream(path).good());
}

TEST_CASE("solve writes three levels of 65 nodes and two components") {
    const auto result = run({"solve", "--example", "1", "--eps-exp", "8", "--n", "64", "--dt", "0.5"});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out.rfind("t,x,component,value\n", 0) == 0);
    CHECK(line_count(result.out) == 1 + 3 * 65 * 2);
    CHECK(result.err.find("(N/L)^2") != std::string::npos);
    CHECK(result.err.find("441.") != std::string::npos);
    CHECK(result.err.find("164.") != std::string::npos);
}

TEST_CASE("the zero-source system gives an all-zero trajectory") {
    const auto result = run({"solve", "--example", "0", "--eps-exp", "12", "--n", "32", "--dt", "0.25"});
    REQUIRE(result.code == kExitOk);
    std::istringstream in(result.out);
    const Trajectory traj = read_trajectory_csv(in);
    CHECK(traj.levels.size() == 5);
    for (const auto& level : traj.levels) {
        CHECK(level.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("trajectory CSV round-trips byte for byte") {
    const auto result = run({"solve", "--example", "2", "--eps-exp", "16", "--n", "32", "--dt", "0.25"});
    REQUIRE(result.code == kExitOk);
    std::istringstream in(result.out);
    const Trajectory traj = read_trajectory_csv(in);
    CHECK(traj.m == 3);
    CHECK(traj.nodes.size() == 33);
    std::ostringstream again;
    write_trajectory_csv(again, traj);
    CHECK(again.str() == result.out);
}

TEST_CASE("value CSV round-trips byte for byte") {
    const auto result = run({"table", "--id", "1", "--eps-exp", "8..16:8", "--levels", "2",
                             "--format", "csv"});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out.rfind("eps_exp,N,dt,value\n", 0) == 0);
    std::istringstream in(result.out);
    const auto rows = read_value_csv(in);
    CHECK(rows.size() == 6);
    CHECK(rows.back().eps_exp == "robust");
    std::ostringstream again;
    write_value_csv(again, rows);
    CHECK(again.str() == result.out);
    std::istringstream broken("eps_exp,N,dt,value\n4,64\n");
    CHECK_THROWS_AS((void)read_value_csv(broken), ConfigError);
}

TEST_CASE("table 1 text layout and its k=32, N=64 cell") {
    const auto result = run({"table", "--id", "1", "--eps-exp", "32", "--levels", "2"});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out.find("N=64") != std::string::npos);
    CHECK(result.out.find("N=128") != std::string::npos);
    CHECK(result.out.find("k=32") != std::string::npos);
    CHECK(result.out.find("E-04") != std::string::npos);

    const auto csv = run({"table", "--id", "1", "--eps-exp", "32", "--levels", "1", "--format", "csv"});
    std::istringstream in(csv.out);
    const auto rows = read_value_csv(in);
    REQUIRE_FALSE(rows.empty());
    CHECK(rows.front().value >= 3.86e-4 / 2.0);
    CHECK(rows.front().value <= 3.86e-4 * 2.0);
}

TEST_CASE("table 6 cell k=20, N=64 is 0.6") {
    const auto csv = run({"table", "--id", "6", "--eps-exp", "20", "--levels", "1", "--format", "csv"});
    REQUIRE(csv.code == kExitOk);
    std::istringstream in(csv.out);
    const auto rows = read_value_csv(in);
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows.front().value - 0.6) <= 0.005);
    const auto text = run({"rho", "--example", "3", "--eps-exp", "20", "--levels", "1"});
    CHECK(text.out.find("0.60000") != std::string::npos);
}

TEST_CASE("number formatting") {
    CHECK(format_error(8.82e-4) == "8.82E-04");
    CHECK(format_rate(4.3217) == "4.32");
    CHECK(format_spectral(0.599994) == "0.59999");
}

TEST_CASE("mesh dump header and rows") {
    const auto result = run({"dump-mesh", "--eps-exp", "12", "--n", "16"});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out.rfind("# N=16 sigma=", 0) == 0);
    CHECK(result.out.find(" L=") != std::string::npos);
    CHECK(result.out.find(" p=") != std::string::npos);
    CHECK(line_count(result.out) == 1 + 17);
    CHECK(result.out.find("\n0\t0\t\n") != std::string::npos);
}

TEST_CASE("solve writes mesh and operator dumps on request") {
    const std::string mesh_path = temp_path("mesh.txt");
    const std::string op_path = temp_path("operator.txt");
    const std::string traj_path = temp_path("trajectory.csv");
    const auto result = run({"solve", "--eps-exp", "8", "--n", "16", "--dt", "0.5", "--dump-mesh",
                             mesh_path, "--dump-operator", op_path, "--dump-solution", traj_path});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out.empty());
    CHECK(slurp(mesh_path).rfind("# N=16", 0) == 0);
    const std::string op = slurp(op_path);
    CHECK(op.rfind("0\t0\t1\n", 0) == 0);
    CHECK(op.find("\n33\t33\t1\n") != std::string::npos);
    CHECK(line_count(slurp(traj_path)) == 1 + 3 * 17 * 2);
}

TEST_CASE("executable exit codes") {
    const std::string exe = SPRD_BENCH_EXE;
    const std::string quiet = " >/dev/null 2>&1";
    CHECK(shell(exe + " dump-mesh --n 16" + quiet) == 0);
    CHECK(shell(exe + " table --id 9" + quiet) == 1);
    CHECK(shell(exe + " solve --n 30" + quiet) == 1);
    CHECK(shell(exe + " solve --dt 0.3" + quiet) == 1);
    CHECK(shell(exe + " solve --sigma0 1e-300" + quiet) == 2);
}

TEST_CASE("output does not depend on the worker count") {
    const std::string exe = SPRD_BENCH_EXE;
    const std::string args = " rates --example 1 --eps-exp 4..32:4 --levels 2 --format csv --out ";
    const std::string one = temp_path("threads1.csv");
    const std::string three = temp_path("threads3.csv");
    REQUIRE(shell("SPRD_THREADS=1 " + exe + args + one) == 0);
    REQUIRE(shell("SPRD_THREADS=3 " + exe + args + three) == 0);
    CHECK(slurp(one) == slurp(three));
    CHECK_FALSE(slurp(one).empty());
}

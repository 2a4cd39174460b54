// End-to-end checks of the command-line tool: spawns the built binary and
// inspects exit codes and output, pinning the CLI contract.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_test_stdout.txt";
    const std::string cmd =
        std::string(HEXFLOW_CLI) + " " + args + " > " + out_path + " 2> cli_test_stderr.txt";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = (status >= 256) ? status / 256 : status;  // WEXITSTATUS
    result.out = slurp(out_path);
    return result;
}

std::string data(const std::string& name) { return std::string(HEXFLOW_DATA) + "/" + name; }

std::vector<double> parse_column(const std::string& text, const std::string& key) {
    std::vector<double> values;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head != key) continue;
        int index;
        double value;
        fields >> index >> value;
        values.push_back(value);
    }
    return values;
}

double parse_scalar(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head != key) continue;
        double value;
        fields >> value;
        return value;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

TEST_CASE("validate: bundled documents pass, defects exit 2") {
    CHECK(run_cli("validate " + data("pair_of_pants.json")).exit_code == 0);
    CHECK(run_cli("validate " + data("tetrahedral.json")).exit_code == 0);
    CHECK(run_cli("validate " + data("pants_long_edge.json")).exit_code == 0);

    // Count mismatch: drop one face.
    {
        std::ofstream out("cli_broken.json");
        out << R"({"boundaries": 3,
                   "edges": [{"id": 1, "ends": [2,3], "l0": 1.0},
                             {"id": 2, "ends": [3,1], "l0": 1.0},
                             {"id": 3, "ends": [1,2], "l0": 1.0}],
                   "faces": [{"id": 1, "corners": [1,2,3], "opposite_edges": [1,2,3]}]})";
    }
    CHECK(run_cli("validate cli_broken.json").exit_code == 2);

    // Parse error.
    {
        std::ofstream out("cli_broken.json");
        out << R"({"boundaries": 3, "b": [1,2,3], "faces": []})";
    }
    CHECK(run_cli("validate cli_broken.json").exit_code == 2);
    std::remove("cli_broken.json");
}

TEST_CASE("lengths: symmetric values, decay at large w, inadmissible exit 3") {
    const RunResult base = run_cli("lengths " + data("pair_of_pants.json"));
    CHECK(base.exit_code == 0);
    std::istringstream in(base.out);
    int index;
    double value;
    int rows = 0;
    while (in >> index >> value) {
        ++rows;
        CHECK(index == rows);
        CHECK(value == doctest::Approx(2.6339157938496336).epsilon(1e-12));
    }
    CHECK(rows == 3);

    const RunResult large = run_cli("lengths " + data("pair_of_pants.json") + " --w 10,10,10");
    CHECK(large.exit_code == 0);
    std::istringstream lin(large.out);
    while (lin >> index >> value) CHECK(value < 1e-3);

    CHECK(run_cli("lengths " + data("pair_of_pants.json") + " --w -5,0,0").exit_code == 3);
    CHECK(run_cli("lengths " + data("pair_of_pants.json") + " --w 1,1").exit_code == 1);
}

TEST_CASE("solve: newton and flow agree; bad targets exit 1") {
    {
        std::ofstream out("cli_targets.json");
        out << R"({"b": [1.0, 1.0, 1.0]})";
    }
    const RunResult newton = run_cli("solve " + data("pair_of_pants.json") +
                                     " cli_targets.json --method newton");
    CHECK(newton.exit_code == 0);
    CHECK(parse_scalar(newton.out, "residual") <= 1e-10);
    const std::vector<double> w_newton = parse_column(newton.out, "w");
    REQUIRE(w_newton.size() == 3);

    const RunResult flow = run_cli("solve " + data("pair_of_pants.json") +
                                   " cli_targets.json --method flow --trace cli_trace.csv");
    CHECK(flow.exit_code == 0);
    const std::vector<double> w_flow = parse_column(flow.out, "w");
    REQUIRE(w_flow.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(w_flow[i] - w_newton[i]) <= 1e-8);
    CHECK(parse_scalar(flow.out, "lambda0") > 0.0);

    const std::string trace = slurp("cli_trace.csv");
    CHECK(trace.rfind("t,w_1,w_2,w_3,B_1,B_2,B_3,C,dLambda\n", 0) == 0);

    // Determinism: identical invocation, byte-identical output.
    const RunResult flow2 = run_cli("solve " + data("pair_of_pants.json") +
                                    " cli_targets.json --method flow --trace cli_trace2.csv");
    CHECK(flow2.out == flow.out);
    CHECK(slurp("cli_trace2.csv") == trace);

    {
        std::ofstream out("cli_targets.json");
        out << R"({"b": [1.0, 0.0, 1.0]})";
    }
    CHECK(run_cli("solve " + data("pair_of_pants.json") + " cli_targets.json").exit_code == 1);
    std::remove("cli_targets.json");
    std::remove("cli_trace.csv");
    std::remove("cli_trace2.csv");
}

TEST_CASE("check: healthy surfaces pass at w = 0 and at seeded samples") {
    CHECK(run_cli("check " + data("pair_of_pants.json")).exit_code == 0);
    const RunResult sampled =
        run_cli("check " + data("tetrahedral.json") + " --samples 5 --seed 7");
    CHECK(sampled.exit_code == 0);
    CHECK(parse_scalar(sampled.out, "fd_max_rel") <= 1e-5);
}

TEST_CASE("probe: expected trends exit 0, missing trends exit 6") {
    CHECK(run_cli("probe " + data("pair_of_pants.json") + " --mode plus-inf --boundary 1")
              .exit_code == 0);
    CHECK(run_cli("probe " + data("pants_long_edge.json") +
                  " --mode finite-wall --boundary 1 --edge 3")
              .exit_code == 0);
    CHECK(run_cli("probe " + data("pair_of_pants.json") + " --mode mixed --boundary 1")
              .exit_code == 0);
    // The unit pants cannot push an arc past 1e3 at any representable margin.
    CHECK(run_cli("probe " + data("pair_of_pants.json") + " --mode finite-wall --boundary 1")
              .exit_code == 6);
}

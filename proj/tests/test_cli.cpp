/*
 * Copyright 2026 The flosim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

#include "flosim/io.hpp"

using json = nlohmann::json;

namespace {

struct CommandResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(FLOSIM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe)) {
        output.append(buffer, got);
    }
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/flosim_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kTwoModeCircuit = R"(flosim/1 circuit
modes 2
seed 7
initial vacuum
hamiltonian 0.7
eps 0.5 -0.25
t 1 2 0.8 0.3
s 1 2 0.2 -0.6
end
measure 1 sample
measure 2 sample
)";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("run: certain outcome gives a single histogram bin") {
    const std::string path = write_temp("certain.circuit", R"(flosim/1 circuit
modes 1
initial vacuum
measure 1 sample
)");
    const CommandResult res = run_cli("run " + path + " --shots 1000 --seed 7 --json");
    CHECK(res.exit_code == 0);
    const json report = json::parse(res.output);
    CHECK(report.at("schema") == "flosim/1");
    CHECK(report.at("prng") == "splitmix64/1");
    CHECK(report.at("histogram").at("0") == 1000);
    CHECK(report.at("shots_log").size() == 1000);
    CHECK(report.at("shots_log")[0]["events"][0]["probability"] == 1.0);
}

TEST_CASE("run: reports are byte-identical across runs") {
    const std::string path = write_temp("deterministic.circuit", kTwoModeCircuit);
    const CommandResult a = run_cli("run " + path + " --shots 64 --json");
    const CommandResult b = run_cli("run " + path + " --shots 64 --json");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    // A different seed changes the sampled content.
    const CommandResult c = run_cli("run " + path + " --shots 64 --seed 99 --json");
    CHECK(c.exit_code == 0);
    CHECK(c.output != a.output);
}

TEST_CASE("run: emitted states are valid and labeled with williamson values") {
    const std::string path = write_temp("valid.circuit", kTwoModeCircuit);
    const CommandResult res = run_cli("run " + path + " --shots 8 --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    for (const auto& shot : report.at("shots_log")) {
        const auto& rows = shot.at("final_correlation_matrix");
        Eigen::MatrixXd m(4, 4);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                m(r, c) = rows[r][c].get<double>();
            }
        }
        CHECK(flosim::is_valid_state(m));
        CHECK(shot.at("final_williamson").size() == 2);
    }
}

TEST_CASE("run: sampled frequency tracks the exact probability") {
    const std::string path = write_temp("mixed.circuit", R"(flosim/1 circuit
modes 1
initial matrix
0 0
0 0
measure 1 sample
)");
    const CommandResult res = run_cli("run " + path + " --shots 100000 --seed 11 --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    const double freq = report.at("histogram").at("0").get<double>() / 100000.0;
    const double sigma = std::sqrt(0.25 / 100000.0);
    CHECK(std::abs(freq - 0.5) <= 4.0 * sigma);
}

TEST_CASE("run: impossible forced outcome exits with code 2") {
    const std::string path = write_temp("impossible.circuit", R"(flosim/1 circuit
modes 1
initial vacuum
measure 1 1
)");
    const CommandResult res = run_cli("run " + path);
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("op 1") != std::string::npos);
}

TEST_CASE("malformed input is rejected with a line-anchored message") {
    const std::string path = write_temp("broken.circuit", R"(flosim/1 circuit
modes 2
initial matrix
0 1 0 0
-1 0 0
0 0 0 1
0 0 -1 0
)");
    const CommandResult res = run_cli("run " + path);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("line 5") != std::string::npos);

    const std::string bad_schema = write_temp("badschema.circuit", "flosim/2 circuit\n");
    CHECK(run_cli("run " + bad_schema).exit_code == 1);
}

TEST_CASE("probs: vacuum measurements are deterministic") {
    const std::string path = write_temp("probs.circuit", R"(flosim/1 circuit
modes 2
initial vacuum
measure 1 sample
measure 2 sample
)");
    const CommandResult res = run_cli("probs " + path + " --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    CHECK(report.at("table").size() == 1);
    CHECK(report.at("table").at("00") == 1.0);
    CHECK(report.at("total") == 1.0);
}

TEST_CASE("probs: beamsplitter distribution sums to one and passes the oracle check") {
    const std::string path = write_temp("beamsplitter.circuit", R"(flosim/1 circuit
modes 2
initial vacuum
hamiltonian 0.6
eps 0 0
t 1 2 1 0
s 1 2 0 0.9
end
measure 1 sample
measure 2 sample
)");
    const CommandResult res = run_cli("probs " + path + " --json --oracle-check");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    double total = 0.0;
    for (const auto& [key, value] : report.at("table").items()) {
        total += value.get<double>();
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
    CHECK(report.at("oracle_check").at("max_abs_difference").get<double>() <= 1e-9);
}

TEST_CASE("certify: rotation map") {
    // A rotation by 0.3 in the first Majorana plane: B = R^T.
    const std::string path = write_temp("rotation.map", R"(flosim/1 map
modes 1
C 1 0
A
0 0 0 0
0 0 0 0
B
0.955336489125606 0 -0.29552020666134 0
0.29552020666134 0 0.955336489125606 0
D
0 0 0 0
0 0 0 0
)");
    const CommandResult res = run_cli("certify " + path + " --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    CHECK(report.at("trace_preserving") == true);
    CHECK(report.at("bistochastic") == true);
    CHECK(report.at("completely_positive") == true);
    for (const auto& d : report.at("product_decomposition").at("diagonal")) {
        CHECK(d.get<double>() == doctest::Approx(1.0));
    }
    for (const auto& lam : report.at("dual_williamson")) {
        CHECK(lam.get<double>() == doctest::Approx(1.0));
    }
}

TEST_CASE("certify: measurement map is CP but not TP") {
    const std::string path = write_temp("measurement.map", R"(flosim/1 map
modes 1
C 0.5 0
A
0 0 1 0
-1 0 0 0
B
0 0 0 0
0 0 0 0
D
0 0 -1 0
1 0 0 0
)");
    const CommandResult res = run_cli("certify " + path + " --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    CHECK(report.at("trace_preserving") == false);
    CHECK(report.at("completely_positive") == true);
    CHECK_FALSE(report.contains("product_decomposition"));
}

TEST_CASE("certify: amplification fails CP with the measured margin") {
    const std::string path = write_temp("amplification.map", R"(flosim/1 map
modes 1
C 1 0
A
0 0 0 0
0 0 0 0
B
2 0 0 0
0 0 2 0
D
0 0 0 0
0 0 0 0
)");
    const CommandResult res = run_cli("certify " + path + " --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    CHECK(report.at("completely_positive") == false);
    CHECK(report.at("margins").at("block_sigma_max").at("value").get<double>() ==
          doctest::Approx(2.0));
}

TEST_CASE("pfaffian command") {
    const std::string base = write_temp("base.matrix", R"(flosim/1 matrix
dim 2
0 1
-1 0
)");
    const CommandResult res = run_cli("pfaffian " + base + " --json");
    REQUIRE(res.exit_code == 0);
    const json report = json::parse(res.output);
    CHECK(report.at("pfaffian") == 1.0);
    CHECK(report.at("determinant") == 1.0);

    // (S01..S23) = (1,2,3,4,5,6): Pf = 1·6 - 2·5 + 3·4 = 8.
    const std::string four = write_temp("four.matrix", R"(flosim/1 matrix
dim 4
0 1 2 3
-1 0 4 5
-2 -4 0 6
-3 -5 -6 0
)");
    const CommandResult res4 = run_cli("pfaffian " + four + " --json");
    REQUIRE(res4.exit_code == 0);
    CHECK(json::parse(res4.output).at("pfaffian") == 8.0);

    const std::string symmetric = write_temp("symmetric.matrix", R"(flosim/1 matrix
dim 2
0 1
1 0
)");
    CHECK(run_cli("pfaffian " + symmetric).exit_code == 1);

    const std::string odd = write_temp("odd.matrix", R"(flosim/1 matrix
dim 3
0 1 0
-1 0 0
0 0 0
)");
    CHECK(run_cli("pfaffian " + odd).exit_code == 1);
}

TEST_SUITE_END();

// Copyright 2026 The orthosup authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks of the command line front end: exit codes, JSON and CSV
// payloads, deterministic sampling, and environment handling. Every test
// shells out to the real binary.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "helpers.hpp"

using nlohmann::json;
using testutil::run_command;

namespace {

const std::string kBin = std::string("\"") + ORTHOSUP_CLI_BIN + "\"";

json parse(const std::string& text) { return json::parse(text); }

int count_lines(const std::string& path) {
    std::ifstream file(path);
    REQUIRE(file.good());
    int lines = 0;
    std::string line;
    while (std::getline(file, line)) {
        ++lines;
    }
    return lines;
}

} // namespace

TEST_CASE("superpose reports the balanced worked example", "[cli]") {
    const auto res =
        run_command(kBin + " superpose --machine k1 --alpha 0.7071 --beta 0.7071 --state plus");
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    CHECK(doc["config"]["command"] == "superpose");
    CHECK(doc["config"]["machine"] == "k1");
    CHECK(doc["results"]["zero_probability"] == false);
    CHECK(std::abs(doc["results"]["success_probability"].get<double>() - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(doc["results"]["c_norm"].get<double>() - std::sqrt(2.0 / 3.0)) < 1e-12);
    const auto state = doc["results"]["state"];
    CHECK(std::abs(state[0][0].get<double>() - 1.0) < 1e-12);
    CHECK(std::abs(state[0][1].get<double>()) < 1e-12);
    CHECK(std::abs(state[1][0].get<double>()) < 1e-12);
    CHECK(doc["version"].is_string());
    CHECK(doc["timing_ms"].is_number_integer());
}

TEST_CASE("superpose exits 2 on zero probability but still prints a record", "[cli]") {
    const auto res = run_command(kBin + " superpose --machine k1 --state ket0");
    REQUIRE(res.exit_code == 2);
    const json doc = parse(res.output);
    CHECK(doc["results"]["zero_probability"] == true);
    CHECK(doc["results"]["state"].is_null());
    CHECK(doc["results"]["eta"].is_null());
    CHECK(doc["results"]["success_probability"].get<double>() < 1e-20);
}

TEST_CASE("bad arguments exit 1 without a record", "[cli]") {
    const auto over = run_command(kBin + " superpose --alpha 2.0 2>/dev/null");
    CHECK(over.exit_code == 1);
    CHECK(over.output.empty());

    const auto negative = run_command(kBin + " superpose --alpha -0.5 2>/dev/null");
    CHECK(negative.exit_code == 1);

    const auto unknown = run_command(kBin + " superpose --machine k3 2>/dev/null");
    CHECK(unknown.exit_code == 1);

    const auto clash = run_command(
        kBin + " superpose --balanced --alpha 0.6 --beta 0.8 --state plus 2>/dev/null");
    CHECK(clash.exit_code == 1);
}

TEST_CASE("circuit enumerate splits evenly on the equator state", "[cli]") {
    const auto res = run_command(
        kBin + " circuit --mode enumerate --theta 1.5707963267948966 --phi 0"
               " --convention appendix");
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    const auto rows = doc["results"]["rows"];
    REQUIRE(rows.size() == 4);
    const int mus[4] = {1, 1, -1, -1};
    const int ns[4] = {0, 1, 0, 1};
    for (int i = 0; i < 4; ++i) {
        CHECK(rows[i]["mu"].get<int>() == mus[i]);
        CHECK(rows[i]["n"].get<int>() == ns[i]);
        CHECK(std::abs(rows[i]["probability"].get<double>() - 0.25) < 1e-12);
        CHECK(rows[i]["state"].is_array());
        CHECK(rows[i]["eta"].is_number());
    }
    CHECK(doc["results"]["probability_sum_ok"] == true);
    CHECK(std::abs(doc["results"]["probability_sum"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("circuit sample is seed-deterministic and refuses to run unseeded", "[cli]") {
    const std::string cmd = kBin + " circuit --mode sample --seed 42 --theta 0.9 --phi 0.3";
    const auto first = run_command(cmd);
    const auto second = run_command(cmd);
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);

    const json doc = parse(first.output);
    CHECK(doc["config"]["seed"].get<std::uint64_t>() == 42);
    CHECK(doc["results"]["outcome"]["probability"].get<double>() > 0.0);

    const auto unseeded = run_command(kBin + " circuit --mode sample 2>/dev/null");
    CHECK(unseeded.exit_code == 1);
}

TEST_CASE("average quadrature agrees with the closed form", "[cli]") {
    const auto res = run_command(kBin + " average --machine k1 --alpha 0.6 --beta 0.8"
                                        " --method quadrature --n-theta 32 --n-phi 32");
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    const double closed = 1.0 / (2.0 * (1.0 + 0.48));
    CHECK(std::abs(doc["results"]["closed_form"].get<double>() - closed) < 1e-12);
    CHECK(doc["results"]["agreement_ok"] == true);
    CHECK(doc["results"]["std_error"].get<double>() == 0.0);

    const auto general = run_command(kBin + " average --machine general --n-theta 16 --n-phi 16");
    const json gdoc = parse(general.output);
    CHECK(std::abs(gdoc["results"]["closed_form"].get<double>() - 1.0 / 6.0) < 1e-15);
    CHECK(gdoc["results"]["agreement_ok"] == true);
    CHECK(gdoc["config"]["axis"].is_array());
}

TEST_CASE("average monte-carlo stays within its own error bars", "[cli]") {
    const auto res = run_command(kBin + " average --machine k2 --method monte-carlo"
                                        " --n-samples 200000 --seed 11");
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    const double se = doc["results"]["std_error"].get<double>();
    CHECK(se > 0.0);
    CHECK(doc["results"]["abs_error"].get<double>() <= 5.0 * se);
    CHECK(doc["results"]["agreement_ok"] == true);
    CHECK(doc["config"]["seed"].get<std::uint64_t>() == 11);
}

TEST_CASE("compare reports the factor-of-two ratio", "[cli]") {
    const auto res = run_command(kBin + " compare --machine k1");
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    CHECK(std::abs(doc["results"]["ratio_closed_form"].get<double>() - 2.0) < 1e-15);
    CHECK(std::abs(doc["results"]["ratio_numeric"].get<double>() - 2.0) < 1e-8);
    CHECK(doc["results"]["pure"]["machine"] == "k1");
    CHECK(doc["results"]["general"]["machine"] == "general");
}

TEST_CASE("solve-kraus reconstructs both branches proportionally", "[cli]") {
    for (const std::string branch : {"eta-eq-phi", "eta-eq-minus-phi"}) {
        const auto res = run_command(kBin + " solve-kraus --branch " + branch +
                                     " --alpha 0.6 --beta 0.8");
        REQUIRE(res.exit_code == 0);
        const json doc = parse(res.output);
        CHECK(doc["results"]["branch"] == branch);
        CHECK(doc["results"]["residual_ok"] == true);
        CHECK(doc["results"]["proportional"] == true);
        CHECK(doc["results"]["residual"].get<double>() <= 1e-10);
        const double c_max = doc["results"]["c_max"].get<double>();
        CHECK(std::abs(c_max * c_max * (1.0 + 0.48) - 1.0) < 1e-10);
        const std::string ref = branch == "eta-eq-phi" ? "k1" : "k2";
        CHECK(doc["results"]["reference"] == ref);
    }
}

TEST_CASE("clone-delete reports the geometric overlap decay", "[cli]") {
    const auto res = run_command(kBin + " clone-delete --overlap 0.9 --n 50");
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    const double decay = doc["results"]["overlap_decay"].get<double>();
    CHECK(std::abs(decay / std::pow(0.9, 50) - 1.0) < 1e-12);
    const double fid = doc["results"]["fidelity"].get<double>();
    CHECK(fid > 0.0);
    CHECK(fid < 1.0);

    const auto bad = run_command(kBin + " clone-delete --overlap 1.5 2>/dev/null");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("sweep writes a header plus one row per grid point", "[cli]") {
    const std::string out = "/tmp/orthosup_cli_sweep.csv";
    const auto res = run_command(kBin + " sweep --var theta --n 64 --out " + out);
    REQUIRE(res.exit_code == 0);
    const json doc = parse(res.output);
    CHECK(doc["results"]["rows_written"].get<int>() == 64);
    CHECK(doc["results"]["out_path"] == out);
    CHECK(count_lines(out) == 65);

    std::ifstream file(out);
    std::string header;
    std::getline(file, header);
    CHECK(header ==
          "index,theta,phi,alpha_modulus,beta_modulus,p_k1,p_k2,p_pure_total,"
          "p_plus_0,p_plus_1,p_minus_0,p_minus_1,p_circuit_total");
    std::remove(out.c_str());

    const auto bad =
        run_command(kBin + " sweep --var theta --n 4 --out /nonexistent/x.csv 2>/dev/null");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("csv format emits one header and one data row", "[cli]") {
    const auto res = run_command(kBin + " superpose --state plus --format csv");
    REQUIRE(res.exit_code == 0);
    std::istringstream stream(res.output);
    std::string header;
    std::string row;
    REQUIRE(std::getline(stream, header));
    REQUIRE(std::getline(stream, row));
    CHECK(header.rfind("machine,c_norm,success_probability", 0) == 0);
    CHECK(row.rfind("k1,", 0) == 0);
    std::string extra;
    CHECK_FALSE(std::getline(stream, extra));
}

TEST_CASE("text format flattens the record into key paths", "[cli]") {
    const auto res = run_command(kBin + " superpose --state plus --format text");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("config.command = \"superpose\"") != std::string::npos);
    CHECK(res.output.find("results.success_probability = ") != std::string::npos);
}

TEST_CASE("json output round-trips through the parser byte for byte", "[cli]") {
    for (const std::string cmd :
         {std::string(" superpose --machine k2 --alpha 0.6 --beta 0.8 --state minus"),
          std::string(" circuit --mode enumerate --theta 1.1 --phi 2.2")}) {
        const auto res = run_command(kBin + cmd);
        REQUIRE(res.exit_code == 0);
        const auto doc = nlohmann::ordered_json::parse(res.output);
        CHECK(doc.dump(2) + "\n" == res.output);
    }
}

TEST_CASE("tolerance comes from the environment unless the flag overrides it", "[cli]") {
    const auto env = run_command("ORTHOSUP_TOLERANCE=1e-6 " + kBin + " superpose --state plus");
    REQUIRE(env.exit_code == 0);
    CHECK(parse(env.output)["config"]["tolerance"].get<double>() == 1e-6);

    const auto flag = run_command("ORTHOSUP_TOLERANCE=1e-6 " + kBin +
                                  " superpose --state plus --tolerance 1e-3");
    REQUIRE(flag.exit_code == 0);
    CHECK(parse(flag.output)["config"]["tolerance"].get<double>() == 1e-3);

    const auto junk =
        run_command("ORTHOSUP_TOLERANCE=banana " + kBin + " superpose --state plus 2>/dev/null");
    CHECK(junk.exit_code == 1);
}

TEST_CASE("identical invocations produce byte-identical output", "[cli]") {
    for (const std::string cmd :
         {std::string(" superpose --machine k1 --alpha 0.28 --arg-alpha 0.4 --state ket1"),
          std::string(" circuit --mode sample --seed 31415 --theta 2.2 --phi 5.5"),
          std::string(" average --machine general --n-theta 24 --n-phi 24"),
          std::string(" solve-kraus --branch eta-eq-minus-phi --alpha 0.35")}) {
        const auto first = run_command(kBin + cmd);
        const auto second = run_command(kBin + cmd);
        REQUIRE(first.exit_code == 0);
        CHECK(first.output == second.output);
        CHECK_FALSE(first.output.empty());
    }
}

TEST_CASE("state flags are mutually exclusive and amps are validated", "[cli]") {
    const auto both = run_command(kBin + " superpose --state plus --theta 1.0 2>/dev/null");
    CHECK(both.exit_code == 1);

    const auto amps = run_command(kBin + " superpose --amps 0.6 0 0.8 0");
    REQUIRE(amps.exit_code == 0);
    const json doc = parse(amps.output);
    CHECK(std::abs(doc["config"]["psi"][0][0].get<double>() - 0.6) < 1e-12);

    const auto zero = run_command(kBin + " superpose --amps 0 0 0 0 2>/dev/null");
    CHECK(zero.exit_code == 1);
}

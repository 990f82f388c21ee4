// Copyright 2026 The selact Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "cli.hpp"

using namespace selact;
namespace fs = std::filesystem;

namespace {
struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string dataFile(const std::string &name) {
    const char *dir = std::getenv("SELACT_TEST_DATA");
    return (fs::path(dir != nullptr ? dir : "tests/data") / name).string();
}

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / "selact_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}
} // namespace

TEST_CASE("ground-energy", "[cli]") {
    const auto r = invoke({"ground-energy", "--hamiltonian", "builtin:tfim:2:1.0"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(std::stod(r.out) + 2.2360680) <= 1e-7);
    CHECK(r.out == "-2.23606798\n");

    CHECK(invoke({"ground-energy", "--hamiltonian", dataFile("z1.json")}).out ==
          "-1\n");
    CHECK(invoke({"ground-energy", "--hamiltonian", "builtin:nope:2"}).code == 2);
}

TEST_CASE("usage errors", "[cli]") {
    const auto missing = invoke({"run", "--out", "/tmp/x"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("--config") != std::string::npos);
    CHECK(invoke({"run", "--config", "/nonexistent.json", "--out", "/tmp/x"})
              .code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"ground-energy", "--hamiltonian", "builtin:tfim:2:1",
                  "--bogus"})
              .code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("validate", "[cli]") {
    CHECK(invoke({"validate", "--hamiltonian", dataFile("z1.json")}).code == 0);
    const auto ok = invoke({"validate", "--hamiltonian", dataFile("h2_like_ref.json")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("e_gs_reference -3") != std::string::npos);
    const auto bad = invoke({"validate", "--hamiltonian", dataFile("bad_ref.json")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("e_gs_reference") != std::string::npos);

    const auto dir = scratch("validate");
    std::ofstream(dir / "wrong.json")
        << R"({"num_qubits":2,"terms":[{"coeff":1.0,"paulis":"Z"}]})";
    CHECK(invoke({"validate", "--hamiltonian", (dir / "wrong.json").string()})
              .code == 2);
}

TEST_CASE("make-hamiltonian round trip", "[cli]") {
    const auto dir = scratch("make");
    const auto file = (dir / "tfim4.json").string();
    REQUIRE(invoke({"make-hamiltonian", "builtin:tfim:4:1.0", "--out", file})
                .code == 0);
    const auto from_file = invoke({"ground-energy", "--hamiltonian", file});
    const auto builtin =
        invoke({"ground-energy", "--hamiltonian", "builtin:tfim:4:1.0"});
    REQUIRE(from_file.code == 0);
    CHECK(std::abs(std::stod(from_file.out) - std::stod(builtin.out)) <= 1e-10);
    CHECK(groundEnergy(readHamiltonianFile(file)) ==
          groundEnergy(builtinTfim(4, 1.0)));

    const auto again = (dir / "again.json").string();
    REQUIRE(invoke({"make-hamiltonian", "builtin:tfim:4:1.0", "--out", again})
                .code == 0);
    CHECK(slurp(file) == slurp(again));
    CHECK(invoke({"validate", "--hamiltonian", file}).code == 0);
}

TEST_CASE("run", "[cli]") {
    const auto a = scratch("run_a");
    const auto b = scratch("run_b");
    const auto ra = invoke({"run", "--config", dataFile("run_small.json"), "--out",
                            a.string()});
    REQUIRE(ra.code == 0);
    REQUIRE(invoke({"run", "--config", dataFile("run_small.json"), "--out",
                    b.string()})
                .code == 0);
    const auto csv = slurp(a / "results.csv");
    CHECK(csv.rfind("strategy,k_percent,warmup,hamiltonian,seed,iteration,"
                    "energy,gap_log10,active_count\n",
                    0) == 0);
    CHECK(csv.find("mag,25,5,builtin:tfim:4:1.0,3,0,") != std::string::npos);
    CHECK(csv == slurp(b / "results.csv"));
    CHECK(slurp(a / "runs.jsonl") == slurp(b / "runs.jsonl"));
    CHECK(ra.out.find("final_gap_log10") != std::string::npos);
}

TEST_CASE("seed override from the environment", "[cli]") {
    const auto dir = scratch("run_env");
    ::setenv(cli::kSeedEnv, "77", 1);
    const auto r = invoke({"run", "--config", dataFile("run_small.json"), "--out",
                           dir.string()});
    ::unsetenv(cli::kSeedEnv);
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "results.csv").find(",77,0,") != std::string::npos);
    CHECK(slurp(dir / "runs.jsonl").find("\"seed\":77") != std::string::npos);
}

TEST_CASE("sweep", "[cli]") {
    const auto a = scratch("sweep_a");
    const auto b = scratch("sweep_b");
    const auto r = invoke({"sweep", "--config", dataFile("sweep_small.json"),
                           "--out", a.string(), "--jobs", "2"});
    REQUIRE(r.code == 0);
    REQUIRE(invoke({"sweep", "--config", dataFile("sweep_small.json"), "--out",
                    b.string(), "--jobs", "1"})
                .code == 0);
    CHECK(r.out.find("runs 12") != std::string::npos);
    for (const char *f : {"results.csv", "runs.jsonl", "aggregate.csv"}) {
        INFO(f);
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(slurp(a / "aggregate.csv").find("gate-ra,20,0,4,30,") !=
          std::string::npos);
}

TEST_CASE("grad-variance", "[cli]") {
    const auto dir = scratch("variance");
    const auto file = dir / "report.json";
    const auto r = invoke({"grad-variance", "--config", dataFile("run_small.json"),
                           "--samples", "20", "--out", file.string()});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(file));
    CHECK(doc["sample_count"] == 20);
    CHECK(doc["per_index_variance"].size() == 24);
    CHECK(doc["delta_grid"].size() == 3);
    CHECK(doc["empirical_exceedance"][0].size() == 3);
    CHECK(doc.contains("parameter_distribution"));

    CHECK(invoke({"grad-variance", "--config", dataFile("run_small.json"),
                  "--samples", "1"})
              .code == 2);
    CHECK(invoke({"grad-variance", "--config", dataFile("run_small.json"),
                  "--samples", "5", "--deltas", "0.1,abc"})
              .code == 2);
}

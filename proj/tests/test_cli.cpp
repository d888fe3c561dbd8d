// Copyright 2026 The qmarg Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command line tool: every stdout line must be a
// parseable schema document, exit codes must follow the documented mapping,
// and repeated invocations must be byte-identical.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qmarg/facegeom.hpp"
#include "qmarg/io.hpp"
#include "qmarg/marginals.hpp"

namespace {

using namespace qmarg;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(QMARG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char chunk[4096];
  std::size_t got = 0;
  while ((got = fread(chunk, 1, sizeof(chunk), pipe)) > 0)
    result.out.append(chunk, got);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) rows.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return rows;
}

std::string fixture(const char* name) {
  return std::string(QMARG_FIXTURES_DIR) + "/" + name;
}

std::string temp_file(const char* name, const std::string& contents) {
  const std::string path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("repeated invocations are byte-identical") {
  const std::string args =
      "extreme --input " + fixture("ghz3_marginals_m2.json") + " --seed 7";
  RunResult first = run(args);
  RunResult second = run(args);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  CHECK(!first.out.empty());

  RunResult demo_a = run("demo ghz --n 3");
  RunResult demo_b = run("demo ghz --n 3");
  CHECK(demo_a.code == 0);
  CHECK(demo_a.out == demo_b.out);
}

TEST_CASE("ghz demo emits parseable documents and a nontrivial kernel") {
  RunResult result = run("demo ghz --n 3");
  REQUIRE(result.code == 0);
  std::vector<std::string> rows = lines(result.out);
  REQUIRE(rows.size() == 4);
  MarginalVector plus = parse_marginal_vector(rows[0]);
  MarginalVector minus = parse_marginal_vector(rows[1]);
  CHECK(plus.sector == minus.sector);
  KernelBasis kernel = parse_kernel(rows[2]);
  CHECK(kernel.dimension() >= 1);
  CHECK(document_kind(rows[3]) == "verdict");
  nlohmann::json verdict = nlohmann::json::parse(rows[3]);
  CHECK(verdict["payload"]["marginal_deviation"].get<double>() <= 1e-12);
  CHECK(verdict["payload"]["kernel_dimension"].get<int>() >= 1);
}

TEST_CASE("extreme verdict for an occupied-pair reduced state") {
  RunResult result = run("extreme --input " + fixture("slater_1rdm_d4.json") +
                         " --sector anti:4:2 --m 1");
  REQUIRE(result.code == 0);
  ExtremalityVerdict verdict = parse_extremality(result.out);
  CHECK(verdict.verdict == Extremality::Extreme);
  CHECK(verdict.preimage_dimension == 1);
}

TEST_CASE("preimage face of the ghz marginal pair is two-dimensional") {
  RunResult result =
      run("preimage --input " + fixture("ghz3_marginals_m2.json"));
  REQUIRE(result.code == 0);
  std::vector<std::string> rows = lines(result.out);
  REQUIRE(rows.size() == 2);
  PreimageFace face = parse_face(rows[0]);
  CHECK(face.dimension() == 2);
  CHECK(face.common_rdm);
  nlohmann::json verdict = nlohmann::json::parse(rows[1]);
  CHECK(verdict["payload"]["preimage_dimension"].get<int>() == 2);
  CHECK(verdict["payload"]["verdict"].get<std::string>() == "multiple");
}

TEST_CASE("trace reduces the ghz state to the maximally mixed qubit") {
  RunResult result =
      run("trace --input " + fixture("ghz3_state.json") + " --subset 1");
  REQUIRE(result.code == 0);
  DensityMatrix rho = parse_density(result.out);
  REQUIRE(rho.dimension() == 2);
  CHECK(std::abs(rho.entries()(0, 0).real() - 0.5) <= 1e-12);
  CHECK(std::abs(rho.entries()(0, 1)) <= 1e-12);
}

TEST_CASE("pauli exit code tracks the occupation bound") {
  const std::string input = fixture("slater_1rdm_d4.json");
  RunResult pass = run("pauli --input " + input + " --n 2");
  CHECK(pass.code == 0);
  CHECK(nlohmann::json::parse(pass.out)["payload"]["verdict"] == "satisfied");
  RunResult fail = run("pauli --input " + input + " --n 5");
  CHECK(fail.code == 2);
  CHECK(nlohmann::json::parse(fail.out)["payload"]["verdict"] == "violated");
}

TEST_CASE("reconstruction of the ghz marginal pair reports degeneracy") {
  RunResult r12 =
      run("trace --input " + fixture("ghz3_state.json") + " --subset 1,2");
  RunResult r23 =
      run("trace --input " + fixture("ghz3_state.json") + " --subset 2,3");
  REQUIRE(r12.code == 0);
  REQUIRE(r23.code == 0);
  const std::string p12 = temp_file("qmarg_cli_r12.json", r12.out);
  const std::string p23 = temp_file("qmarg_cli_r23.json", r23.out);
  RunResult result = run("reconstruct --sector full:2:3 --input " + p12 +
                         " --input-2 " + p23 + " --subset 1,2 --subset-2 2,3");
  CHECK(result.code == 2);
  ReconstructionResult parsed = parse_reconstruction(result.out);
  CHECK(parsed.status == ReconstructionStatus::Degenerate);
}

TEST_CASE("shift analysis round-trips the committed blocked instance") {
  RunResult from_fixture = run("erdahl-shift --fixture glitch");
  REQUIRE(from_fixture.code == 0);
  std::vector<std::string> rows = lines(from_fixture.out);
  REQUIRE(rows.size() == 2);
  BlockDecomposition d = parse_decomposition(rows[0]);
  CHECK(d.dims == std::array<int, 3>{1, 1, 1});
  nlohmann::json verdict = nlohmann::json::parse(rows[1]);
  CHECK(verdict["payload"]["verdict"] == "blocked");
  CHECK(verdict["payload"]["t_min"].is_null());
  for (const auto& point : verdict["payload"]["grid"])
    CHECK(point[1].get<double>() < -1e-6);

  RunResult from_file =
      run("erdahl-shift --input " + fixture("erdahl_glitch.json"));
  REQUIRE(from_file.code == 0);
  CHECK(lines(from_file.out)[0] == rows[0]);

  RunResult pipeline = run("erdahl-shift --fixture pipeline");
  REQUIRE(pipeline.code == 0);
  nlohmann::json shiftable = nlohmann::json::parse(lines(pipeline.out)[1]);
  CHECK(shiftable["payload"]["verdict"] == "shiftable");
  CHECK(shiftable["payload"]["t_min"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("failure exit codes distinguish malformed input from size guards") {
  CHECK(run("trace --input /nonexistent.json --subset 1").code == 3);
  const std::string junk = temp_file("qmarg_cli_junk.json", "{not json");
  CHECK(run("trace --input " + junk + " --subset 1").code == 3);
  CHECK(run("kernel --sector full:2:13 --m 2").code == 4);
  CHECK(run("kernel --sector bogus:2:3 --m 1").code == 3);
  CHECK(run("--help").code == 0);
  CHECK(run("demo qecc").code == 0);
  CHECK(run("demo phd").code == 0);
  CHECK(run("demo bloch").code == 0);
}

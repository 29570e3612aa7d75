// Copyright 2026 The mmot authors
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

// Drives the installed binary through std::system and checks exit codes and
// report files. MMOT_CLI_PATH is injected by the build.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mmot/io.hpp"
#include "mmot/solver_lp.hpp"

using namespace mmot;

namespace {

const char* kOutPath = "/tmp/mmot_cli_stdout.txt";
const char* kErrPath = "/tmp/mmot_cli_stderr.txt";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(MMOT_CLI_PATH) + " " + args + " >" +
                              kOutPath + " 2>" + kErrPath;
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kFlipProblem = R"({
  "marginals": [
    {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]},
    {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]}
  ],
  "cost": {"kind": "table", "values": [0.0, 1.0, 1.0, 0.0]}
})";

const char* kSwapProblem = R"({
  "marginals": [
    {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]},
    {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]}
  ],
  "cost": {"kind": "table", "values": [0.0, 1.0, 1.0, 0.0]},
  "actions": [[[1, 0], [1, 0]]],
  "sigma": true
})";

const char* kSkewedProblem = R"({
  "marginals": [
    {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]},
    {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]}
  ],
  "cost": {"kind": "table", "values": [0.0, 1.0, 1.0, 0.5]},
  "actions": [[[1, 0], [1, 0]]]
})";

const char* kInfeasibleProblem = R"({
  "marginals": [
    {"points": [[0.0], [1.0]], "weights": [0.9, 0.1]},
    {"points": [[0.0], [1.0]], "weights": [0.1, 0.9]}
  ],
  "cost": {"kind": "table", "values": [0.0, "inf", "inf", 0.0]}
})";

const char* kLopsidedProblem = R"({
  "marginals": [
    {"points": [[0.0], [1.0]], "weights": [0.3, 0.7]},
    {"points": [[0.0], [1.0]], "weights": [0.6, 0.4]}
  ],
  "cost": {"kind": "table", "values": [0.0, 1.0, 2.0, 0.5]}
})";

}  // namespace

TEST_CASE("solve reports the exact optimum and a reproducible certificate") {
  spit("/tmp/mmot_cli_flip.json", kFlipProblem);
  REQUIRE(run_cli("solve /tmp/mmot_cli_flip.json --out /tmp/mmot_cli_flip_report.json") == 0);

  const ReportFile report = read_report_file("/tmp/mmot_cli_flip_report.json");
  CHECK(report.solve.solver == "simplex");
  CHECK(report.solve.converged);
  CHECK(std::abs(report.solve.primal_value) <= 1e-12);
  CHECK(report.solve.gap <= 1e-8);
  REQUIRE(report.support.size() == 2);
  CHECK(report.support[0].first == std::vector<int>{0, 0});
  CHECK(report.support[1].first == std::vector<int>{1, 1});
  CHECK(report.support[0].second == doctest::Approx(0.5).epsilon(1e-12));

  // The stored support and potentials reproduce the recorded certificate.
  const ProblemFile problem = read_problem_file("/tmp/mmot_cli_flip.json");
  const Plan plan = plan_from_support(report.support, report.plan_sizes);
  const Certificate cert =
      verify_certificate(plan, report.potentials, problem.instance);
  CHECK(std::abs(cert.gap - report.solve.gap) <= 1e-12);
  CHECK(cert.max_feasibility_violation <= 1e-9);

  // Reading and re-serializing the report reproduces the file bytes.
  CHECK(report_to_text(report) == slurp("/tmp/mmot_cli_flip_report.json"));

  const std::string summary = slurp(kOutPath);
  CHECK(summary.find("value") != std::string::npos);
}

TEST_CASE("entropic solve converges through the cli") {
  spit("/tmp/mmot_cli_flip.json", kFlipProblem);
  REQUIRE(run_cli("solve /tmp/mmot_cli_flip.json --solver sinkhorn "
                  "--epsilon 0.25 --out /tmp/mmot_cli_sink_report.json") == 0);
  const ReportFile report = read_report_file("/tmp/mmot_cli_sink_report.json");
  CHECK(report.solve.solver == "sinkhorn");
  CHECK(report.solve.converged);
  CHECK(report.solve.iterations >= 1);
}

TEST_CASE("exit codes follow the error taxonomy") {
  // Unreadable and malformed inputs are plain errors.
  CHECK(run_cli("solve /tmp/mmot_cli_no_such_file.json") == 1);
  spit("/tmp/mmot_cli_broken.json", "{ not json");
  CHECK(run_cli("solve /tmp/mmot_cli_broken.json") == 1);

  // No finite-cost plan moves mass between the skewed marginals.
  spit("/tmp/mmot_cli_infeasible.json", kInfeasibleProblem);
  CHECK(run_cli("solve /tmp/mmot_cli_infeasible.json") == 2);
  CHECK(slurp(kErrPath).find("FiniteCostInfeasible") != std::string::npos);

  // One iteration cannot match both skewed marginals at once.
  spit("/tmp/mmot_cli_lopsided.json", kLopsidedProblem);
  CHECK(run_cli("solve /tmp/mmot_cli_lopsided.json --solver sinkhorn "
                "--epsilon 0.5 --max-iter 1") == 3);

  // The swap action does not leave the skewed cost invariant.
  spit("/tmp/mmot_cli_skewed.json", kSkewedProblem);
  CHECK(run_cli("symmetrize /tmp/mmot_cli_skewed.json") == 4);
  CHECK(slurp(kErrPath).find("CostNotInvariant") != std::string::npos);

  // Parse errors from the command line itself.
  CHECK(run_cli("demo fourier") == 1);
  CHECK(run_cli("") == 1);

  // Symmetrize needs a group in the problem file.
  CHECK(run_cli("symmetrize /tmp/mmot_cli_flip.json") == 1);
}

TEST_CASE("symmetrize averages the plan and tightens the duals") {
  spit("/tmp/mmot_cli_swap.json", kSwapProblem);
  REQUIRE(run_cli("symmetrize /tmp/mmot_cli_swap.json "
                  "--out /tmp/mmot_cli_swap_report.json") == 0);
  const ReportFile report = read_report_file("/tmp/mmot_cli_swap_report.json");
  CHECK(report.extras.at("plan_invariance_l1") <= 1e-9);
  CHECK(std::abs(report.extras.at("value_after") -
                 report.extras.at("value_before")) <= 1e-9);
  CHECK(std::abs(report.extras.at("dual_value_after") -
                 report.extras.at("dual_value_before")) <= 1e-8);
  CHECK(report.extras.at("fixed_point_residual") <= 1e-9);
  CHECK(report.has_trace);
  REQUIRE(report.potentials.arity() == 2);

  // The same instance through the commuting-family path.
  REQUIRE(run_cli("symmetrize /tmp/mmot_cli_swap.json --equal-marginals "
                  "--out /tmp/mmot_cli_swap_eq_report.json") == 0);
  const ReportFile eq = read_report_file("/tmp/mmot_cli_swap_eq_report.json");
  CHECK(!eq.has_trace);
  CHECK(eq.extras.count("mix_iterations") == 1);
  CHECK(eq.extras.at("fixed_point_residual") <= 1e-9);
  REQUIRE(eq.potentials.arity() == 2);
  CHECK(eq.potentials.vectors[0] == eq.potentials.vectors[1]);
}

TEST_CASE("gen produces deterministic solvable problems") {
  REQUIRE(run_cli("gen --seed 9 --n 2 --m 4 --forbidden 0.25 "
                  "--out /tmp/mmot_cli_gen1.json") == 0);
  REQUIRE(run_cli("gen --seed 9 --n 2 --m 4 --forbidden 0.25 "
                  "--out /tmp/mmot_cli_gen2.json") == 0);
  const std::string first = slurp("/tmp/mmot_cli_gen1.json");
  CHECK(first == slurp("/tmp/mmot_cli_gen2.json"));

  // Without --out the problem goes to stdout, byte for byte.
  REQUIRE(run_cli("gen --seed 9 --n 2 --m 4 --forbidden 0.25") == 0);
  CHECK(slurp(kOutPath) == first);

  CHECK(run_cli("solve /tmp/mmot_cli_gen1.json") == 0);

  // A different seed changes the problem.
  REQUIRE(run_cli("gen --seed 10 --n 2 --m 4 --forbidden 0.25 "
                  "--out /tmp/mmot_cli_gen3.json") == 0);
  CHECK(slurp("/tmp/mmot_cli_gen3.json") != first);
}

TEST_CASE("demo exit status mirrors the pass flag") {
  CHECK(run_cli("demo coulomb --m 4") == 0);
  CHECK(run_cli("demo determinant") == 0);
  CHECK(run_cli("demo determinant --radii 1,2 --m 8") == 0);

  // Hexagon support misses the continuum value, honestly reported.
  CHECK(run_cli("demo determinant --m 6 --out /tmp/mmot_cli_hex_report.json") == 1);
  const ReportFile hex = read_report_file("/tmp/mmot_cli_hex_report.json");
  REQUIRE(hex.theorems.size() == 1);
  CHECK(!hex.theorems[0].passed);
  CHECK(hex.theorems[0].metrics.at("certificate_gap") ==
        doctest::Approx(1.0 - std::sqrt(3.0) / 2).epsilon(1e-9));

  // A single atom cannot host two repelling electrons.
  CHECK(run_cli("demo coulomb --m 1") == 2);
  CHECK(slurp(kErrPath).find("FiniteCostInfeasible") != std::string::npos);
}

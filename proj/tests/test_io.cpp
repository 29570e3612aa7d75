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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include "mmot/io.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmot/solver_lp.hpp"
#include "oracles.hpp"

using namespace mmot;
using mmot_tests::error_code_of;

namespace {

template <typename Fn>
std::string error_message_of(Fn&& fn) {
  try {
    fn();
  } catch (const MkError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

const char* kTableProblem = R"({
  "marginals": [
    {"label": "left",
     "points": [[0.0], [1.0]],
     "weights": [0.5, 0.5]},
    {"points": [[0.0], [1.0], [2.0]],
     "weights": [0.5, 0.25, 0.25]}
  ],
  "cost": {
    "kind": "table",
    "sense": "min",
    "values": [0.5, "inf", 2.0, 1.5, 0.125, "inf"]
  },
  "actions": [[[1, 0], [0, 2, 1]]],
  "sigma": false,
  "solver": "sinkhorn",
  "entropic": {"epsilon": 0.7, "max_iter": 350, "tol": 1e-08}
})";

}  // namespace

TEST_CASE("problem text round trips through parse and serialize") {
  const ProblemFile first = parse_problem_text(kTableProblem);
  REQUIRE(first.instance.arity() == 2);
  CHECK(first.instance.marginals[0].label == "left");
  CHECK(first.instance.marginals[0].weights == std::vector<double>{0.5, 0.5});
  CHECK(first.instance.marginals[1].points[2] == std::vector<double>{2.0});
  REQUIRE(first.instance.cost.values.size() == 6);
  CHECK(first.instance.cost.values[1] == kInf);
  CHECK(first.instance.cost.values[5] == kInf);
  CHECK(first.instance.cost.values[4] == 0.125);
  REQUIRE(first.actions.size() == 1);
  CHECK(first.actions[0].maps[0].perm == std::vector<int>{1, 0});
  CHECK(first.actions[0].maps[1].perm == std::vector<int>{0, 2, 1});
  CHECK(!first.sigma);
  CHECK(first.solver == "sinkhorn");
  CHECK(first.has_entropic);
  CHECK(first.entropic.epsilon == 0.7);
  CHECK(first.entropic.max_iter == 350);
  CHECK(first.entropic.tol == 1e-08);

  const std::string text = problem_to_text(first);
  const ProblemFile second = parse_problem_text(text);
  CHECK(second.instance.marginals[0].label == "left");
  CHECK(second.instance.marginals[0].weights ==
        first.instance.marginals[0].weights);
  CHECK(second.instance.marginals[1].points ==
        first.instance.marginals[1].points);
  CHECK(second.instance.cost.values == first.instance.cost.values);
  CHECK(second.actions[0].maps[1].perm == first.actions[0].maps[1].perm);
  CHECK(second.solver == first.solver);
  CHECK(second.entropic.epsilon == first.entropic.epsilon);

  // Serialization is a fixed point: parse then serialize reproduces the text.
  CHECK(problem_to_text(second) == text);
}

TEST_CASE("built-in cost problems round trip kind and sense") {
  const char* source = R"({
    "marginals": [
      {"points": [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
       "weights": [0.25, 0.25, 0.25, 0.25]},
      {"points": [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
       "weights": [0.25, 0.25, 0.25, 0.25]}
    ],
    "cost": {"kind": "determinant", "sense": "max"},
    "sigma": true
  })";
  const ProblemFile problem = parse_problem_text(source);
  CHECK(problem.instance.cost.kind == CostKind::Determinant);
  CHECK(problem.instance.cost.sense == Sense::Max);
  CHECK(problem.instance.cost.values.empty());
  CHECK(problem.sigma);
  CHECK(problem.solver == "lp");
  CHECK(!problem.has_entropic);

  const ProblemFile back = parse_problem_text(problem_to_text(problem));
  CHECK(back.instance.cost.kind == CostKind::Determinant);
  CHECK(back.instance.cost.sense == Sense::Max);
  CHECK(back.sigma);
  CHECK(back.instance.marginals[0].points == problem.instance.marginals[0].points);
}

TEST_CASE("problem parse errors point at the offending field") {
  CHECK(contains(error_message_of([] { parse_problem_text("{ not json"); }),
                 "malformed JSON"));
  CHECK(contains(error_message_of([] { parse_problem_text("{}"); }),
                 "/marginals"));

  const std::string missing_weights = R"({
    "marginals": [{"points": [[0.0], [1.0]]}],
    "cost": {"kind": "table", "values": [0.0, 1.0]}
  })";
  CHECK(contains(error_message_of([&] { parse_problem_text(missing_weights); }),
                 "/marginals/0/weights"));

  const std::string bad_weight = R"({
    "marginals": [
      {"points": [[0.0], [1.0]], "weights": [0.5, "half"]},
      {"points": [[0.0]], "weights": [1.0]}
    ],
    "cost": {"kind": "table", "values": [0.0, 1.0]}
  })";
  CHECK(contains(error_message_of([&] { parse_problem_text(bad_weight); }),
                 "/marginals/0/weights/1"));

  const std::string bad_kind = R"({
    "marginals": [
      {"points": [[0.0]], "weights": [1.0]},
      {"points": [[0.0]], "weights": [1.0]}
    ],
    "cost": {"kind": "quadratic", "values": [0.0]}
  })";
  CHECK(contains(error_message_of([&] { parse_problem_text(bad_kind); }),
                 "/cost/kind"));

  const std::string values_on_builtin = R"({
    "marginals": [
      {"points": [[1.0]], "weights": [1.0]},
      {"points": [[2.0]], "weights": [1.0]}
    ],
    "cost": {"kind": "coulomb", "values": [3.0]}
  })";
  CHECK(contains(
      error_message_of([&] { parse_problem_text(values_on_builtin); }),
      "/cost/values"));

  const std::string bad_solver = R"({
    "marginals": [
      {"points": [[1.0]], "weights": [1.0]},
      {"points": [[2.0]], "weights": [1.0]}
    ],
    "cost": {"kind": "coulomb"},
    "solver": "newton"
  })";
  CHECK(contains(error_message_of([&] { parse_problem_text(bad_solver); }),
                 "/solver"));
}

TEST_CASE("problem parsing still applies semantic validation") {
  const std::string negative_weight = R"({
    "marginals": [
      {"points": [[0.0], [1.0]], "weights": [1.5, -0.5]},
      {"points": [[0.0]], "weights": [1.0]}
    ],
    "cost": {"kind": "table", "values": [0.0, 1.0]}
  })";
  CHECK(error_code_of([&] { parse_problem_text(negative_weight); }) ==
        Errc::NonPositiveWeight);

  // Actions are validated against the parsed marginals.
  const std::string short_perm = R"({
    "marginals": [
      {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]},
      {"points": [[0.0], [1.0]], "weights": [0.5, 0.5]}
    ],
    "cost": {"kind": "table", "values": [0.0, 1.0, 1.0, 0.0]},
    "actions": [[[1, 0], [0]]]
  })";
  CHECK(error_code_of([&] { parse_problem_text(short_perm); }) ==
        Errc::DimensionMismatch);

  const std::string unequal_weights_under_action = R"({
    "marginals": [
      {"points": [[0.0], [1.0]], "weights": [0.25, 0.75]},
      {"points": [[0.0], [1.0]], "weights": [0.25, 0.75]}
    ],
    "cost": {"kind": "table", "values": [0.0, 1.0, 1.0, 0.0]},
    "actions": [[[1, 0], [1, 0]]]
  })";
  CHECK(error_code_of([&] {
          parse_problem_text(unequal_weights_under_action);
        }) == Errc::InvalidInput);
}

TEST_CASE("report text round trips every double bitwise") {
  ReportFile report;
  report.solve.primal_value = 1.0 / 3.0;
  report.solve.dual_value = 0.1 + 0.2;
  report.solve.gap = 5.551115123125783e-17;
  report.solve.solver = "simplex";
  report.solve.iterations = 12;
  report.solve.converged = false;
  report.support_threshold = 1e-10;
  report.plan_sizes = {2, 2};
  report.support = {{{0, 1}, 0.7 / 3.0}, {{1, 0}, 0.1}};
  report.potentials.vectors = {{0.1, -0.2}, {1e-300, 4.0}};
  report.extras["alpha"] = kInf;
  report.extras["beta"] = 0.30000000000000004;
  report.has_trace = true;
  report.trace.averaged.vectors = {{0.5, 0.5}, {0.0, 0.0}};
  report.trace.conjugate.vectors = {{0.25, 0.125}, {2.0, 3.0}};
  report.trace.mixed.vectors = {{0.375, 0.3125}, {1.0, 1.5}};
  report.trace.tightened.vectors = {{0.375, 0.3125}, {1.0, 1.5}};
  report.trace.fixed_point_residual = 2.5e-17;
  TheoremReport theorem;
  theorem.name = "demo";
  theorem.passed = false;
  theorem.metrics["gap"] = 0.133974596215561;
  theorem.details = "certificate decided";
  report.theorems.push_back(theorem);

  const std::string text = report_to_text(report);
  const ReportFile back = parse_report_text(text);
  CHECK(back.solve.primal_value == report.solve.primal_value);
  CHECK(back.solve.dual_value == report.solve.dual_value);
  CHECK(back.solve.gap == report.solve.gap);
  CHECK(back.solve.solver == "simplex");
  CHECK(back.solve.iterations == 12);
  CHECK(!back.solve.converged);
  CHECK(back.support_threshold == report.support_threshold);
  CHECK(back.plan_sizes == report.plan_sizes);
  REQUIRE(back.support.size() == 2);
  CHECK(back.support[0].first == std::vector<int>{0, 1});
  CHECK(back.support[0].second == 0.7 / 3.0);
  CHECK(back.support[1].second == 0.1);
  CHECK(back.potentials.vectors == report.potentials.vectors);
  CHECK(back.extras.at("alpha") == kInf);
  CHECK(back.extras.at("beta") == 0.30000000000000004);
  REQUIRE(back.has_trace);
  CHECK(back.trace.averaged.vectors == report.trace.averaged.vectors);
  CHECK(back.trace.conjugate.vectors == report.trace.conjugate.vectors);
  CHECK(back.trace.mixed.vectors == report.trace.mixed.vectors);
  CHECK(back.trace.tightened.vectors == report.trace.tightened.vectors);
  CHECK(back.trace.fixed_point_residual == report.trace.fixed_point_residual);
  REQUIRE(back.theorems.size() == 1);
  CHECK(back.theorems[0].name == "demo");
  CHECK(!back.theorems[0].passed);
  CHECK(back.theorems[0].metrics.at("gap") == 0.133974596215561);
  CHECK(back.theorems[0].details == "certificate decided");

  CHECK(report_to_text(back) == text);
}

TEST_CASE("plan support lists invert back to the plan") {
  const std::vector<int> sizes = {3, 2};
  const IndexSpace space = make_index_space(sizes);
  Plan plan;
  plan.sizes = sizes;
  plan.entries[space.encode({0, 1})] = 0.5;
  plan.entries[space.encode({2, 0})] = 0.3;
  plan.entries[space.encode({1, 1})] = 1e-12;

  const auto entries = plan_support_entries(plan, 1e-10);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].first == std::vector<int>{0, 1});
  CHECK(entries[0].second == 0.5);
  CHECK(entries[1].first == std::vector<int>{2, 0});
  CHECK(entries[1].second == 0.3);

  const Plan back = plan_from_support(entries, sizes);
  CHECK(back.sizes == sizes);
  REQUIRE(back.support_size() == 2);
  CHECK(back.entries.at(space.encode({0, 1})) == 0.5);
  CHECK(back.entries.at(space.encode({2, 0})) == 0.3);

  // Repeated tuples accumulate.
  const Plan merged =
      plan_from_support({{{0, 0}, 0.25}, {{0, 0}, 0.25}}, sizes);
  CHECK(merged.entries.at(space.encode({0, 0})) == 0.5);
}

TEST_CASE("plan reconstruction rejects malformed support entries") {
  const std::vector<int> sizes = {3, 2};
  CHECK(error_code_of([&] { plan_from_support({{{1}, 0.5}}, sizes); }) ==
        Errc::DimensionMismatch);
  CHECK(error_code_of([&] { plan_from_support({{{3, 0}, 0.5}}, sizes); }) ==
        Errc::InvalidInput);
  CHECK(error_code_of([&] { plan_from_support({{{0, -1}, 0.5}}, sizes); }) ==
        Errc::InvalidInput);
}

TEST_CASE("problem and report files survive the filesystem") {
  const std::string problem_path = "/tmp/mmot_test_io_problem.json";
  const std::string report_path = "/tmp/mmot_test_io_report.json";
  const ProblemFile problem = parse_problem_text(kTableProblem);
  write_problem_file(problem_path, problem);
  const ProblemFile loaded = read_problem_file(problem_path);
  CHECK(problem_to_text(loaded) == problem_to_text(problem));

  ReportFile report;
  report.solve.primal_value = 0.625;
  report.solve.solver = "simplex";
  report.support = {{{0, 0}, 1.0}};
  report.plan_sizes = {1, 1};
  report.potentials.vectors = {{0.625}, {0.0}};
  write_report_file(report_path, report);
  const ReportFile loaded_report = read_report_file(report_path);
  CHECK(report_to_text(loaded_report) == report_to_text(report));

  CHECK(error_code_of([] { read_problem_file("/tmp/mmot_no_such_file.json"); }) ==
        Errc::InvalidInput);
  std::remove(problem_path.c_str());
  std::remove(report_path.c_str());
}

TEST_CASE("random instances are deterministic in the seed") {
  RandomSpec spec;
  spec.seed = 7;
  spec.sizes = {4, 3};
  spec.forbidden_fraction = 0.4;
  const Instance a = random_instance(spec);
  const Instance b = random_instance(spec);
  REQUIRE(a.arity() == 2);
  CHECK(a.marginals[0].weights == b.marginals[0].weights);
  CHECK(a.marginals[1].weights == b.marginals[1].weights);
  CHECK(a.marginals[0].points == b.marginals[0].points);
  CHECK(a.cost.values == b.cost.values);

  RandomSpec other = spec;
  other.seed = 8;
  CHECK(random_instance(other).cost.values != a.cost.values);
}

TEST_CASE("random instances stay feasible under heavy masking") {
  for (unsigned seed : {1u, 2u, 3u}) {
    RandomSpec spec;
    spec.seed = seed;
    spec.sizes = {4, 3, 3};
    spec.forbidden_fraction = 0.8;
    const Instance instance = random_instance(spec);
    validate_instance(instance);
    const auto [plan, potentials, solve] = solve_exact(instance);
    CHECK(std::isfinite(solve.primal_value));
    CHECK(solve.gap <= 1e-8);
  }
}

TEST_CASE("random instance weights follow the requested shape") {
  RandomSpec spec;
  spec.seed = 11;
  spec.sizes = {4, 3};
  spec.uniform_weights = true;
  const Instance uniform = random_instance(spec);
  for (double w : uniform.marginals[0].weights) CHECK(w == 0.25);
  for (double w : uniform.marginals[1].weights) CHECK(w == 1.0 / 3.0);

  spec.uniform_weights = false;
  const Instance ragged = random_instance(spec);
  double sum = 0.0;
  for (double w : ragged.marginals[0].weights) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  spec.sense = Sense::Max;
  const Instance max_instance = random_instance(spec);
  CHECK(max_instance.cost.sense == Sense::Max);
}

TEST_CASE("random instance guards reject out-of-range specs") {
  RandomSpec spec;
  spec.sizes = {5};
  CHECK(error_code_of([&] { random_instance(spec); }) == Errc::InvalidInput);
  spec.sizes = {0, 2};
  CHECK(error_code_of([&] { random_instance(spec); }) == Errc::InvalidInput);
  spec.sizes = {2, 841};
  CHECK(error_code_of([&] { random_instance(spec); }) == Errc::InvalidInput);
  spec.sizes = {3, 3};
  spec.sense = Sense::Max;
  spec.forbidden_fraction = 0.25;
  CHECK(error_code_of([&] { random_instance(spec); }) == Errc::InvalidInput);
}

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
#include "doctest.h"

#include <cstdint>
#include <numeric>
#include <tuple>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/io.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver_lp.hpp"
#include "oracles.hpp"

using namespace mmot;
using mmot_tests::error_code_of;
using mmot_tests::line_marginal;
using mmot_tests::table_instance;

namespace {

// Number of basic columns an LP vertex can carry: one per independent row.
int vertex_support_cap(const Instance& instance) {
  int cap = 1;
  for (const auto& m : instance.marginals) cap += m.size() - 1;
  return cap;
}

}  // namespace

TEST_CASE("single atom pair transports at the only cell's cost") {
  Instance inst;
  inst.marginals = {line_marginal({1.0}), line_marginal({1.0})};
  inst.marginals[1].points[0][0] = 3.0;
  inst.cost.kind = CostKind::ExplicitTable;
  inst.cost.values = {7.25};
  auto [plan, pot, rep] = solve_exact(inst);
  CHECK(rep.primal_value == doctest::Approx(7.25).epsilon(1e-15));
  CHECK(rep.gap <= 1e-12);
  REQUIRE(plan.entries.size() == 1);
  CHECK(plan.entries.at(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("2x2 antidiagonal cost couples on the diagonal") {
  const Instance inst = table_instance({2, 2}, {0.0, 1.0, 1.0, 0.0});
  auto [plan, pot, rep] = solve_exact(inst);
  CHECK(rep.primal_value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(plan.entries.count(0) == 1);
  CHECK(plan.entries.count(3) == 1);
  CHECK(plan.entries.count(1) == 0);
  CHECK(plan.entries.count(2) == 0);
}

TEST_CASE("LP value matches assignment brute force on uniform pairs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int m : {2, 3, 4, 5}) {
      RandomSpec spec;
      spec.seed = seed * 100 + m;
      spec.sizes = {m, m};
      spec.uniform_weights = true;
      const Instance inst = random_instance(spec);
      auto [plan, pot, rep] = solve_exact(inst);
      const double oracle = mmot_tests::assignment_optimum(inst);
      CHECK(rep.primal_value == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(rep.gap <= 1e-8);
    }
  }
}

TEST_CASE("maximization flips the assignment oracle") {
  RandomSpec spec;
  spec.seed = 99;
  spec.sizes = {4, 4};
  spec.uniform_weights = true;
  spec.sense = Sense::Max;
  const Instance inst = random_instance(spec);
  auto [plan, pot, rep] = solve_exact(inst);
  const double oracle = mmot_tests::assignment_optimum(inst);
  CHECK(rep.primal_value == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(rep.primal_value >= rep.dual_value - 1e-9);
  CHECK(rep.gap <= 1e-8);
}

TEST_CASE("strong duality and vertex bound on seeded instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (const auto& sizes : std::vector<std::vector<int>>{
             {7, 9}, {12, 5}, {4, 5, 6}, {3, 3, 3, 3}}) {
      RandomSpec spec;
      spec.seed = seed * 1000 + sizes.size();
      spec.sizes = sizes;
      spec.forbidden_fraction = seed % 2 == 0 ? 0.2 : 0.0;
      const Instance inst = random_instance(spec);
      auto [plan, pot, rep] = solve_exact(inst);
      CHECK(rep.gap <= 1e-8);
      CHECK(marginal_residual(plan, inst.marginals) <= 1e-10);
      CHECK(static_cast<int>(plan.entries.size()) <= vertex_support_cap(inst));

      const Certificate cert = verify_certificate(plan, pot, inst);
      CHECK(cert.gap <= 1e-8);
      CHECK(cert.max_feasibility_violation <= 1e-9);
      CHECK(cert.max_slackness_violation <= 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 24);
}

TEST_CASE("dual potentials price every finite cell") {
  RandomSpec spec;
  spec.seed = 5150;
  spec.sizes = {6, 7};
  spec.forbidden_fraction = 0.25;
  const Instance inst = random_instance(spec);
  auto [plan, pot, rep] = solve_exact(inst);
  const CostView view(inst);
  CHECK(feasibility_violation(to_min_form(pot, view), view) <= 1e-9);
}

TEST_CASE("routing through forbidden cells only is infeasible") {
  Instance inst;
  inst.marginals = {line_marginal({0.9, 0.1}), line_marginal({0.1, 0.9})};
  inst.cost.kind = CostKind::ExplicitTable;
  inst.cost.values = {0.0, kInf, kInf, 0.0};
  CHECK(error_code_of([&] { solve_exact(inst); }) ==
        Errc::FiniteCostInfeasible);

  inst.cost.values = {kInf, kInf, kInf, kInf};
  CHECK(error_code_of([&] { solve_exact(inst); }) ==
        Errc::FiniteCostInfeasible);
}

TEST_CASE("column order changes the vertex but not the value") {
  RandomSpec spec;
  spec.seed = 777;
  spec.sizes = {5, 5, 3};
  const Instance inst = random_instance(spec);
  auto [plan_a, pot_a, rep_a] = solve_exact(inst);
  SolveOptions reversed;
  reversed.reverse_columns = true;
  auto [plan_b, pot_b, rep_b] = solve_exact(inst, reversed);
  CHECK(rep_a.primal_value == doctest::Approx(rep_b.primal_value).epsilon(1e-9));
}

TEST_CASE("recorded gap is reproducible from the report pieces") {
  RandomSpec spec;
  spec.seed = 31;
  spec.sizes = {6, 6};
  const Instance inst = random_instance(spec);
  auto [plan, pot, rep] = solve_exact(inst);
  const Certificate cert = verify_certificate(plan, pot, inst);
  CHECK(std::abs(cert.gap - rep.gap) <= 1e-12);
}

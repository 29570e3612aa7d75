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

#include <cmath>
#include <tuple>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/io.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver_lp.hpp"
#include "mmot/solver_sinkhorn.hpp"
#include "oracles.hpp"

using namespace mmot;
using mmot_tests::error_code_of;
using mmot_tests::line_marginal;
using mmot_tests::table_instance;

TEST_CASE("2x2 antidiagonal instance matches the closed form") {
  const Instance inst = table_instance({2, 2}, {0.0, 1.0, 1.0, 0.0});
  EntropicConfig config;
  config.epsilon = 1.0;
  config.max_iter = 100000;
  config.tol = 1e-12;
  auto [plan, pot, rep] = solve_entropic(inst, config);
  REQUIRE(rep.converged);

  // The Gibbs kernel is symmetric under both the transposition and the
  // marginal swap, so each diagonal cell carries e^{1/eps}/(2(1+e^{1/eps})).
  const double e = std::exp(1.0);
  const double diagonal = 0.5 * e / (1.0 + e);
  CHECK(plan.entries.at(0) == doctest::Approx(diagonal).epsilon(1e-6));
  CHECK(plan.entries.at(3) == doctest::Approx(diagonal).epsilon(1e-6));
  CHECK(plan.entries.at(1) == doctest::Approx(0.5 - diagonal).epsilon(1e-6));
}

TEST_CASE("converged plans match the marginals within tol") {
  RandomSpec spec;
  spec.seed = 42;
  spec.sizes = {5, 6};
  const Instance inst = random_instance(spec);
  EntropicConfig config;
  config.epsilon = 0.3;
  config.max_iter = 50000;
  config.tol = 1e-10;
  auto [plan, pot, rep] = solve_entropic(inst, config);
  REQUIRE(rep.converged);
  CHECK(marginal_residual(plan, inst.marginals) <= 1e-10);
  CHECK(rep.primal_value == doctest::Approx(plan_cost(plan, inst)).epsilon(1e-12));
}

TEST_CASE("epsilon sweep decreases toward the exact value") {
  RandomSpec spec;
  spec.seed = 17;
  spec.sizes = {4, 4};
  spec.uniform_weights = true;
  const Instance inst = random_instance(spec);
  EntropicConfig config;
  config.max_iter = 200000;
  config.tol = 1e-11;
  const std::vector<double> epsilons = {2.0, 1.0, 0.5, 0.25, 0.1, 0.05};
  const EpsilonSweep sweep = epsilon_sweep(inst, epsilons, config);
  REQUIRE(sweep.reports.size() == epsilons.size());
  REQUIRE(sweep.has_exact);
  for (std::size_t i = 1; i < sweep.reports.size(); ++i) {
    CHECK(sweep.reports[i].primal_value <=
          sweep.reports[i - 1].primal_value + 1e-12);
  }
  for (const auto& rep : sweep.reports) {
    CHECK(rep.primal_value >= sweep.exact_value - 1e-9);
  }
  CHECK(sweep.reports.back().primal_value ==
        doctest::Approx(sweep.exact_value).epsilon(0.05));
}

TEST_CASE("symmetric instances give symmetric entropic plans") {
  // Cost and marginals are invariant under the coordinate swap, and the
  // iteration starts symmetric, so the plan should stay symmetric up to
  // the convergence tolerance.
  const Instance inst =
      table_instance({3, 3}, {0.0, 2.0, 1.0, 2.0, 0.5, 4.0, 1.0, 4.0, 0.0});
  EntropicConfig config;
  config.epsilon = 0.5;
  config.max_iter = 50000;
  config.tol = 1e-10;
  auto [plan, pot, rep] = solve_entropic(inst, config);
  REQUIRE(rep.converged);
  const IndexSpace space = make_index_space(inst.marginals);
  std::vector<int> tuple;
  for (const auto& [idx, mass] : plan.entries) {
    space.decode(idx, tuple);
    const std::int64_t mirrored = space.encode({tuple[1], tuple[0]});
    CHECK(plan.entries.at(mirrored) == doctest::Approx(mass).epsilon(10 * config.tol));
  }
}

TEST_CASE("three marginals converge and price consistently") {
  RandomSpec spec;
  spec.seed = 23;
  spec.sizes = {3, 4, 3};
  const Instance inst = random_instance(spec);
  EntropicConfig config;
  config.epsilon = 0.4;
  config.max_iter = 100000;
  config.tol = 1e-9;
  auto [plan, pot, rep] = solve_entropic(inst, config);
  REQUIRE(rep.converged);
  CHECK(marginal_residual(plan, inst.marginals) <= 1e-9);
  auto [lp_plan, lp_pot, lp_rep] = solve_exact(inst);
  CHECK(rep.primal_value >= lp_rep.primal_value - 1e-9);
}

TEST_CASE("forbidden rows make the kernel vanish") {
  Instance inst = table_instance({2, 2}, {kInf, kInf, kInf, kInf});
  EntropicConfig config;
  config.epsilon = 1.0;
  CHECK(error_code_of([&] { solve_entropic(inst, config); }) ==
        Errc::AllCellsForbidden);
}

TEST_CASE("iteration cap reports non-convergence honestly") {
  RandomSpec spec;
  spec.seed = 8;
  spec.sizes = {6, 6};
  const Instance inst = random_instance(spec);
  EntropicConfig config;
  config.epsilon = 0.05;
  config.max_iter = 2;
  config.tol = 1e-14;
  auto [plan, pot, rep] = solve_entropic(inst, config);
  CHECK(!rep.converged);
  CHECK(rep.iterations == 2);
}

TEST_CASE("config validation") {
  const Instance inst = table_instance({2, 2}, {0.0, 1.0, 1.0, 0.0});
  EntropicConfig config;
  config.epsilon = 0.0;
  CHECK(error_code_of([&] { solve_entropic(inst, config); }) ==
        Errc::InvalidInput);
  config.epsilon = 1.0;
  config.max_iter = 0;
  CHECK(error_code_of([&] { solve_entropic(inst, config); }) ==
        Errc::InvalidInput);
}

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

#ifndef MMOT_SOLVER_SINKHORN_HPP
#define MMOT_SOLVER_SINKHORN_HPP

#include <tuple>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/plan.hpp"

namespace mmot {

struct EntropicConfig {
  double epsilon = 0.05;
  int max_iter = 5000;
  double tol = 1e-9;  // max over marginals of the L1 marginal error
};

// Iterative proportional fitting in the log domain: cyclic updates of one
// scaling potential per marginal until every marginal matches within tol.
// Starts from zero potentials, which preserves any symmetry of the instance.
// On hitting max_iter the best iterate is returned with converged = false.
std::tuple<Plan, Potentials, SolveReport> solve_entropic(
    const Instance& instance, const EntropicConfig& config);

struct EpsilonSweep {
  std::vector<SolveReport> reports;  // one per epsilon, in input order
  bool has_exact = false;
  double exact_value = 0.0;  // LP optimum, original sense
};

// Runs solve_entropic across a strictly decreasing epsilon schedule and,
// when the instance is small enough for the exact solver, records the LP
// value the entropic values approach.
EpsilonSweep epsilon_sweep(const Instance& instance,
                           const std::vector<double>& epsilons,
                           const EntropicConfig& config);

}  // namespace mmot

#endif  // MMOT_SOLVER_SINKHORN_HPP

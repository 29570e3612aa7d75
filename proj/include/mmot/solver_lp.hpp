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

#ifndef MMOT_SOLVER_LP_HPP
#define MMOT_SOLVER_LP_HPP

#include "mmot/cost.hpp"
#include "mmot/plan.hpp"

namespace mmot {

inline constexpr std::int64_t kLpCap = 1'000'000;

struct SolveOptions {
  // Enumerate LP columns in reverse cell order. Changes which optimal vertex
  // and duals are reached on degenerate instances; used by the empirical
  // uniqueness probe.
  bool reverse_columns = false;
};

// Exact minimum-cost coupling by two-phase revised simplex over the
// finite-cost cells. Returns a vertex plan, feasible dual potentials in the
// original sense, and a report with the duality gap.
std::tuple<Plan, Potentials, SolveReport> solve_exact(
    const Instance& instance, const SolveOptions& options = {});

struct Certificate {
  double gap = 0.0;
  double max_feasibility_violation = 0.0;
  double max_slackness_violation = 0.0;
};

// Re-derives the three optimality metrics from scratch: |I_c - dual value|,
// worst dual constraint violation over all finite cells, and worst
// complementary slackness violation over the plan support.
Certificate verify_certificate(const Plan& plan, const Potentials& potentials,
                               const Instance& instance);

}  // namespace mmot

#endif  // MMOT_SOLVER_LP_HPP

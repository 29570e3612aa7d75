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

#ifndef MMOT_PLAN_HPP
#define MMOT_PLAN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/group.hpp"
#include "mmot/measure.hpp"

namespace mmot {

// A sparse coupling: strictly positive mass per stored product cell.
struct Plan {
  std::map<std::int64_t, double> entries;
  std::vector<int> sizes;

  int support_size() const { return static_cast<int>(entries.size()); }
  double total_mass() const;
};

// One dual vector per marginal, indexed by the marginal's support, in the
// original sense of the instance (min: sum <= c, max: sum >= c).
struct Potentials {
  std::vector<std::vector<double>> vectors;

  int arity() const { return static_cast<int>(vectors.size()); }
};

struct SolveReport {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  std::string solver;
  int iterations = 0;
  bool converged = true;
};

// Per-marginal sums of the plan's mass, comparable to the marginal weights.
std::vector<std::vector<double>> marginal_sums(const Plan& plan);

// Max-norm deviation between the plan's marginals and the target weights.
double marginal_residual(const Plan& plan,
                         const std::vector<DiscreteMarginal>& marginals);

// Transport cost of the plan against the original-sense cost.
double plan_cost(const Plan& plan, const Instance& instance);

double plan_l1_distance(const Plan& a, const Plan& b);

Plan pushforward(const Plan& plan, const ProductAction& action);

// Image index under the coordinate rotation (t_1,...,t_n) -> (t_2,...,t_n,t_1).
std::int64_t sigma_shift(const IndexSpace& space, std::int64_t linear);
Plan pushforward_sigma(const Plan& plan);

// Sum over marginals of the weighted mean of each dual vector, in whatever
// sense the vectors are expressed.
double dual_value(const Potentials& potentials,
                  const std::vector<DiscreteMarginal>& marginals);

// Shifts vectors 2..n to weighted mean zero, absorbing the constants into
// vector 1. Leaves the dual value unchanged.
Potentials normalize_potentials(Potentials potentials,
                                const std::vector<DiscreteMarginal>& marginals);

// Max over finite-cost cells of (sum_j psi_j - c~)+, for min-form potentials
// against the sense-normalized cost. Zero means feasible.
double feasibility_violation(const Potentials& min_form, const CostView& view);

// Potentials in the original sense <-> internal min-form (negation for Max).
Potentials to_min_form(const Potentials& original, const CostView& view);
Potentials to_original_sense(const Potentials& min_form, const CostView& view);

}  // namespace mmot

#endif  // MMOT_PLAN_HPP

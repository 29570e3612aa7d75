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

#include "mmot/solver_lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmot/errors.hpp"
#include "simplex.hpp"

namespace mmot {

namespace {

// Equality rows: all of marginal 1's block, then blocks 2..n each with the
// last support index dropped. The full incidence system has rank
// sum(m_j) - n + 1; dropping one row per later block makes the kept rows a
// row basis, so phase 1 decides feasibility exactly.
struct RowLayout {
  std::vector<int> offset;   // per marginal
  std::vector<int> kept;     // per marginal: rows kept in its block
  int nrows = 0;

  explicit RowLayout(const std::vector<DiscreteMarginal>& marginals) {
    offset.resize(marginals.size());
    kept.resize(marginals.size());
    int at = 0;
    for (std::size_t j = 0; j < marginals.size(); ++j) {
      offset[j] = at;
      kept[j] = marginals[j].size() - (j == 0 ? 0 : 1);
      at += kept[j];
    }
    nrows = at;
  }

  // Row of (marginal j, support index i), or -1 if dropped.
  int row(int j, int i) const { return i < kept[j] ? offset[j] + i : -1; }
};

}  // namespace

std::tuple<Plan, Potentials, SolveReport> solve_exact(
    const Instance& instance, const SolveOptions& options) {
  const Instance validated = validate_instance(instance);
  const std::int64_t total = product_size(validated.marginals);
  if (total > kLpCap) {
    throw MkError(Errc::TooLarge,
                  "product space of size " + std::to_string(total) +
                      " exceeds the exact solver cap of " +
                      std::to_string(kLpCap));
  }
  const CostView view(validated);
  const IndexSpace& space = view.space();
  const int n = validated.arity();
  const RowLayout layout(validated.marginals);

  SimplexProblem lp;
  lp.nrows = layout.nrows;
  lp.rhs.assign(layout.nrows, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < layout.kept[j]; ++i) {
      lp.rhs[layout.offset[j] + i] = validated.marginals[j].weights[i];
    }
  }

  std::vector<std::int64_t> cells;
  for (std::int64_t raw = 0; raw < total; ++raw) {
    const std::int64_t idx = options.reverse_columns ? total - 1 - raw : raw;
    const double c = view.value(idx);
    if (c == kInf) continue;
    cells.push_back(idx);
    lp.cost.push_back(c);
    std::vector<int> rows;
    std::int64_t rest = idx;
    for (int j = 0; j < n; ++j) {
      const int i = static_cast<int>(rest / space.strides[j]);
      rest -= space.strides[j] * i;
      const int r = layout.row(j, i);
      if (r >= 0) rows.push_back(r);
    }
    lp.columns.push_back(std::move(rows));
  }

  const SimplexResult lp_result = simplex_solve(lp);
  if (!lp_result.feasible) {
    throw MkError(Errc::FiniteCostInfeasible,
                  "every coupling puts mass on a forbidden cell");
  }

  Plan plan;
  plan.sizes = space.sizes;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (lp_result.x[c] > 0.0) plan.entries[cells[c]] = lp_result.x[c];
  }

  Potentials min_form;
  min_form.vectors.resize(n);
  for (int j = 0; j < n; ++j) {
    min_form.vectors[j].assign(validated.marginals[j].size(), 0.0);
    for (int i = 0; i < layout.kept[j]; ++i) {
      min_form.vectors[j][i] = lp_result.duals[layout.offset[j] + i];
    }
  }
  Potentials potentials = normalize_potentials(
      to_original_sense(min_form, view), validated.marginals);

  SolveReport report;
  report.solver = "simplex";
  report.iterations = lp_result.iterations;
  report.primal_value = view.to_original(lp_result.value);
  report.dual_value = dual_value(potentials, validated.marginals);
  report.gap = std::abs(report.primal_value - report.dual_value);
  report.converged = true;
  return {std::move(plan), std::move(potentials), std::move(report)};
}

Certificate verify_certificate(const Plan& plan, const Potentials& potentials,
                               const Instance& instance) {
  const CostView view(instance);
  const Potentials min_form = to_min_form(potentials, view);

  Certificate cert;
  const double primal = plan_cost(plan, instance);
  const double dual = dual_value(potentials, instance.marginals);
  cert.gap = std::abs(primal - dual);
  cert.max_feasibility_violation = feasibility_violation(min_form, view);

  const IndexSpace& space = view.space();
  const int n = space.arity();
  for (const auto& [idx, mass] : plan.entries) {
    const double c = view.value(idx);
    if (c == kInf) {
      cert.max_slackness_violation = kInf;
      continue;
    }
    std::int64_t rest = idx;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const int i = static_cast<int>(rest / space.strides[j]);
      rest -= space.strides[j] * i;
      sum += min_form.vectors[j][i];
    }
    cert.max_slackness_violation =
        std::max(cert.max_slackness_violation, mass * (c - sum));
  }
  return cert;
}

}  // namespace mmot

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

#include "mmot/solver_sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmot/errors.hpp"
#include "mmot/parallel.hpp"
#include "mmot/solver_lp.hpp"
#include "slice.hpp"

namespace mmot {

namespace {

// log of the slice mass seen by marginal j at support point i, with the
// point's own weight and scaling factored out:
//   log sum over the slice of exp((sum_{k!=j} psi_k - c~)/eps
//                                 + sum_{k!=j} log w_k).
// Streaming log-sum-exp: a max pass then a shifted accumulation pass, both
// in fixed index order. Returns -inf when the whole slice is forbidden.
double log_slice_mass(const CostView& view,
                      const std::vector<std::vector<double>>& psi,
                      const std::vector<std::vector<double>>& logw, int j,
                      int i, double eps) {
  const IndexSpace& space = view.space();
  const int n = space.arity();
  double shift = -kInf;
  for_each_in_slice(space, j, i, [&](std::int64_t idx, const int* tup) {
    const double c = view.value(idx);
    if (c == kInf) return;
    double a = -c;
    for (int k = 0; k < n; ++k) {
      if (k != j) a += psi[k][tup[k]];
    }
    a /= eps;
    for (int k = 0; k < n; ++k) {
      if (k != j) a += logw[k][tup[k]];
    }
    shift = std::max(shift, a);
  });
  if (shift == -kInf) return -kInf;
  double sum = 0.0;
  for_each_in_slice(space, j, i, [&](std::int64_t idx, const int* tup) {
    const double c = view.value(idx);
    if (c == kInf) return;
    double a = -c;
    for (int k = 0; k < n; ++k) {
      if (k != j) a += psi[k][tup[k]];
    }
    a /= eps;
    for (int k = 0; k < n; ++k) {
      if (k != j) a += logw[k][tup[k]];
    }
    sum += std::exp(a - shift);
  });
  return shift + std::log(sum);
}

}  // namespace

std::tuple<Plan, Potentials, SolveReport> solve_entropic(
    const Instance& instance, const EntropicConfig& config) {
  if (!(config.epsilon > 0.0) || !(config.tol > 0.0) || config.max_iter < 1) {
    throw MkError(Errc::InvalidInput,
                  "entropic config needs epsilon > 0, tol > 0, max_iter >= 1");
  }
  const Instance validated = validate_instance(instance);
  const CostView view(validated);
  const IndexSpace& space = view.space();
  const int n = validated.arity();
  const double eps = config.epsilon;

  // Every support point needs at least one admissible completion, otherwise
  // its marginal constraint is unreachable.
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < space.sizes[j]; ++i) {
      bool any_finite = false;
      for_each_in_slice(space, j, i, [&](std::int64_t idx, const int*) {
        any_finite = any_finite || view.value(idx) < kInf;
      });
      if (!any_finite) {
        throw MkError(Errc::AllCellsForbidden,
                      "support point " + std::to_string(i) + " of marginal " +
                          std::to_string(j + 1) +
                          " meets only forbidden cells");
      }
    }
  }

  std::vector<std::vector<double>> psi(n), logw(n);
  for (int j = 0; j < n; ++j) {
    psi[j].assign(space.sizes[j], 0.0);
    logw[j].resize(space.sizes[j]);
    for (int i = 0; i < space.sizes[j]; ++i) {
      logw[j][i] = std::log(validated.marginals[j].weights[i]);
    }
  }

  bool converged = false;
  int sweeps = 0;
  while (sweeps < config.max_iter) {
    ++sweeps;
    for (int j = 0; j < n; ++j) {
      const int mj = space.sizes[j];
#pragma omp parallel for schedule(static) num_threads(thread_count())
      for (int i = 0; i < mj; ++i) {
        psi[j][i] = -eps * log_slice_mass(view, psi, logw, j, i, eps);
      }
    }
    // True residual of the current iterate, one more pass per marginal.
    // Per-point deviations land in a buffer and are reduced in fixed order,
    // so the convergence decision is identical for every thread count.
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
      const int mj = space.sizes[j];
      std::vector<double> dev(mj);
#pragma omp parallel for schedule(static) num_threads(thread_count())
      for (int i = 0; i < mj; ++i) {
        const double lsm = log_slice_mass(view, psi, logw, j, i, eps);
        const double mass = validated.marginals[j].weights[i] *
                            std::exp(psi[j][i] / eps + lsm);
        dev[i] = std::abs(mass - validated.marginals[j].weights[i]);
      }
      double ej = 0.0;
      for (int i = 0; i < mj; ++i) ej += dev[i];
      err = std::max(err, ej);
    }
    if (err < config.tol) {
      converged = true;
      break;
    }
  }

  Plan plan;
  plan.sizes = space.sizes;
  double primal_min = 0.0;
  {
    std::vector<int> tup(n);
    for (std::int64_t idx = 0; idx < space.total; ++idx) {
      const double c = view.value(idx);
      if (c == kInf) continue;
      space.decode(idx, tup);
      double a = -c;
      for (int j = 0; j < n; ++j) a += psi[j][tup[j]];
      a /= eps;
      for (int j = 0; j < n; ++j) a += logw[j][tup[j]];
      const double mass = std::exp(a);
      if (mass > 0.0) {
        plan.entries[idx] = mass;
        primal_min += mass * c;
      }
    }
  }

  Potentials min_form;
  min_form.vectors = psi;
  Potentials potentials = normalize_potentials(
      to_original_sense(min_form, view), validated.marginals);

  SolveReport report;
  report.solver = "sinkhorn";
  report.iterations = sweeps;
  report.converged = converged;
  report.primal_value = view.to_original(primal_min);
  report.dual_value = dual_value(potentials, validated.marginals);
  report.gap = std::abs(report.primal_value - report.dual_value);
  return {std::move(plan), std::move(potentials), std::move(report)};
}

EpsilonSweep epsilon_sweep(const Instance& instance,
                           const std::vector<double>& epsilons,
                           const EntropicConfig& config) {
  for (std::size_t k = 1; k < epsilons.size(); ++k) {
    if (!(epsilons[k] < epsilons[k - 1])) {
      throw MkError(Errc::InvalidInput,
                    "epsilon schedule must be strictly decreasing");
    }
  }
  EpsilonSweep sweep;
  for (double eps : epsilons) {
    EntropicConfig c = config;
    c.epsilon = eps;
    auto [plan, potentials, report] = solve_entropic(instance, c);
    sweep.reports.push_back(report);
  }
  if (product_size(instance.marginals) <= kLpCap) {
    auto [plan, potentials, report] = solve_exact(instance);
    sweep.has_exact = true;
    sweep.exact_value = report.primal_value;
  }
  return sweep;
}

}  // namespace mmot

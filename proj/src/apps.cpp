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

#include "mmot/apps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>

#include "mmot/errors.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver_lp.hpp"
#include "mmot/symmetrize.hpp"

namespace mmot {

namespace {

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

// Equally spaced points on a circle. Quarter-turn and half-turn images are
// exact sign flips of the first arc whenever the divisibility allows, so the
// corresponding index rotations map stored coordinates onto stored
// coordinates bitwise.
std::vector<std::vector<double>> circle_points(double r, int m) {
  const double tau = 2.0 * std::numbers::pi;
  auto raw = [&](int k) -> std::vector<double> {
    if (8 * k == m) {
      const double diag = r * std::sqrt(0.5);
      return {diag, diag};
    }
    const double a = tau * static_cast<double>(k) / static_cast<double>(m);
    return {r * std::cos(a), r * std::sin(a)};
  };
  std::vector<std::vector<double>> pts(m);
  if (m % 4 == 0) {
    const int q = m / 4;
    for (int k = 0; k < q; ++k) pts[k] = raw(k);
    for (int k = 0; k < q; ++k) {
      const double x = pts[k][0];
      const double y = pts[k][1];
      pts[q + k] = {clean_zero(-y), x};
      pts[2 * q + k] = {clean_zero(-x), clean_zero(-y)};
      pts[3 * q + k] = {y, clean_zero(-x)};
    }
  } else if (m % 2 == 0) {
    const int h = m / 2;
    for (int k = 0; k < h; ++k) pts[k] = raw(k);
    for (int k = 0; k < h; ++k) {
      pts[h + k] = {clean_zero(-pts[k][0]), clean_zero(-pts[k][1])};
    }
  } else {
    for (int k = 0; k < m; ++k) pts[k] = raw(k);
  }
  return pts;
}

double sq_norm(const std::vector<double>& p) {
  return p[0] * p[0] + p[1] * p[1];
}

}  // namespace

RadialSetup gen_radial_instance(const std::vector<double>& radii, int m,
                                int n_marginals) {
  if (m < 1) throw MkError(Errc::InvalidInput, "need at least one angle");
  if (n_marginals < 2) {
    throw MkError(Errc::InvalidInput, "need at least two marginals");
  }
  if (radii.empty()) throw MkError(Errc::InvalidInput, "need at least one radius");
  for (std::size_t a = 0; a < radii.size(); ++a) {
    if (!(radii[a] > 0.0)) {
      throw MkError(Errc::InvalidInput, "radii must be positive");
    }
    for (std::size_t b = a + 1; b < radii.size(); ++b) {
      if (radii[a] == radii[b]) {
        throw MkError(Errc::InvalidInput, "radii must be distinct");
      }
    }
  }

  const int circles = static_cast<int>(radii.size());
  const int total = circles * m;
  RadialSetup setup;
  setup.base.radii = radii;
  setup.base.points_per_circle = m;

  DiscreteMarginal marginal;
  marginal.points.reserve(total);
  const double w = 1.0 / static_cast<double>(total);
  for (double r : radii) {
    auto pts = circle_points(r, m);
    for (auto& p : pts) marginal.points.push_back(std::move(p));
  }
  marginal.weights.assign(total, w);

  MarginalMap rotation;
  rotation.perm.resize(total);
  for (int c = 0; c < circles; ++c) {
    for (int k = 0; k < m; ++k) {
      rotation.perm[c * m + k] = c * m + (k + 1) % m;
    }
  }

  setup.base.rotation = rotation;
  setup.marginals.reserve(n_marginals);
  for (int j = 0; j < n_marginals; ++j) {
    DiscreteMarginal mj = marginal;
    mj.label = "mu" + std::to_string(j + 1);
    setup.marginals.push_back(validate_marginal(std::move(mj)));
  }
  setup.base.marginal = setup.marginals.front();
  setup.rotation_action.maps.assign(n_marginals, rotation);
  return setup;
}

double max_circle_deviation(const std::vector<double>& v, int m) {
  if (m < 1 || v.size() % static_cast<std::size_t>(m) != 0) {
    throw MkError(Errc::DimensionMismatch,
                  "vector length is not a multiple of the circle size");
  }
  double dev = 0.0;
  for (std::size_t start = 0; start < v.size(); start += m) {
    for (int k = 1; k < m; ++k) {
      dev = std::max(dev, std::abs(v[start + k] - v[start]));
    }
  }
  return dev;
}

TheoremReport determinant_check(const std::vector<double>& radii, int m) {
  RadialSetup setup = gen_radial_instance(radii, m, 2);
  Instance inst;
  inst.marginals = setup.marginals;
  inst.cost.kind = CostKind::Determinant;
  inst.cost.sense = Sense::Max;

  auto [plan, pot, solve] = solve_exact(inst);

  TheoremReport report;
  report.name = "determinant";
  report.metrics["optimal_value"] = solve.primal_value;
  report.metrics["lp_gap"] = solve.gap;

  // Explicit half-squared-norm candidate: feasible for the dual of the
  // maximization by the arithmetic-geometric mean bound, and matching the
  // primal value certifies joint optimality.
  const int total = setup.marginals.front().size();
  std::vector<double> half_sq(total);
  for (int i = 0; i < total; ++i) {
    half_sq[i] = 0.5 * sq_norm(setup.marginals.front().points[i]);
  }
  Potentials candidate;
  candidate.vectors = {half_sq, half_sq};
  const CostView view(inst);
  const double candidate_violation =
      feasibility_violation(to_min_form(candidate, view), view);
  const double candidate_value = dual_value(candidate, inst.marginals);
  const double certificate_gap = std::abs(solve.primal_value - candidate_value);
  report.metrics["candidate_feasibility_violation"] = candidate_violation;
  report.metrics["candidate_dual_value"] = candidate_value;
  report.metrics["certificate_gap"] = certificate_gap;

  // Support geometry: with quarter turns in the grid, optimal pairs must be
  // orthogonal, positively oriented, and of equal radius, exactly.
  const bool support_applicable = m % 4 == 0;
  report.metrics["support_checks_applicable"] = support_applicable ? 1.0 : 0.0;
  double orth = 0.0;
  double radius_mismatch = 0.0;
  double min_det = kInf;
  if (support_applicable) {
    const IndexSpace space = make_index_space(inst.marginals);
    std::vector<int> tup;
    for (const auto& [idx, mass] : plan.entries) {
      if (mass <= 1e-10) continue;
      space.decode(idx, tup);
      const auto& x = inst.marginals[0].points[tup[0]];
      const auto& y = inst.marginals[1].points[tup[1]];
      orth = std::max(orth, std::abs(x[0] * y[0] + x[1] * y[1]));
      radius_mismatch =
          std::max(radius_mismatch, std::abs(sq_norm(x) - sq_norm(y)));
      min_det = std::min(min_det, x[0] * y[1] - x[1] * y[0]);
    }
    report.metrics["support_orthogonality"] = orth;
    report.metrics["support_radius_mismatch"] = radius_mismatch;
    report.metrics["support_min_det"] = min_det;
  }

  const ActionFamily family =
      generate_group({setup.rotation_action}, inst.marginals);
  const SymmetrizationTrace trace = symmetrize_dual(inst, pot, family);
  double orbit_dev = 0.0;
  for (const auto& v : trace.tightened.vectors) {
    orbit_dev = std::max(orbit_dev, max_circle_deviation(v, m));
  }
  const double value_dev =
      std::abs(dual_value(trace.tightened, inst.marginals) - solve.dual_value);
  report.metrics["orbit_constancy_deviation"] = orbit_dev;
  report.metrics["value_preservation"] = value_dev;
  report.metrics["fixed_point_residual"] = trace.fixed_point_residual;

  // Empirical uniqueness probe: a second solve with reversed column order.
  // Disagreement is reported, never failed; discrete instances may sit on a
  // degenerate face.
  SolveOptions reversed;
  reversed.reverse_columns = true;
  const auto [plan2, pot2, solve2] = solve_exact(inst, reversed);
  double probe = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < total; ++i) {
      probe = std::max(probe,
                       std::abs(pot.vectors[j][i] - pot2.vectors[j][i]));
    }
  }
  report.metrics["uniqueness_probe_delta"] = probe;

  report.passed = solve.gap <= 1e-8 && candidate_violation <= 1e-12 &&
                  certificate_gap <= 1e-8 && orbit_dev == 0.0 &&
                  value_dev <= 1e-8 && trace.fixed_point_residual <= 1e-9;
  if (support_applicable) {
    report.passed = report.passed && orth == 0.0 && radius_mismatch == 0.0 &&
                    min_det > 0.0;
  }

  report.details =
      "orientation is read as det(x, y) > 0; support geometry " +
      std::string(support_applicable ? "checked exactly"
                                     : "not applicable (4 does not divide m)");
  if (probe > 1e-7) {
    report.details += "; discrete non-uniqueness observed (probe delta " +
                      std::to_string(probe) + ")";
  }
  return report;
}

TheoremReport coulomb_check(const std::vector<double>& radii, int m,
                            int n_marginals) {
  if (n_marginals < 2 || n_marginals > 3) {
    throw MkError(Errc::InvalidInput,
                  "the pairwise-repulsion demo supports 2 or 3 marginals");
  }
  RadialSetup setup = gen_radial_instance(radii, m, n_marginals);
  Instance inst;
  inst.marginals = setup.marginals;
  inst.cost.kind = CostKind::Coulomb;
  inst.cost.sense = Sense::Min;

  auto [plan, pot, solve] = solve_exact(inst);

  TheoremReport report;
  report.name = "coulomb";
  report.metrics["optimal_value"] = solve.primal_value;
  report.metrics["lp_gap"] = solve.gap;

  const ActionFamily family =
      generate_group({setup.rotation_action}, inst.marginals);
  const Plan averaged = average_plan_sigma(average_plan(plan, family));

  double invariance = 0.0;
  for (const auto& g : family.elements) {
    invariance =
        std::max(invariance, plan_l1_distance(pushforward(averaged, g), averaged));
  }
  invariance =
      std::max(invariance, plan_l1_distance(pushforward_sigma(averaged), averaged));
  const double cost_dev =
      std::abs(plan_cost(averaged, inst) - plan_cost(plan, inst));
  const double marginal_dev = marginal_residual(averaged, inst.marginals);
  report.metrics["plan_invariance_l1"] = invariance;
  report.metrics["cost_preservation"] = cost_dev;
  report.metrics["marginal_preservation"] = marginal_dev;

  const CommutingTrace trace =
      commuting_family_symmetrize(inst, pot, {setup.base.rotation});
  double equality = 0.0;
  for (int j = 1; j < n_marginals; ++j) {
    for (std::size_t i = 0; i < trace.potentials.vectors[j].size(); ++i) {
      equality = std::max(equality,
                          std::abs(trace.potentials.vectors[j][i] -
                                   trace.potentials.vectors[0][i]));
    }
  }
  const double orbit_dev = max_circle_deviation(trace.tightened, m);
  const double value_dev =
      std::abs(dual_value(trace.potentials, inst.marginals) - solve.dual_value);
  report.metrics["potential_equality"] = equality;
  report.metrics["orbit_constancy_deviation"] = orbit_dev;
  report.metrics["value_preservation"] = value_dev;
  report.metrics["fixed_point_residual"] = trace.fixed_point_residual;

  report.passed = solve.gap <= 1e-8 && invariance <= 1e-9 &&
                  cost_dev <= 1e-9 && marginal_dev <= 1e-10 &&
                  equality == 0.0 && orbit_dev == 0.0 && value_dev <= 1e-8 &&
                  trace.fixed_point_residual <= 1e-9;
  report.details = "plan averaged over the rotation group and the coordinate "
                   "shift; duals passed through the commuting-family "
                   "construction";
  return report;
}

}  // namespace mmot

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

#ifndef MMOT_APPS_HPP
#define MMOT_APPS_HPP

#include <map>
#include <string>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/group.hpp"
#include "mmot/measure.hpp"

namespace mmot {

// Planar measure supported on concentric circles: points_per_circle equally
// spaced, equally weighted points on each radius, plus the index permutation
// realizing a rotation by one angular step. Indexing is circle-major, so
// index c * m + k is the k-th angle on the c-th circle. When 4 divides m the
// quarter-turn images of every support point are themselves support points,
// stored as exact sign flips.
struct RadialInstance {
  std::vector<double> radii;
  int points_per_circle = 0;
  DiscreteMarginal marginal;
  MarginalMap rotation;
};

// A radial marginal replicated n times, with the rotation applied to every
// coordinate at once.
struct RadialSetup {
  RadialInstance base;
  std::vector<DiscreteMarginal> marginals;
  ProductAction rotation_action;
};

RadialSetup gen_radial_instance(const std::vector<double>& radii, int m,
                                int n_marginals);

// Outcome of one certified demo run. passed holds exactly when every
// deciding metric is within its tolerance; informational metrics (the
// uniqueness probe) never fail the report.
struct TheoremReport {
  std::string name;
  bool passed = false;
  std::map<std::string, double> metrics;
  std::string details;
};

// Largest deviation from constancy across each block of m consecutive
// entries (the circles of a radial instance).
double max_circle_deviation(const std::vector<double>& v, int m);

// Determinant-maximization demo on a radial instance with two marginals:
// solves the LP, certifies it against the explicit half-squared-norm
// potentials, checks the support geometry (orthogonal, positively oriented,
// equal-radius pairs) when 4 divides m, symmetrizes the duals under the
// rotation group, and probes uniqueness with a permuted solver run.
TheoremReport determinant_check(const std::vector<double>& radii, int m);

// Pairwise-repulsion demo on a radial instance with n marginals: solves the
// LP, averages the plan over the rotation group and the coordinate shift,
// and runs the commuting-family construction on the duals.
TheoremReport coulomb_check(const std::vector<double>& radii, int m,
                            int n_marginals);

}  // namespace mmot

#endif  // MMOT_APPS_HPP

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

#ifndef MMOT_SYMMETRIZE_HPP
#define MMOT_SYMMETRIZE_HPP

#include <vector>

#include "mmot/cost.hpp"
#include "mmot/group.hpp"
#include "mmot/plan.hpp"

namespace mmot {

// Tolerance for the cost-invariance and dual-feasibility gates. Symmetrizing
// against a cost that is not actually invariant produces meaningless output,
// so violations are errors rather than warnings.
inline constexpr double kInvarianceTol = 1e-9;

// Cap on the size of a single tuple orbit explored by average_plan. Orbits
// are bounded by the group order, so this only fires on hand-built families
// that bypass generate_group.
inline constexpr std::int64_t kPlanOrbitCap = 100000;

// Iteration cap for the damped fixed-point iteration used by the cyclic and
// commuting constructions. The iteration is monotone and bounded, so in
// practice it reaches floating-point stationarity far earlier.
inline constexpr int kMixIterationCap = 100000;

// Stage-by-stage record of the dual symmetrization pipeline. All potentials
// are in the original sense of the instance. Every stage is constant on the
// orbits of the family, bitwise: orbit values are computed once at the
// orbit's smallest index and replicated.
struct SymmetrizationTrace {
  Potentials averaged;    // orbit means of the input potentials
  Potentials conjugate;   // cost-conjugates of the averaged potentials
  Potentials mixed;       // feasible convex mix of averaged and conjugate
  Potentials tightened;   // final maximal potentials
  double fixed_point_residual = 0.0;
};

// Result of the sequential tightening sweep.
struct TightenResult {
  Potentials potentials;
  double fixed_point_residual = 0.0;
};

// Result of the cyclic single-potential construction. The n output
// potentials are literal compositions of one tightened vector with powers of
// the rotation, so potentials.vectors[j][i] == tightened[rotation^j(i)]
// holds bitwise.
struct CyclicTrace {
  std::vector<double> averaged;   // slot-1 potential before tightening
  std::vector<double> tightened;  // slot-1 potential after tightening
  Potentials potentials;          // tightened composed with rotation powers
  double fixed_point_residual = 0.0;
  int mix_iterations = 0;
};

// Result of the commuting-family construction: one potential, constant on
// the joint orbits of the generators, replicated across all marginals.
struct CommutingTrace {
  std::vector<double> tightened;
  Potentials potentials;
  double fixed_point_residual = 0.0;
  int mix_iterations = 0;
};

// Replaces each potential vector by its means over the orbits of the
// family's per-marginal actions. Pure arithmetic, sense-agnostic. Each orbit
// mean is accumulated in ascending index order and the single result is
// written to every orbit member, so the output is orbit-constant bitwise.
Potentials average_potentials(const Potentials& pot, const ActionFamily& family);

// Mean of the pushforwards of the plan over the whole family. Computed as
// orbit means over tuple orbits of the generators, which equals the group
// average exactly and makes the result invariant bitwise. Marginal
// preservation is inherited from the family's construction-time checks.
Plan average_plan(const Plan& plan, const ActionFamily& family);

// Mean of the pushforwards under the powers of the cyclic coordinate shift
// sigma(t_1,...,t_n) = (t_2,...,t_n,t_1). Requires all axes to have equal
// length.
Plan average_plan_sigma(const Plan& plan);

// Cost-conjugate of the potentials at marginal j: for each support point i,
// the minimum over all tuples through i of the min-form cost minus the other
// marginals' potentials. Expects and returns min-form values. Throws
// UnboundedConjugate when some support point lies on no finite-cost tuple.
std::vector<double> c_conjugate(const Instance& instance, const Potentials& pot,
                                int j);
std::vector<double> c_conjugate_serial(const Instance& instance,
                                       const Potentials& pot, int j);

// The convex mix (phi_c + (n-1)*phi)/n, componentwise. Requires
// phi <= phi_c up to kInvarianceTol; the mix of a feasible family with its
// conjugates is again feasible.
Potentials mix_v(const Potentials& phi, const Potentials& phi_c);

// Sequential maximal tightening: sweeping marginals in increasing order,
// each potential is raised to the largest value compatible with the already
// tightened predecessors and the mixed successors, capped by the conjugate.
// All potentials are min-form. Requires phi <= v <= phi_c and feasibility of
// v, up to kInvarianceTol.
TightenResult tighten_to_maximal(const Instance& instance, const Potentials& phi,
                                 const Potentials& phi_c, const Potentials& v);

// Self-consistency residual of a min-form dual family: the largest absolute
// difference, over marginals j and support points, between the potential and
// the cost-conjugate of the other marginals' potentials.
double fixed_point_residual(const Instance& instance, const Potentials& pot);

// Largest deviation |c(t) - c(shift(r t))| over all tuples, where r is
// applied to every coordinate and shift rotates the tuple cyclically. With r
// the identity this measures plain invariance under the coordinate shift.
double twisted_invariance_deviation(const Instance& instance,
                                    const MarginalMap& r);

// Full dual pipeline: orbit-average the potentials, conjugate, mix, tighten.
// Input potentials are in the instance's original sense and must be feasible
// (else InfeasibleInput); the cost must be invariant under every family
// element up to kInvarianceTol (else CostNotInvariant). The output stages
// are constant on the family's orbits bitwise.
SymmetrizationTrace symmetrize_dual(const Instance& instance,
                                    const Potentials& pot,
                                    const ActionFamily& family);

// Single-potential construction for a cost that is invariant under the
// cyclic shift twisted by a rotation r with r^n = id (else PeriodMismatch).
// Requires all marginals to share one support, with marginal j equal to the
// pushforward of marginal 1 by r^(n+1-j), and the twisted cost invariance,
// up to kInvarianceTol (else HypothesisViolated). Returns one tightened
// potential together with its compositions with the powers of r; the
// composed family's dual value is at least the input's.
CyclicTrace cyclic_construction(const Instance& instance, const Potentials& pot,
                                const MarginalMap& rotation);

// Construction for identical marginals and a shift-invariant cost with a
// family of pairwise commuting support maps, each preserving the marginal
// and leaving the cost invariant when applied to every coordinate at once.
// Equalizes the potentials, averages over the joint orbits of the
// generators, and re-tightens; the single output potential is constant on
// every generator's orbits bitwise.
CommutingTrace commuting_family_symmetrize(
    const Instance& instance, const Potentials& pot,
    const std::vector<MarginalMap>& generators);

}  // namespace mmot

#endif  // MMOT_SYMMETRIZE_HPP

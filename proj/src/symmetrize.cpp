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

#include "mmot/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>

#include "mmot/errors.hpp"
#include "mmot/parallel.hpp"
#include "slice.hpp"

namespace mmot {

namespace {

void check_potentials_shape(const Potentials& pot,
                            const std::vector<DiscreteMarginal>& marginals) {
  if (pot.arity() != static_cast<int>(marginals.size())) {
    throw MkError(Errc::DimensionMismatch,
                  "potentials have " + std::to_string(pot.arity()) +
                      " vectors for " + std::to_string(marginals.size()) +
                      " marginals");
  }
  for (int j = 0; j < pot.arity(); ++j) {
    if (pot.vectors[j].size() != static_cast<std::size_t>(marginals[j].size())) {
      throw MkError(Errc::DimensionMismatch,
                    "potential vector " + std::to_string(j) +
                        " does not match its marginal's support");
    }
    for (double v : pot.vectors[j]) {
      if (!std::isfinite(v)) {
        throw MkError(Errc::InvalidInput, "potentials must be finite");
      }
    }
  }
}

std::vector<const std::vector<double>*> pointer_view(const Potentials& pot) {
  std::vector<const std::vector<double>*> out;
  out.reserve(pot.vectors.size());
  for (const auto& v : pot.vectors) out.push_back(&v);
  return out;
}

// Mean per orbit, accumulated in ascending index order and written back to
// every member, so equal inputs produce bitwise equal outputs on each orbit.
std::vector<double> orbit_means(const std::vector<double>& v,
                                const std::vector<std::vector<int>>& partition) {
  std::vector<double> out(v.size());
  for (const auto& orb : partition) {
    double sum = 0.0;
    for (int i : orb) sum += v[i];
    const double mean = sum / static_cast<double>(orb.size());
    for (int i : orb) out[i] = mean;
  }
  return out;
}

// Minimum over the slice through (j, i) of the min-form cost minus the other
// marginals' potentials. Returns +inf when the slice has no finite cell; the
// caller decides whether that is an error.
double conjugate_at(const CostView& view,
                    const std::vector<const std::vector<double>*>& others,
                    int j, int i) {
  const int n = view.space().arity();
  double best = kInf;
  for_each_in_slice(view.space(), j, i, [&](std::int64_t idx, const int* tup) {
    const double cv = view.value(idx);
    if (cv == kInf) return;
    double s = cv;
    for (int k = 0; k < n; ++k) {
      if (k != j) s -= (*others[k])[tup[k]];
    }
    if (s < best) best = s;
  });
  return best;
}

std::vector<double> conjugate_vector(
    const CostView& view, const std::vector<const std::vector<double>*>& others,
    int j, bool parallel) {
  const int mj = view.space().sizes[j];
  std::vector<double> out(mj);
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int i = 0; i < mj; ++i) out[i] = conjugate_at(view, others, j, i);
  } else {
    for (int i = 0; i < mj; ++i) out[i] = conjugate_at(view, others, j, i);
  }
  return out;
}

// Conjugation evaluated once per orbit at the smallest member and replicated,
// which pins the output to be orbit-constant bitwise.
std::vector<double> conjugate_on_orbits(
    const CostView& view, const std::vector<const std::vector<double>*>& others,
    int j, const std::vector<std::vector<int>>& partition) {
  std::vector<double> out(view.space().sizes[j]);
  const int norb = static_cast<int>(partition.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (int o = 0; o < norb; ++o) {
    const double v = conjugate_at(view, others, j, partition[o].front());
    for (int i : partition[o]) out[i] = v;
  }
  return out;
}

double residual_against_conjugates(const CostView& view, const Potentials& pot,
                                   bool parallel) {
  const auto others = pointer_view(pot);
  double worst = 0.0;
  for (int j = 0; j < pot.arity(); ++j) {
    const auto conj = conjugate_vector(view, others, j, parallel);
    for (std::size_t i = 0; i < conj.size(); ++i) {
      const double d = conj[i] == kInf ? kInf : std::abs(pot.vectors[j][i] - conj[i]);
      if (d > worst) worst = d;
    }
  }
  return worst;
}

std::vector<double> scale_vector(const std::vector<double>& v, double sign) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = sign * v[i];
  return out;
}

// Slot-1 conjugation twisted by the rotation powers:
//   T(w)(x) = min over tuples t with t_1 = x of
//             [c~(t) - sum_{p=2..n} w(r^{p-1} t_p)].
double twisted_conjugate_at(const CostView& view,
                            const std::vector<std::vector<int>>& rpow,
                            const std::vector<double>& w, int i) {
  const int n = view.space().arity();
  double best = kInf;
  for_each_in_slice(view.space(), 0, i, [&](std::int64_t idx, const int* tup) {
    const double cv = view.value(idx);
    if (cv == kInf) return;
    double s = cv;
    for (int p = 1; p < n; ++p) s -= w[rpow[p][tup[p]]];
    if (s < best) best = s;
  });
  return best;
}

std::vector<double> twisted_apply(
    const CostView& view, const std::vector<std::vector<int>>& rpow,
    const std::vector<double>& w,
    const std::vector<std::vector<int>>* partition) {
  const int m = view.space().sizes[0];
  std::vector<double> out(m);
  if (partition == nullptr) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int i = 0; i < m; ++i) out[i] = twisted_conjugate_at(view, rpow, w, i);
  } else {
    const int norb = static_cast<int>(partition->size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int o = 0; o < norb; ++o) {
      const auto& orb = (*partition)[o];
      const double v = twisted_conjugate_at(view, rpow, w, orb.front());
      for (int i : orb) out[i] = v;
    }
  }
  return out;
}

struct MixState {
  std::vector<double> w;
  int iterations = 0;
};

// Damped fixed-point iteration w <- (T(w) + (n-1) w) / n. Starting from a
// ladder-feasible w the sequence is nondecreasing and bounded, so it reaches
// floating-point stationarity; the tolerance only shortcuts the tail.
MixState mix_iterate(const CostView& view,
                     const std::vector<std::vector<int>>& rpow,
                     std::vector<double> w,
                     const std::vector<std::vector<int>>* partition) {
  const double n = static_cast<double>(view.space().arity());
  MixState state;
  while (state.iterations < kMixIterationCap) {
    const std::vector<double> tw = twisted_apply(view, rpow, w, partition);
    for (double v : tw) {
      if (v == kInf) {
        throw MkError(Errc::UnboundedConjugate,
                      "a support point lies on no finite-cost tuple");
      }
    }
    double delta = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double next = (tw[i] + (n - 1.0) * w[i]) / n;
      delta = std::max(delta, std::abs(next - w[i]));
      scale = std::max(scale, std::abs(next));
      w[i] = next;
    }
    ++state.iterations;
    if (delta <= 1e-12 * scale) break;
  }
  state.w = std::move(w);
  return state;
}

std::vector<std::vector<int>> rotation_powers(const MarginalMap& rotation,
                                              int n) {
  const int m = rotation.size();
  std::vector<std::vector<int>> rpow(n);
  rpow[0].resize(m);
  for (int i = 0; i < m; ++i) rpow[0][i] = i;
  for (int p = 1; p < n; ++p) {
    rpow[p].resize(m);
    for (int i = 0; i < m; ++i) rpow[p][i] = rotation.perm[rpow[p - 1][i]];
  }
  return rpow;
}

void check_permutation(const MarginalMap& map, int size) {
  if (map.size() != size) {
    throw MkError(Errc::DimensionMismatch,
                  "map acts on " + std::to_string(map.size()) +
                      " indices, support has " + std::to_string(size));
  }
  std::vector<char> seen(size, 0);
  for (int i : map.perm) {
    if (i < 0 || i >= size || seen[i]) {
      throw MkError(Errc::InvalidInput, "map is not a permutation");
    }
    seen[i] = 1;
  }
}

double max_deviation_pair(double a, double b) {
  if (a == kInf && b == kInf) return 0.0;
  if (a == kInf || b == kInf) return kInf;
  return std::abs(a - b);
}

// Largest |c(t) - c(shift(r t))| over the product space, walked slice by
// slice along the first axis.
double twisted_deviation(const CostView& view, const std::vector<int>& rperm) {
  const IndexSpace& space = view.space();
  const int n = space.arity();
  const int m0 = space.sizes[0];
  double dev = 0.0;
#pragma omp parallel for schedule(static) reduction(max : dev) \
    num_threads(thread_count())
  for (int i = 0; i < m0; ++i) {
    double local = 0.0;
    for_each_in_slice(space, 0, i, [&](std::int64_t idx, const int* tup) {
      std::int64_t img = 0;
      for (int k = 0; k < n; ++k) {
        img += space.strides[k] * rperm[tup[(k + 1) % n]];
      }
      local = std::max(local, max_deviation_pair(view.value(idx), view.value(img)));
    });
    dev = std::max(dev, local);
  }
  return dev;
}

void require_equal_supports(const std::vector<DiscreteMarginal>& marginals,
                            Errc code, bool require_weights) {
  const DiscreteMarginal& first = marginals.front();
  for (const auto& m : marginals) {
    if (m.size() != first.size() || m.points != first.points) {
      throw MkError(code, "marginals must share one support");
    }
    if (require_weights && m.weights != first.weights) {
      throw MkError(code, "marginals must carry identical weights");
    }
  }
}

std::vector<std::vector<int>> identity_powers(int n, int m) {
  std::vector<int> id(m);
  for (int i = 0; i < m; ++i) id[i] = i;
  return std::vector<std::vector<int>>(n, id);
}

}  // namespace

Potentials average_potentials(const Potentials& pot, const ActionFamily& family) {
  Potentials out = pot;
  if (family.generators.empty()) return out;
  const int n = pot.arity();
  for (const auto& g : family.generators) {
    if (g.arity() != n) {
      throw MkError(Errc::DimensionMismatch,
                    "family arity does not match the potentials");
    }
    for (int j = 0; j < n; ++j) {
      if (g.maps[j].size() != static_cast<int>(pot.vectors[j].size())) {
        throw MkError(Errc::DimensionMismatch,
                      "family maps do not match the potential supports");
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    std::vector<MarginalMap> maps;
    maps.reserve(family.generators.size());
    for (const auto& g : family.generators) maps.push_back(g.maps[j]);
    const auto partition =
        joint_orbits(maps, static_cast<int>(pot.vectors[j].size()));
    out.vectors[j] = orbit_means(pot.vectors[j], partition);
  }
  return out;
}

Plan average_plan(const Plan& plan, const ActionFamily& family) {
  if (family.generators.empty()) return plan;
  const int n = static_cast<int>(plan.sizes.size());
  for (const auto& g : family.generators) {
    if (g.arity() != n) {
      throw MkError(Errc::DimensionMismatch,
                    "family arity does not match the plan");
    }
    for (int j = 0; j < n; ++j) {
      if (g.maps[j].size() != plan.sizes[j]) {
        throw MkError(Errc::DimensionMismatch,
                      "family maps do not match the plan axes");
      }
    }
  }
  const IndexSpace space = make_index_space(plan.sizes);
  Plan out;
  out.sizes = plan.sizes;
  std::set<std::int64_t> assigned;
  for (const auto& [start, unused] : plan.entries) {
    (void)unused;
    if (assigned.count(start) != 0) continue;
    // Tuple orbit under the generators; forward closure suffices because
    // every generator has finite order.
    std::set<std::int64_t> orbit{start};
    std::vector<std::int64_t> stack{start};
    while (!stack.empty()) {
      const std::int64_t cur = stack.back();
      stack.pop_back();
      for (const auto& g : family.generators) {
        const std::int64_t img = apply_action(g, space, cur);
        if (orbit.insert(img).second) {
          if (static_cast<std::int64_t>(orbit.size()) > kPlanOrbitCap) {
            throw MkError(Errc::GroupTooLarge,
                          "tuple orbit exceeds " + std::to_string(kPlanOrbitCap));
          }
          stack.push_back(img);
        }
      }
    }
    double total = 0.0;
    for (std::int64_t s : orbit) {
      const auto it = plan.entries.find(s);
      if (it != plan.entries.end()) total += it->second;
      assigned.insert(s);
    }
    const double mean = total / static_cast<double>(orbit.size());
    if (mean > 0.0) {
      for (std::int64_t s : orbit) out.entries[s] = mean;
    }
  }
  return out;
}

Plan average_plan_sigma(const Plan& plan) {
  for (int s : plan.sizes) {
    if (s != plan.sizes[0]) {
      throw MkError(Errc::MarginalsNotIdentical,
                    "the coordinate shift needs equal axis lengths");
    }
  }
  const IndexSpace space = make_index_space(plan.sizes);
  Plan out;
  out.sizes = plan.sizes;
  std::set<std::int64_t> assigned;
  for (const auto& [start, unused] : plan.entries) {
    (void)unused;
    if (assigned.count(start) != 0) continue;
    std::set<std::int64_t> orbit;
    std::int64_t cur = start;
    do {
      orbit.insert(cur);
      cur = sigma_shift(space, cur);
    } while (cur != start);
    double total = 0.0;
    for (std::int64_t s : orbit) {
      const auto it = plan.entries.find(s);
      if (it != plan.entries.end()) total += it->second;
      assigned.insert(s);
    }
    const double mean = total / static_cast<double>(orbit.size());
    if (mean > 0.0) {
      for (std::int64_t s : orbit) out.entries[s] = mean;
    }
  }
  return out;
}

std::vector<double> c_conjugate(const Instance& instance, const Potentials& pot,
                                int j) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(pot, inst.marginals);
  if (j < 0 || j >= inst.arity()) {
    throw MkError(Errc::InvalidInput, "marginal index out of range");
  }
  const CostView view(inst);
  const auto out = conjugate_vector(view, pointer_view(pot), j, true);
  for (double v : out) {
    if (v == kInf) {
      throw MkError(Errc::UnboundedConjugate,
                    "a support point of marginal " + std::to_string(j) +
                        " lies on no finite-cost tuple");
    }
  }
  return out;
}

std::vector<double> c_conjugate_serial(const Instance& instance,
                                       const Potentials& pot, int j) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(pot, inst.marginals);
  if (j < 0 || j >= inst.arity()) {
    throw MkError(Errc::InvalidInput, "marginal index out of range");
  }
  const CostView view(inst);
  const auto out = conjugate_vector(view, pointer_view(pot), j, false);
  for (double v : out) {
    if (v == kInf) {
      throw MkError(Errc::UnboundedConjugate,
                    "a support point of marginal " + std::to_string(j) +
                        " lies on no finite-cost tuple");
    }
  }
  return out;
}

Potentials mix_v(const Potentials& phi, const Potentials& phi_c) {
  const int n = phi.arity();
  if (phi_c.arity() != n) {
    throw MkError(Errc::DimensionMismatch, "mismatched potential arities");
  }
  Potentials out;
  out.vectors.resize(n);
  const double nn = static_cast<double>(n);
  for (int j = 0; j < n; ++j) {
    if (phi.vectors[j].size() != phi_c.vectors[j].size()) {
      throw MkError(Errc::DimensionMismatch, "mismatched potential lengths");
    }
    out.vectors[j].resize(phi.vectors[j].size());
    for (std::size_t i = 0; i < phi.vectors[j].size(); ++i) {
      const double lo = phi.vectors[j][i];
      const double hi = phi_c.vectors[j][i];
      if (lo > hi + kInvarianceTol) {
        throw MkError(Errc::OrderViolated,
                      "lower potential exceeds its conjugate");
      }
      out.vectors[j][i] = (hi + (nn - 1.0) * lo) / nn;
    }
  }
  return out;
}

TightenResult tighten_to_maximal(const Instance& instance, const Potentials& phi,
                                 const Potentials& phi_c, const Potentials& v) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(phi, inst.marginals);
  check_potentials_shape(phi_c, inst.marginals);
  check_potentials_shape(v, inst.marginals);
  const int n = inst.arity();
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < v.vectors[j].size(); ++i) {
      if (phi.vectors[j][i] > v.vectors[j][i] + kInvarianceTol ||
          v.vectors[j][i] > phi_c.vectors[j][i] + kInvarianceTol) {
        throw MkError(Errc::OrderViolated,
                      "potentials are not ordered lower <= mix <= conjugate");
      }
    }
  }
  const CostView view(inst);
  if (feasibility_violation(v, view) > kInvarianceTol) {
    throw MkError(Errc::OrderViolated, "mixed potentials are not feasible");
  }
  TightenResult result;
  result.potentials = v;
  for (int j = 0; j < n; ++j) {
    const auto conj =
        conjugate_vector(view, pointer_view(result.potentials), j, true);
    for (std::size_t i = 0; i < conj.size(); ++i) {
      result.potentials.vectors[j][i] = std::min(phi_c.vectors[j][i], conj[i]);
    }
  }
  result.fixed_point_residual =
      residual_against_conjugates(view, result.potentials, true);
  return result;
}

double fixed_point_residual(const Instance& instance, const Potentials& pot) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(pot, inst.marginals);
  const CostView view(inst);
  return residual_against_conjugates(view, pot, true);
}

double twisted_invariance_deviation(const Instance& instance,
                                    const MarginalMap& r) {
  const Instance inst = validate_instance(instance);
  for (const auto& m : inst.marginals) {
    if (m.size() != inst.marginals.front().size()) {
      throw MkError(Errc::DimensionMismatch,
                    "the twisted shift needs equal support sizes");
    }
  }
  check_permutation(r, inst.marginals.front().size());
  const CostView view(inst);
  return twisted_deviation(view, r.perm);
}

SymmetrizationTrace symmetrize_dual(const Instance& instance,
                                    const Potentials& pot,
                                    const ActionFamily& family) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(pot, inst.marginals);
  for (const auto& g : family.generators) validate_action(g, inst.marginals);
  const std::vector<ProductAction>& gate =
      family.elements.empty() ? family.generators : family.elements;
  for (const auto& g : gate) {
    if (check_cost_invariance(inst, g) > kInvarianceTol) {
      throw MkError(Errc::CostNotInvariant,
                    "cost is not invariant under the family");
    }
  }
  const CostView view(inst);
  const Potentials pmin = to_min_form(pot, view);
  if (feasibility_violation(pmin, view) > kInvarianceTol) {
    throw MkError(Errc::InfeasibleInput, "input potentials are not feasible");
  }
  const auto partitions = family_orbit_partitions(family, inst.marginals);
  const int n = inst.arity();

  Potentials phi = pmin;
  for (int j = 0; j < n; ++j) {
    phi.vectors[j] = orbit_means(pmin.vectors[j], partitions[j]);
  }

  Potentials phi_c;
  phi_c.vectors.resize(n);
  {
    const auto others = pointer_view(phi);
    for (int j = 0; j < n; ++j) {
      phi_c.vectors[j] = conjugate_on_orbits(view, others, j, partitions[j]);
      for (double val : phi_c.vectors[j]) {
        if (val == kInf) {
          throw MkError(Errc::UnboundedConjugate,
                        "a support point lies on no finite-cost tuple");
        }
      }
    }
  }

  const Potentials v = mix_v(phi, phi_c);

  Potentials psi = v;
  for (int j = 0; j < n; ++j) {
    const auto conj =
        conjugate_on_orbits(view, pointer_view(psi), j, partitions[j]);
    for (std::size_t i = 0; i < conj.size(); ++i) {
      psi.vectors[j][i] = std::min(phi_c.vectors[j][i], conj[i]);
    }
  }

  SymmetrizationTrace trace;
  trace.fixed_point_residual = residual_against_conjugates(view, psi, true);
  trace.averaged = to_original_sense(phi, view);
  trace.conjugate = to_original_sense(phi_c, view);
  trace.mixed = to_original_sense(v, view);
  trace.tightened = to_original_sense(psi, view);
  return trace;
}

CyclicTrace cyclic_construction(const Instance& instance, const Potentials& pot,
                                const MarginalMap& rotation) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(pot, inst.marginals);
  const int n = inst.arity();
  require_equal_supports(inst.marginals, Errc::HypothesisViolated, false);
  const int m = inst.marginals.front().size();
  check_permutation(rotation, m);

  const auto rpow = rotation_powers(rotation, n);
  for (int i = 0; i < m; ++i) {
    if (rotation.perm[rpow[n - 1][i]] != i) {
      throw MkError(Errc::PeriodMismatch,
                    "rotation power " + std::to_string(n) +
                        " is not the identity");
    }
  }
  // Marginal j must be the pushforward of marginal 1 by rotation^(n+1-j).
  for (int jj = 1; jj < n; ++jj) {
    const auto& w0 = inst.marginals[0].weights;
    const auto& wj = inst.marginals[jj].weights;
    const auto& power = rpow[(n - jj) % n];
    for (int i = 0; i < m; ++i) {
      if (std::abs(wj[power[i]] - w0[i]) > 1e-12) {
        throw MkError(Errc::HypothesisViolated,
                      "marginal " + std::to_string(jj + 1) +
                          " is not the required rotation image of marginal 1");
      }
    }
  }
  const CostView view(inst);
  if (twisted_deviation(view, rotation.perm) > kInvarianceTol) {
    throw MkError(Errc::HypothesisViolated,
                  "cost is not invariant under the twisted shift");
  }
  const Potentials pmin = to_min_form(pot, view);
  if (feasibility_violation(pmin, view) > kInvarianceTol) {
    throw MkError(Errc::InfeasibleInput, "input potentials are not feasible");
  }

  // Slot-1 average of the inputs pulled into a common frame: the mean over k
  // of potential k composed with rotation^(n-k), ladder-feasible by
  // construction.
  std::vector<double> base(m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int kk = 0; kk < n; ++kk) {
      acc += pmin.vectors[kk][rpow[(n - kk) % n][i]];
    }
    base[i] = acc / static_cast<double>(n);
  }

  MixState mixed = mix_iterate(view, rpow, base, nullptr);

  Potentials omin;
  omin.vectors.resize(n);
  for (int jj = 0; jj < n; ++jj) {
    omin.vectors[jj].resize(m);
    for (int i = 0; i < m; ++i) omin.vectors[jj][i] = mixed.w[rpow[jj][i]];
  }

  CyclicTrace trace;
  trace.fixed_point_residual = residual_against_conjugates(view, omin, true);
  trace.averaged = scale_vector(base, view.sign());
  trace.tightened = scale_vector(mixed.w, view.sign());
  trace.potentials = to_original_sense(omin, view);
  trace.mix_iterations = mixed.iterations;
  return trace;
}

CommutingTrace commuting_family_symmetrize(
    const Instance& instance, const Potentials& pot,
    const std::vector<MarginalMap>& generators) {
  const Instance inst = validate_instance(instance);
  check_potentials_shape(pot, inst.marginals);
  const int n = inst.arity();
  require_equal_supports(inst.marginals, Errc::MarginalsNotIdentical, true);
  const int m = inst.marginals.front().size();
  for (const auto& g : generators) {
    check_permutation(g, m);
    validate_map(g, inst.marginals.front());
  }
  for (std::size_t a = 0; a < generators.size(); ++a) {
    for (std::size_t b = a + 1; b < generators.size(); ++b) {
      if (!maps_equal(compose(generators[a], generators[b]),
                      compose(generators[b], generators[a]))) {
        throw MkError(Errc::NotCommuting, "generators do not commute");
      }
    }
  }
  const CostView view(inst);
  {
    std::vector<int> id(m);
    for (int i = 0; i < m; ++i) id[i] = i;
    if (twisted_deviation(view, id) > kInvarianceTol) {
      throw MkError(Errc::CostNotInvariant,
                    "cost is not invariant under the coordinate shift");
    }
  }
  for (const auto& g : generators) {
    ProductAction simultaneous;
    simultaneous.maps.assign(n, g);
    if (check_cost_invariance(inst, simultaneous) > kInvarianceTol) {
      throw MkError(Errc::CostNotInvariant,
                    "cost is not invariant under a generator applied to "
                    "every coordinate");
    }
  }
  const Potentials pmin = to_min_form(pot, view);
  if (feasibility_violation(pmin, view) > kInvarianceTol) {
    throw MkError(Errc::InfeasibleInput, "input potentials are not feasible");
  }

  const auto idpow = identity_powers(n, m);

  // First equalize the potentials across marginals, then average over the
  // joint orbits of the generators, then re-tighten on orbit representatives
  // so the result is orbit-constant bitwise.
  std::vector<double> start(m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int kk = 0; kk < n; ++kk) acc += pmin.vectors[kk][i];
    start[i] = acc / static_cast<double>(n);
  }
  const MixState equalized = mix_iterate(view, idpow, std::move(start), nullptr);

  const auto partition = joint_orbits(generators, m);
  std::vector<double> averaged = orbit_means(equalized.w, partition);

  const MixState tightened =
      mix_iterate(view, idpow, std::move(averaged), &partition);

  Potentials omin;
  omin.vectors.assign(n, tightened.w);

  CommutingTrace trace;
  trace.fixed_point_residual = residual_against_conjugates(view, omin, true);
  trace.tightened = scale_vector(tightened.w, view.sign());
  trace.potentials = to_original_sense(omin, view);
  trace.mix_iterations = equalized.iterations + tightened.iterations;
  return trace;
}

}  // namespace mmot

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

#include "mmot/plan.hpp"

#include <algorithm>
#include <cmath>

#include "mmot/errors.hpp"
#include "mmot/parallel.hpp"

namespace mmot {

double Plan::total_mass() const {
  double sum = 0.0;
  for (const auto& [idx, mass] : entries) sum += mass;
  return sum;
}

std::vector<std::vector<double>> marginal_sums(const Plan& plan) {
  const IndexSpace space = make_index_space(plan.sizes);
  std::vector<std::vector<double>> sums(plan.sizes.size());
  for (std::size_t j = 0; j < plan.sizes.size(); ++j) {
    sums[j].assign(plan.sizes[j], 0.0);
  }
  for (const auto& [idx, mass] : plan.entries) {
    std::int64_t rest = idx;
    for (std::size_t j = 0; j < plan.sizes.size(); ++j) {
      const int i = static_cast<int>(rest / space.strides[j]);
      rest -= space.strides[j] * i;
      sums[j][i] += mass;
    }
  }
  return sums;
}

double marginal_residual(const Plan& plan,
                         const std::vector<DiscreteMarginal>& marginals) {
  const auto sums = marginal_sums(plan);
  double residual = 0.0;
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    for (int i = 0; i < marginals[j].size(); ++i) {
      residual = std::max(residual,
                          std::abs(sums[j][i] - marginals[j].weights[i]));
    }
  }
  return residual;
}

double plan_cost(const Plan& plan, const Instance& instance) {
  const IndexSpace space = make_index_space(instance.marginals);
  double total = 0.0;
  for (const auto& [idx, mass] : plan.entries) {
    total += mass * cell_cost(instance, space, idx);
  }
  return total;
}

double plan_l1_distance(const Plan& a, const Plan& b) {
  double dist = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() || ib != b.entries.end()) {
    if (ib == b.entries.end() ||
        (ia != a.entries.end() && ia->first < ib->first)) {
      dist += std::abs(ia->second);
      ++ia;
    } else if (ia == a.entries.end() || ib->first < ia->first) {
      dist += std::abs(ib->second);
      ++ib;
    } else {
      dist += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return dist;
}

Plan pushforward(const Plan& plan, const ProductAction& action) {
  const IndexSpace space = make_index_space(plan.sizes);
  Plan out;
  out.sizes = plan.sizes;
  for (const auto& [idx, mass] : plan.entries) {
    out.entries[apply_action(action, space, idx)] += mass;
  }
  return out;
}

std::int64_t sigma_shift(const IndexSpace& space, std::int64_t linear) {
  const int n = space.arity();
  int tuple[64];
  for (int j = 0; j < n; ++j) {
    tuple[j] = static_cast<int>(linear / space.strides[j]);
    linear -= space.strides[j] * tuple[j];
  }
  std::int64_t out = 0;
  for (int j = 0; j < n; ++j) {
    out += space.strides[j] * tuple[(j + 1) % n];
  }
  return out;
}

Plan pushforward_sigma(const Plan& plan) {
  for (int s : plan.sizes) {
    if (s != plan.sizes.front()) {
      throw MkError(Errc::MarginalsNotIdentical,
                    "coordinate rotation needs equal support sizes");
    }
  }
  const IndexSpace space = make_index_space(plan.sizes);
  Plan out;
  out.sizes = plan.sizes;
  for (const auto& [idx, mass] : plan.entries) {
    out.entries[sigma_shift(space, idx)] += mass;
  }
  return out;
}

double dual_value(const Potentials& potentials,
                  const std::vector<DiscreteMarginal>& marginals) {
  double total = 0.0;
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    double part = 0.0;
    for (int i = 0; i < marginals[j].size(); ++i) {
      part += marginals[j].weights[i] * potentials.vectors[j][i];
    }
    total += part;
  }
  return total;
}

Potentials normalize_potentials(Potentials potentials,
                                const std::vector<DiscreteMarginal>& marginals) {
  double carried = 0.0;
  for (std::size_t j = 1; j < marginals.size(); ++j) {
    double mean = 0.0;
    for (int i = 0; i < marginals[j].size(); ++i) {
      mean += marginals[j].weights[i] * potentials.vectors[j][i];
    }
    for (double& v : potentials.vectors[j]) v -= mean;
    carried += mean;
  }
  for (double& v : potentials.vectors[0]) v += carried;
  return potentials;
}

double feasibility_violation(const Potentials& min_form, const CostView& view) {
  const IndexSpace& space = view.space();
  const std::int64_t total = space.total;
  const int n = space.arity();
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst) \
    num_threads(thread_count())
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const double c = view.value(idx);
    if (c == kInf) continue;
    std::int64_t rest = idx;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const int i = static_cast<int>(rest / space.strides[j]);
      rest -= space.strides[j] * i;
      sum += min_form.vectors[j][i];
    }
    worst = std::max(worst, sum - c);
  }
  return std::max(worst, 0.0);
}

Potentials to_min_form(const Potentials& original, const CostView& view) {
  if (view.sign() > 0.0) return original;
  Potentials out = original;
  for (auto& vec : out.vectors) {
    for (double& v : vec) v = -v;
  }
  return out;
}

Potentials to_original_sense(const Potentials& min_form, const CostView& view) {
  return to_min_form(min_form, view);  // negation is an involution
}

}  // namespace mmot

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

#include "mmot/cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "mmot/errors.hpp"
#include "mmot/parallel.hpp"

namespace mmot {

namespace {

constexpr int kMaxArity = 64;

double det_small(const double* m, int d) {
  // Row-major d x d, exact cofactor expansion.
  switch (d) {
    case 1:
      return m[0];
    case 2:
      return m[0] * m[3] - m[1] * m[2];
    case 3:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) -
             m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
    default:
      return 0.0;
  }
}

double det_lu(std::vector<double> m, int d) {
  double det = 1.0;
  for (int k = 0; k < d; ++k) {
    int pivot = k;
    for (int r = k + 1; r < d; ++r) {
      if (std::abs(m[r * d + k]) > std::abs(m[pivot * d + k])) pivot = r;
    }
    if (m[pivot * d + k] == 0.0) return 0.0;
    if (pivot != k) {
      for (int c = 0; c < d; ++c) std::swap(m[k * d + c], m[pivot * d + c]);
      det = -det;
    }
    det *= m[k * d + k];
    for (int r = k + 1; r < d; ++r) {
      const double f = m[r * d + k] / m[k * d + k];
      for (int c = k; c < d; ++c) m[r * d + c] -= f * m[k * d + c];
    }
  }
  return det;
}

double determinant_cost(const double* const* columns, int d) {
  if (d <= 3) {
    double m[9];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) m[r * d + c] = columns[c][r];
    }
    return det_small(m, d);
  }
  std::vector<double> m(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m[r * d + c] = columns[c][r];
  }
  return det_lu(std::move(m), d);
}

double coulomb_cost(const double* const* points, int n, int d) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool same = true;
      double sq = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = points[i][k] - points[j][k];
        same = same && points[i][k] == points[j][k];
        sq += diff * diff;
      }
      if (same) return kInf;
      total += 2.0 / std::sqrt(sq);
    }
  }
  return total;
}

}  // namespace

double eval_cost(const CostSpec& spec,
                 const std::vector<std::vector<double>>& tuple) {
  const int n = static_cast<int>(tuple.size());
  if (n == 0) throw MkError(Errc::DimensionMismatch, "empty tuple");
  const int d = static_cast<int>(tuple.front().size());
  const double* cols[kMaxArity];
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(tuple[i].size()) != d) {
      throw MkError(Errc::DimensionMismatch,
                    "tuple points of different dimension");
    }
    cols[i] = tuple[i].data();
  }
  switch (spec.kind) {
    case CostKind::Determinant:
      if (d != n) {
        throw MkError(Errc::DimensionMismatch,
                      "determinant cost needs point dimension equal to the "
                      "number of marginals");
      }
      return determinant_cost(cols, d);
    case CostKind::Coulomb:
      if (n < 2) {
        throw MkError(Errc::DimensionMismatch,
                      "pairwise cost needs at least two marginals");
      }
      return coulomb_cost(cols, n, d);
    case CostKind::ExplicitTable:
      throw MkError(Errc::InvalidInput,
                    "table costs are addressed by index, not by points");
  }
  return 0.0;
}

Instance validate_instance(Instance instance) {
  if (instance.marginals.size() < 2) {
    throw MkError(Errc::InvalidInput, "need at least two marginals");
  }
  if (instance.arity() > kMaxArity) {
    throw MkError(Errc::TooLarge, "more than " + std::to_string(kMaxArity) +
                                      " marginals are not supported");
  }
  for (auto& m : instance.marginals) m = validate_marginal(std::move(m));
  const std::int64_t total = product_size(instance.marginals);
  const int n = instance.arity();

  switch (instance.cost.kind) {
    case CostKind::ExplicitTable: {
      if (static_cast<std::int64_t>(instance.cost.values.size()) != total) {
        throw MkError(Errc::DimensionMismatch,
                      "cost table has " +
                          std::to_string(instance.cost.values.size()) +
                          " values for a product space of size " +
                          std::to_string(total));
      }
      for (double v : instance.cost.values) {
        if (std::isnan(v) || v == -kInf) {
          throw MkError(Errc::InvalidInput,
                        "cost table values must be finite or +inf");
        }
        if (v == kInf && instance.cost.sense == Sense::Max) {
          throw MkError(Errc::InvalidInput,
                        "+inf cells are not meaningful under max sense");
        }
      }
      break;
    }
    case CostKind::Determinant: {
      for (const auto& m : instance.marginals) {
        if (m.dimension() != n) {
          throw MkError(Errc::DimensionMismatch,
                        "determinant cost needs point dimension " +
                            std::to_string(n) + ", marginal '" + m.label +
                            "' has dimension " +
                            std::to_string(m.dimension()));
        }
      }
      break;
    }
    case CostKind::Coulomb: {
      const int d = instance.marginals.front().dimension();
      for (const auto& m : instance.marginals) {
        if (m.dimension() != d) {
          throw MkError(Errc::DimensionMismatch,
                        "pairwise cost needs a common point dimension");
        }
      }
      break;
    }
  }
  return instance;
}

double cell_cost(const Instance& instance, const IndexSpace& space,
                 std::int64_t linear) {
  if (instance.cost.kind == CostKind::ExplicitTable) {
    return instance.cost.values[linear];
  }
  const int n = space.arity();
  const double* cols[kMaxArity];
  for (int j = 0; j < n; ++j) {
    const int i = static_cast<int>(linear / space.strides[j]);
    linear -= space.strides[j] * i;
    cols[j] = instance.marginals[j].points[i].data();
  }
  const int d = instance.marginals.front().dimension();
  if (instance.cost.kind == CostKind::Determinant) {
    return determinant_cost(cols, d);
  }
  return coulomb_cost(cols, n, d);
}

std::vector<double> materialize_tensor_serial(const Instance& instance) {
  const IndexSpace space = make_index_space(instance.marginals);
  if (space.total > kMaterializeCap) {
    throw MkError(Errc::TooLarge,
                  "product space of size " + std::to_string(space.total) +
                      " exceeds the materialization cap");
  }
  std::vector<double> out(space.total);
  for (std::int64_t idx = 0; idx < space.total; ++idx) {
    out[idx] = cell_cost(instance, space, idx);
  }
  return out;
}

std::vector<double> materialize_tensor(const Instance& instance) {
  const IndexSpace space = make_index_space(instance.marginals);
  if (space.total > kMaterializeCap) {
    throw MkError(Errc::TooLarge,
                  "product space of size " + std::to_string(space.total) +
                      " exceeds the materialization cap");
  }
  std::vector<double> out(space.total);
  const std::int64_t total = space.total;
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::int64_t idx = 0; idx < total; ++idx) {
    out[idx] = cell_cost(instance, space, idx);
  }
  return out;
}

double check_cost_invariance(const Instance& instance,
                             const ProductAction& action) {
  validate_action(action, instance.marginals);
  const IndexSpace space = make_index_space(instance.marginals);
  const std::vector<double> table = materialize_tensor(instance);
  const std::int64_t total = space.total;
  double deviation = 0.0;
#pragma omp parallel for schedule(static) reduction(max : deviation) \
    num_threads(thread_count())
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const double a = table[idx];
    const double b = table[apply_action(action, space, idx)];
    double d;
    if (a == kInf && b == kInf) {
      d = 0.0;  // forbidden cells mapping to forbidden cells count as equal
    } else if (a == kInf || b == kInf) {
      d = kInf;
    } else {
      d = std::abs(a - b);
    }
    deviation = std::max(deviation, d);
  }
  return deviation;
}

CostView::CostView(const Instance& instance)
    : instance_(&instance),
      space_(make_index_space(instance.marginals)),
      sense_sign_(instance.cost.sense == Sense::Max ? -1.0 : 1.0) {
  if (space_.total <= kMaterializeCap) {
    table_ = materialize_tensor(instance);
    if (sense_sign_ < 0.0) {
      for (double& v : table_) {
        if (v == kInf) {
          throw MkError(Errc::InvalidInput,
                        "+inf cells are not meaningful under max sense");
        }
        v = -v;
      }
    }
  }
}

double CostView::lazy_value(std::int64_t linear) const {
  const double v = cell_cost(*instance_, space_, linear);
  if (sense_sign_ < 0.0) {
    if (v == kInf) {
      throw MkError(Errc::InvalidInput,
                    "+inf cells are not meaningful under max sense");
    }
    return -v;
  }
  return v;
}

}  // namespace mmot

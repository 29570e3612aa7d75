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

#include "mmot/measure.hpp"

#include <cmath>
#include <map>

#include "mmot/errors.hpp"

namespace mmot {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::WeightSumMismatch: return "WeightSumMismatch";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::MixedDimension: return "MixedDimension";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::Overflow: return "Overflow";
    case Errc::TooLarge: return "TooLarge";
    case Errc::GroupTooLarge: return "GroupTooLarge";
    case Errc::FiniteCostInfeasible: return "FiniteCostInfeasible";
    case Errc::AllCellsForbidden: return "AllCellsForbidden";
    case Errc::NotConverged: return "NotConverged";
    case Errc::UnboundedConjugate: return "UnboundedConjugate";
    case Errc::OrderViolated: return "OrderViolated";
    case Errc::CostNotInvariant: return "CostNotInvariant";
    case Errc::InfeasibleInput: return "InfeasibleInput";
    case Errc::PeriodMismatch: return "PeriodMismatch";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::MarginalsNotIdentical: return "MarginalsNotIdentical";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::FiniteCostInfeasible:
    case Errc::AllCellsForbidden:
      return 2;
    case Errc::NotConverged:
      return 3;
    case Errc::CostNotInvariant:
      return 4;
    default:
      return 1;
  }
}

DiscreteMarginal validate_marginal(DiscreteMarginal marginal) {
  if (marginal.points.size() != marginal.weights.size()) {
    throw MkError(Errc::InvalidInput,
                  "marginal '" + marginal.label +
                      "': points and weights differ in length");
  }
  if (marginal.points.empty()) {
    throw MkError(Errc::InvalidInput,
                  "marginal '" + marginal.label + "': empty support");
  }
  const std::size_t dim = marginal.points.front().size();
  if (dim == 0) {
    throw MkError(Errc::InvalidInput,
                  "marginal '" + marginal.label + "': zero-dimensional point");
  }
  for (const auto& p : marginal.points) {
    if (p.size() != dim) {
      throw MkError(Errc::MixedDimension,
                    "marginal '" + marginal.label +
                        "': points of different dimension");
    }
    for (double x : p) {
      if (!std::isfinite(x)) {
        throw MkError(Errc::InvalidInput,
                      "marginal '" + marginal.label +
                          "': non-finite point coordinate");
      }
    }
  }
  double sum = 0.0;
  for (double w : marginal.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw MkError(Errc::NonPositiveWeight,
                    "marginal '" + marginal.label +
                        "': weights must be strictly positive");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw MkError(Errc::WeightSumMismatch,
                  "marginal '" + marginal.label +
                      "': weights sum to " + std::to_string(sum));
  }
  std::map<std::vector<double>, int> seen;
  for (int i = 0; i < marginal.size(); ++i) {
    auto [it, inserted] = seen.emplace(marginal.points[i], i);
    if (!inserted) {
      throw MkError(Errc::DuplicatePoint,
                    "marginal '" + marginal.label + "': points " +
                        std::to_string(it->second) + " and " +
                        std::to_string(i) + " coincide");
    }
  }
  return marginal;
}

std::int64_t product_size(const std::vector<DiscreteMarginal>& marginals) {
  constexpr std::int64_t kCap = std::int64_t{1} << 53;
  std::int64_t total = 1;
  for (const auto& m : marginals) {
    const std::int64_t s = m.size();
    if (s == 0) return 0;
    if (total > kCap / s) {
      throw MkError(Errc::Overflow, "product of support sizes exceeds 2^53");
    }
    total *= s;
  }
  return total;
}

std::int64_t IndexSpace::encode(const std::vector<int>& tuple) const {
  std::int64_t linear = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    linear += strides[j] * tuple[j];
  }
  return linear;
}

void IndexSpace::decode(std::int64_t linear, std::vector<int>& tuple) const {
  tuple.resize(sizes.size());
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    tuple[j] = static_cast<int>(linear / strides[j]);
    linear -= strides[j] * tuple[j];
  }
}

IndexSpace make_index_space(const std::vector<int>& sizes) {
  IndexSpace space;
  space.sizes = sizes;
  space.strides.assign(sizes.size(), 1);
  std::int64_t stride = 1;
  for (int j = static_cast<int>(sizes.size()) - 1; j >= 0; --j) {
    space.strides[j] = stride;
    stride *= sizes[j];
  }
  space.total = sizes.empty() ? 0 : stride;
  return space;
}

IndexSpace make_index_space(const std::vector<DiscreteMarginal>& marginals) {
  product_size(marginals);  // overflow guard
  std::vector<int> sizes;
  sizes.reserve(marginals.size());
  for (const auto& m : marginals) sizes.push_back(m.size());
  return make_index_space(sizes);
}

}  // namespace mmot

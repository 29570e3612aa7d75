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

#ifndef MMOT_MEASURE_HPP
#define MMOT_MEASURE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mmot {

// A finitely supported probability measure: distinct points in R^d with
// strictly positive weights summing to one.
struct DiscreteMarginal {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  std::string label;

  int size() const { return static_cast<int>(points.size()); }
  int dimension() const {
    return points.empty() ? 0 : static_cast<int>(points.front().size());
  }
};

// Checks the marginal invariants and returns the input unchanged on success.
// Weight sum tolerance is 1e-12; duplicates are exact coordinate matches.
DiscreteMarginal validate_marginal(DiscreteMarginal marginal);

// Product of the support sizes. Throws Errc::Overflow past 2^53, the last
// count exactly representable in a double-indexed loop.
std::int64_t product_size(const std::vector<DiscreteMarginal>& marginals);

// Mixed-radix addressing of the product space, last marginal fastest.
struct IndexSpace {
  std::vector<int> sizes;
  std::vector<std::int64_t> strides;
  std::int64_t total = 0;

  int arity() const { return static_cast<int>(sizes.size()); }

  std::int64_t encode(const std::vector<int>& tuple) const;
  void decode(std::int64_t linear, std::vector<int>& tuple) const;
};

IndexSpace make_index_space(const std::vector<DiscreteMarginal>& marginals);
IndexSpace make_index_space(const std::vector<int>& sizes);

}  // namespace mmot

#endif  // MMOT_MEASURE_HPP

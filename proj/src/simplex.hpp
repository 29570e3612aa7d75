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

#ifndef MMOT_SIMPLEX_HPP
#define MMOT_SIMPLEX_HPP

#include <vector>

namespace mmot {

// Equality-form LP min c.x s.t. A x = b, x >= 0, where every column of A is
// a 0/1 incidence column given by its row list. Rows must have b >= 0.
struct SimplexProblem {
  int nrows = 0;
  std::vector<std::vector<int>> columns;  // sorted row indices per column
  std::vector<double> cost;
  std::vector<double> rhs;
};

struct SimplexResult {
  bool feasible = false;
  std::vector<double> x;      // per column
  std::vector<double> duals;  // per row
  double value = 0.0;
  int iterations = 0;
};

// Two-phase revised simplex with Bland's rule and a dense basis inverse.
// Deterministic for a fixed column order.
SimplexResult simplex_solve(const SimplexProblem& problem);

}  // namespace mmot

#endif  // MMOT_SIMPLEX_HPP

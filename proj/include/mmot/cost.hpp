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

#ifndef MMOT_COST_HPP
#define MMOT_COST_HPP

#include <limits>
#include <vector>

#include "mmot/group.hpp"
#include "mmot/measure.hpp"

namespace mmot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class CostKind { ExplicitTable, Determinant, Coulomb };
enum class Sense { Min, Max };

// Extended-real cost: finite values or +inf for forbidden cells, never NaN.
struct CostSpec {
  CostKind kind = CostKind::ExplicitTable;
  Sense sense = Sense::Min;
  // ExplicitTable only: flat values, tuple index varying last-marginal-fastest.
  std::vector<double> values;
};

struct Instance {
  std::vector<DiscreteMarginal> marginals;
  CostSpec cost;

  int arity() const { return static_cast<int>(marginals.size()); }
};

// Validates marginals, cost shape, and the built-in dimension requirements
// (determinant needs d = n, Coulomb needs a common d).
Instance validate_instance(Instance instance);

// Determinant of the d x d matrix with the tuple points as columns, or the
// sum over ordered pairs i != j of 1/|x_i - x_j| (each unordered pair counts
// twice; +inf on coincidence).
double eval_cost(const CostSpec& spec,
                 const std::vector<std::vector<double>>& tuple);

// Cost of the cell at a linear product index, in the original sense.
double cell_cost(const Instance& instance, const IndexSpace& space,
                 std::int64_t linear);

inline constexpr std::int64_t kMaterializeCap = 10'000'000;

// Full cost tensor in original-sense values. The parallel version partitions
// the index space across workers; cells are independent, so it is bitwise
// identical to the serial one.
std::vector<double> materialize_tensor_serial(const Instance& instance);
std::vector<double> materialize_tensor(const Instance& instance);

// Max over all tuples of |c(t) - c(action(t))|, with inf - inf = 0 and
// |inf - finite| = inf.
double check_cost_invariance(const Instance& instance,
                             const ProductAction& action);

// Sense-normalized view: value() is the cost to MINIMIZE (negated for Max).
// Materializes the tensor when the product space fits under the cap and
// evaluates on the fly otherwise.
class CostView {
 public:
  explicit CostView(const Instance& instance);

  double value(std::int64_t linear) const {
    if (!table_.empty()) return table_[linear];
    return lazy_value(linear);
  }

  // Converts an internal min-form value or potential back to the original
  // sense (identity for Min, negation for Max).
  double to_original(double v) const { return sense_sign_ * v; }
  double sign() const { return sense_sign_; }

  const IndexSpace& space() const { return space_; }
  const Instance& instance() const { return *instance_; }

 private:
  double lazy_value(std::int64_t linear) const;

  const Instance* instance_;
  IndexSpace space_;
  std::vector<double> table_;
  double sense_sign_ = 1.0;
};

}  // namespace mmot

#endif  // MMOT_COST_HPP

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

#ifndef MMOT_ERRORS_HPP
#define MMOT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mmot {

enum class Errc {
  NonPositiveWeight,
  WeightSumMismatch,
  DuplicatePoint,
  MixedDimension,
  DimensionMismatch,
  Overflow,
  TooLarge,
  GroupTooLarge,
  FiniteCostInfeasible,
  AllCellsForbidden,
  NotConverged,
  UnboundedConjugate,
  OrderViolated,
  CostNotInvariant,
  InfeasibleInput,
  PeriodMismatch,
  HypothesisViolated,
  NotCommuting,
  MarginalsNotIdentical,
  InvalidInput,
};

const char* errc_name(Errc code);

class MkError : public std::runtime_error {
 public:
  MkError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Process exit code for an error category, shared by the CLI and its tests.
// 1 = bad input, 2 = no feasible coupling, 3 = iteration limit, 4 = the
// requested group does not leave the cost invariant.
int exit_code_for(Errc code);

}  // namespace mmot

#endif  // MMOT_ERRORS_HPP

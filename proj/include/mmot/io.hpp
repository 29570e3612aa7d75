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

#ifndef MMOT_IO_HPP
#define MMOT_IO_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mmot/apps.hpp"
#include "mmot/cost.hpp"
#include "mmot/group.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver_sinkhorn.hpp"
#include "mmot/symmetrize.hpp"

namespace mmot {

// Parsed problem description: the instance plus optional symmetrization
// data and solver selection. Forbidden cells are written as the string
// "inf" in the JSON cost table.
struct ProblemFile {
  Instance instance;
  std::vector<ProductAction> actions;
  bool sigma = false;
  std::string solver = "lp";
  EntropicConfig entropic;
  bool has_entropic = false;
};

// Parse errors carry a JSON pointer to the offending field, for example
// "/marginals/2/weights/3".
ProblemFile parse_problem_text(const std::string& text);
ProblemFile read_problem_file(const std::string& path);
std::string problem_to_text(const ProblemFile& problem);
void write_problem_file(const std::string& path, const ProblemFile& problem);

// Machine-readable run outcome. Doubles survive a write/read round trip
// bitwise; the plan is stored as its support list above the threshold.
struct ReportFile {
  SolveReport solve;
  double support_threshold = 1e-10;
  std::vector<int> plan_sizes;
  std::vector<std::pair<std::vector<int>, double>> support;
  Potentials potentials;
  std::map<std::string, double> extras;
  bool has_trace = false;
  SymmetrizationTrace trace;
  std::vector<TheoremReport> theorems;
};

std::vector<std::pair<std::vector<int>, double>> plan_support_entries(
    const Plan& plan, double threshold);
Plan plan_from_support(
    const std::vector<std::pair<std::vector<int>, double>>& support,
    const std::vector<int>& sizes);

std::string report_to_text(const ReportFile& report);
ReportFile parse_report_text(const std::string& text);
void write_report_file(const std::string& path, const ReportFile& report);
ReportFile read_report_file(const std::string& path);

// Knobs for the seeded instance generator shared by the CLI and the tests.
struct RandomSpec {
  unsigned seed = 1;
  std::vector<int> sizes;
  double forbidden_fraction = 0.0;
  bool uniform_weights = false;
  Sense sense = Sense::Min;
};

// Deterministic random table-cost instance. Weights come from integer
// compositions of a common total, and forbidden cells never touch the
// greedy staircase coupling, so a finite-cost plan always exists.
Instance random_instance(const RandomSpec& spec);

}  // namespace mmot

#endif  // MMOT_IO_HPP

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

#include "mmot/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "mmot/errors.hpp"

namespace mmot {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& ptr, const std::string& message) {
  throw MkError(Errc::InvalidInput,
                "at " + (ptr.empty() ? std::string("/") : ptr) + ": " + message);
}

const json& member(const json& j, const char* key, const std::string& ptr) {
  if (!j.is_object()) fail_at(ptr, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail_at(ptr + "/" + key, "missing field");
  return *it;
}

void require_array(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail_at(ptr, "expected an array");
}

double number_at(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail_at(ptr, "expected a number");
  return j.get<double>();
}

int int_at(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) fail_at(ptr, "expected an integer");
  return j.get<int>();
}

bool bool_at(const json& j, const std::string& ptr) {
  if (!j.is_boolean()) fail_at(ptr, "expected true or false");
  return j.get<bool>();
}

std::string string_at(const json& j, const std::string& ptr) {
  if (!j.is_string()) fail_at(ptr, "expected a string");
  return j.get<std::string>();
}

// Extended reals: forbidden cells travel as the string "inf".
double extended_at(const json& j, const std::string& ptr) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    fail_at(ptr, "expected a number or \"inf\"");
  }
  return number_at(j, ptr);
}

json extended_to_json(double v) {
  if (v == kInf) return json("inf");
  return json(v);
}

std::vector<double> number_vector_at(const json& j, const std::string& ptr) {
  require_array(j, ptr);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_at(j[i], ptr + "/" + std::to_string(i)));
  }
  return out;
}

std::vector<int> int_vector_at(const json& j, const std::string& ptr) {
  require_array(j, ptr);
  std::vector<int> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(int_at(j[i], ptr + "/" + std::to_string(i)));
  }
  return out;
}

DiscreteMarginal marginal_from_json(const json& j, const std::string& ptr) {
  DiscreteMarginal m;
  const json& points = member(j, "points", ptr);
  require_array(points, ptr + "/points");
  m.points.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    m.points.push_back(
        number_vector_at(points[i], ptr + "/points/" + std::to_string(i)));
  }
  m.weights = number_vector_at(member(j, "weights", ptr), ptr + "/weights");
  if (m.weights.size() != m.points.size()) {
    fail_at(ptr + "/weights", "length differs from points");
  }
  if (j.contains("label")) m.label = string_at(j["label"], ptr + "/label");
  return m;
}

json marginal_to_json(const DiscreteMarginal& m) {
  json j;
  if (!m.label.empty()) j["label"] = m.label;
  j["points"] = m.points;
  j["weights"] = m.weights;
  return j;
}

CostSpec cost_from_json(const json& j, const std::string& ptr) {
  CostSpec spec;
  const std::string kind = string_at(member(j, "kind", ptr), ptr + "/kind");
  if (kind == "table") {
    spec.kind = CostKind::ExplicitTable;
  } else if (kind == "determinant") {
    spec.kind = CostKind::Determinant;
  } else if (kind == "coulomb") {
    spec.kind = CostKind::Coulomb;
  } else {
    fail_at(ptr + "/kind", "unknown cost kind '" + kind + "'");
  }
  spec.sense = Sense::Min;
  if (j.contains("sense")) {
    const std::string sense = string_at(j["sense"], ptr + "/sense");
    if (sense == "min") {
      spec.sense = Sense::Min;
    } else if (sense == "max") {
      spec.sense = Sense::Max;
    } else {
      fail_at(ptr + "/sense", "expected \"min\" or \"max\"");
    }
  }
  if (spec.kind == CostKind::ExplicitTable) {
    const json& values = member(j, "values", ptr);
    require_array(values, ptr + "/values");
    spec.values.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      spec.values.push_back(
          extended_at(values[i], ptr + "/values/" + std::to_string(i)));
    }
  } else if (j.contains("values") && !j["values"].empty()) {
    fail_at(ptr + "/values", "built-in costs take no value table");
  }
  return spec;
}

json cost_to_json(const CostSpec& spec) {
  json j;
  switch (spec.kind) {
    case CostKind::ExplicitTable:
      j["kind"] = "table";
      break;
    case CostKind::Determinant:
      j["kind"] = "determinant";
      break;
    case CostKind::Coulomb:
      j["kind"] = "coulomb";
      break;
  }
  j["sense"] = spec.sense == Sense::Min ? "min" : "max";
  if (spec.kind == CostKind::ExplicitTable) {
    json values = json::array();
    for (double v : spec.values) values.push_back(extended_to_json(v));
    j["values"] = std::move(values);
  }
  return j;
}

ProductAction action_from_json(const json& j, const std::string& ptr) {
  require_array(j, ptr);
  ProductAction action;
  action.maps.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    MarginalMap map;
    map.perm = int_vector_at(j[k], ptr + "/" + std::to_string(k));
    action.maps.push_back(std::move(map));
  }
  return action;
}

json potentials_to_json(const Potentials& pot) { return json(pot.vectors); }

Potentials potentials_from_json(const json& j, const std::string& ptr) {
  require_array(j, ptr);
  Potentials pot;
  pot.vectors.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    pot.vectors.push_back(number_vector_at(j[k], ptr + "/" + std::to_string(k)));
  }
  return pot;
}

json trace_to_json(const SymmetrizationTrace& trace) {
  json j;
  j["averaged"] = potentials_to_json(trace.averaged);
  j["conjugate"] = potentials_to_json(trace.conjugate);
  j["mixed"] = potentials_to_json(trace.mixed);
  j["tightened"] = potentials_to_json(trace.tightened);
  j["fixed_point_residual"] = trace.fixed_point_residual;
  return j;
}

SymmetrizationTrace trace_from_json(const json& j, const std::string& ptr) {
  SymmetrizationTrace trace;
  trace.averaged = potentials_from_json(member(j, "averaged", ptr), ptr + "/averaged");
  trace.conjugate =
      potentials_from_json(member(j, "conjugate", ptr), ptr + "/conjugate");
  trace.mixed = potentials_from_json(member(j, "mixed", ptr), ptr + "/mixed");
  trace.tightened =
      potentials_from_json(member(j, "tightened", ptr), ptr + "/tightened");
  trace.fixed_point_residual = number_at(member(j, "fixed_point_residual", ptr),
                                         ptr + "/fixed_point_residual");
  return trace;
}

json metrics_to_json(const std::map<std::string, double>& metrics) {
  json j = json::object();
  for (const auto& [key, value] : metrics) j[key] = extended_to_json(value);
  return j;
}

std::map<std::string, double> metrics_from_json(const json& j,
                                                const std::string& ptr) {
  if (!j.is_object()) fail_at(ptr, "expected an object");
  std::map<std::string, double> out;
  for (const auto& [key, value] : j.items()) {
    out[key] = extended_at(value, ptr + "/" + key);
  }
  return out;
}

json theorem_to_json(const TheoremReport& report) {
  json j;
  j["name"] = report.name;
  j["passed"] = report.passed;
  j["metrics"] = metrics_to_json(report.metrics);
  j["details"] = report.details;
  return j;
}

TheoremReport theorem_from_json(const json& j, const std::string& ptr) {
  TheoremReport report;
  report.name = string_at(member(j, "name", ptr), ptr + "/name");
  report.passed = bool_at(member(j, "passed", ptr), ptr + "/passed");
  report.metrics = metrics_from_json(member(j, "metrics", ptr), ptr + "/metrics");
  report.details = string_at(member(j, "details", ptr), ptr + "/details");
  return report;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MkError(Errc::InvalidInput, "cannot read file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw MkError(Errc::InvalidInput, "cannot write file '" + path + "'");
  }
  out << text;
  if (!out) {
    throw MkError(Errc::InvalidInput, "failed writing file '" + path + "'");
  }
}

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw MkError(Errc::InvalidInput, "malformed JSON");
  }
  return j;
}

// 53-bit uniform draw in [0, 1), identical on every platform.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
  const json j = parse_json_text(text);
  ProblemFile problem;
  const json& marginals = member(j, "marginals", "");
  require_array(marginals, "/marginals");
  problem.instance.marginals.reserve(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    problem.instance.marginals.push_back(
        marginal_from_json(marginals[i], "/marginals/" + std::to_string(i)));
  }
  problem.instance.cost = cost_from_json(member(j, "cost", ""), "/cost");
  problem.instance = validate_instance(std::move(problem.instance));

  if (j.contains("actions")) {
    const json& actions = j["actions"];
    require_array(actions, "/actions");
    for (std::size_t i = 0; i < actions.size(); ++i) {
      ProductAction action =
          action_from_json(actions[i], "/actions/" + std::to_string(i));
      problem.actions.push_back(
          validate_action(std::move(action), problem.instance.marginals));
    }
  }
  if (j.contains("sigma")) problem.sigma = bool_at(j["sigma"], "/sigma");
  if (j.contains("solver")) {
    problem.solver = string_at(j["solver"], "/solver");
    if (problem.solver != "lp" && problem.solver != "sinkhorn") {
      fail_at("/solver", "expected \"lp\" or \"sinkhorn\"");
    }
  }
  if (j.contains("entropic")) {
    const json& e = j["entropic"];
    if (!e.is_object()) fail_at("/entropic", "expected an object");
    problem.has_entropic = true;
    if (e.contains("epsilon")) {
      problem.entropic.epsilon = number_at(e["epsilon"], "/entropic/epsilon");
    }
    if (e.contains("max_iter")) {
      problem.entropic.max_iter = int_at(e["max_iter"], "/entropic/max_iter");
    }
    if (e.contains("tol")) {
      problem.entropic.tol = number_at(e["tol"], "/entropic/tol");
    }
  }
  return problem;
}

ProblemFile read_problem_file(const std::string& path) {
  return parse_problem_text(read_text_file(path));
}

std::string problem_to_text(const ProblemFile& problem) {
  json j;
  json marginals = json::array();
  for (const auto& m : problem.instance.marginals) {
    marginals.push_back(marginal_to_json(m));
  }
  j["marginals"] = std::move(marginals);
  j["cost"] = cost_to_json(problem.instance.cost);
  if (!problem.actions.empty()) {
    json actions = json::array();
    for (const auto& a : problem.actions) {
      json maps = json::array();
      for (const auto& m : a.maps) maps.push_back(m.perm);
      actions.push_back(std::move(maps));
    }
    j["actions"] = std::move(actions);
  }
  if (problem.sigma) j["sigma"] = true;
  j["solver"] = problem.solver;
  if (problem.has_entropic) {
    j["entropic"] = {{"epsilon", problem.entropic.epsilon},
                     {"max_iter", problem.entropic.max_iter},
                     {"tol", problem.entropic.tol}};
  }
  return j.dump(2) + "\n";
}

void write_problem_file(const std::string& path, const ProblemFile& problem) {
  write_text_file(path, problem_to_text(problem));
}

std::vector<std::pair<std::vector<int>, double>> plan_support_entries(
    const Plan& plan, double threshold) {
  const IndexSpace space = make_index_space(plan.sizes);
  std::vector<std::pair<std::vector<int>, double>> out;
  out.reserve(plan.entries.size());
  std::vector<int> tuple;
  for (const auto& [idx, mass] : plan.entries) {
    if (mass <= threshold) continue;
    space.decode(idx, tuple);
    out.emplace_back(tuple, mass);
  }
  return out;
}

Plan plan_from_support(
    const std::vector<std::pair<std::vector<int>, double>>& support,
    const std::vector<int>& sizes) {
  const IndexSpace space = make_index_space(sizes);
  Plan plan;
  plan.sizes = sizes;
  for (const auto& [tuple, mass] : support) {
    if (tuple.size() != sizes.size()) {
      throw MkError(Errc::DimensionMismatch, "support tuple has wrong length");
    }
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      if (tuple[j] < 0 || tuple[j] >= sizes[j]) {
        throw MkError(Errc::InvalidInput, "support tuple index out of range");
      }
    }
    if (mass > 0.0) plan.entries[space.encode(tuple)] += mass;
  }
  return plan;
}

std::string report_to_text(const ReportFile& report) {
  json j;
  j["solve"] = {{"primal_value", report.solve.primal_value},
                {"dual_value", report.solve.dual_value},
                {"gap", report.solve.gap},
                {"solver", report.solve.solver},
                {"iterations", report.solve.iterations},
                {"converged", report.solve.converged}};
  j["support_threshold"] = report.support_threshold;
  if (!report.plan_sizes.empty()) j["plan_sizes"] = report.plan_sizes;
  json support = json::array();
  for (const auto& [tuple, mass] : report.support) {
    support.push_back({{"tuple", tuple}, {"mass", mass}});
  }
  j["support"] = std::move(support);
  j["potentials"] = potentials_to_json(report.potentials);
  if (!report.extras.empty()) j["metrics"] = metrics_to_json(report.extras);
  if (report.has_trace) j["trace"] = trace_to_json(report.trace);
  if (!report.theorems.empty()) {
    json theorems = json::array();
    for (const auto& t : report.theorems) theorems.push_back(theorem_to_json(t));
    j["theorems"] = std::move(theorems);
  }
  return j.dump(2) + "\n";
}

ReportFile parse_report_text(const std::string& text) {
  const json j = parse_json_text(text);
  ReportFile report;
  const json& solve = member(j, "solve", "");
  report.solve.primal_value =
      number_at(member(solve, "primal_value", "/solve"), "/solve/primal_value");
  report.solve.dual_value =
      number_at(member(solve, "dual_value", "/solve"), "/solve/dual_value");
  report.solve.gap = number_at(member(solve, "gap", "/solve"), "/solve/gap");
  report.solve.solver =
      string_at(member(solve, "solver", "/solve"), "/solve/solver");
  report.solve.iterations =
      int_at(member(solve, "iterations", "/solve"), "/solve/iterations");
  report.solve.converged =
      bool_at(member(solve, "converged", "/solve"), "/solve/converged");
  report.support_threshold = number_at(member(j, "support_threshold", ""),
                                       "/support_threshold");
  if (j.contains("plan_sizes")) {
    report.plan_sizes = int_vector_at(j["plan_sizes"], "/plan_sizes");
  }
  const json& support = member(j, "support", "");
  require_array(support, "/support");
  for (std::size_t i = 0; i < support.size(); ++i) {
    const std::string ptr = "/support/" + std::to_string(i);
    const json& entry = support[i];
    report.support.emplace_back(
        int_vector_at(member(entry, "tuple", ptr), ptr + "/tuple"),
        number_at(member(entry, "mass", ptr), ptr + "/mass"));
  }
  report.potentials =
      potentials_from_json(member(j, "potentials", ""), "/potentials");
  if (j.contains("metrics")) {
    report.extras = metrics_from_json(j["metrics"], "/metrics");
  }
  if (j.contains("trace")) {
    report.has_trace = true;
    report.trace = trace_from_json(j["trace"], "/trace");
  }
  if (j.contains("theorems")) {
    const json& theorems = j["theorems"];
    require_array(theorems, "/theorems");
    for (std::size_t i = 0; i < theorems.size(); ++i) {
      report.theorems.push_back(
          theorem_from_json(theorems[i], "/theorems/" + std::to_string(i)));
    }
  }
  return report;
}

void write_report_file(const std::string& path, const ReportFile& report) {
  write_text_file(path, report_to_text(report));
}

ReportFile read_report_file(const std::string& path) {
  return parse_report_text(read_text_file(path));
}

Instance random_instance(const RandomSpec& spec) {
  if (spec.sizes.size() < 2) {
    throw MkError(Errc::InvalidInput, "need at least two marginals");
  }
  for (int m : spec.sizes) {
    if (m < 1) throw MkError(Errc::InvalidInput, "support sizes must be >= 1");
    if (m > 840) throw MkError(Errc::InvalidInput, "support sizes cap at 840");
  }
  if (spec.sense == Sense::Max && spec.forbidden_fraction > 0.0) {
    throw MkError(Errc::InvalidInput,
                  "forbidden cells are not meaningful under max sense");
  }
  std::mt19937_64 gen(spec.seed);
  const int n = static_cast<int>(spec.sizes.size());

  // Integer masses over a common total keep the staircase construction
  // exact: non-uniform weights are random compositions of 840, uniform
  // weights split the least common multiple of the sizes evenly.
  std::int64_t total_units = 840;
  if (spec.uniform_weights) {
    total_units = 1;
    for (int m : spec.sizes) total_units = std::lcm(total_units, static_cast<std::int64_t>(m));
  }
  std::vector<std::vector<std::int64_t>> masses(n);
  for (int j = 0; j < n; ++j) {
    const int m = spec.sizes[j];
    if (spec.uniform_weights) {
      masses[j].assign(m, total_units / m);
    } else {
      std::set<std::int64_t> cuts;
      while (static_cast<int>(cuts.size()) < m - 1) {
        cuts.insert(1 + static_cast<std::int64_t>(gen() % 839));
      }
      masses[j].reserve(m);
      std::int64_t prev = 0;
      for (std::int64_t c : cuts) {
        masses[j].push_back(c - prev);
        prev = c;
      }
      masses[j].push_back(total_units - prev);
    }
  }

  Instance inst;
  inst.marginals.resize(n);
  for (int j = 0; j < n; ++j) {
    DiscreteMarginal& marginal = inst.marginals[j];
    marginal.label = "m" + std::to_string(j + 1);
    const int m = spec.sizes[j];
    marginal.points.reserve(m);
    marginal.weights.reserve(m);
    for (int i = 0; i < m; ++i) {
      marginal.points.push_back({static_cast<double>(i)});
      marginal.weights.push_back(static_cast<double>(masses[j][i]) /
                                 static_cast<double>(total_units));
    }
  }

  // Greedy staircase over the integer masses; the visited cells support a
  // feasible coupling and stay finite below.
  const IndexSpace space = make_index_space(spec.sizes);
  std::set<std::int64_t> protected_cells;
  {
    std::vector<std::vector<std::int64_t>> rem = masses;
    std::vector<int> pos(n, 0);
    for (;;) {
      protected_cells.insert(space.encode(pos));
      std::int64_t step = rem[0][pos[0]];
      for (int j = 1; j < n; ++j) step = std::min(step, rem[j][pos[j]]);
      bool advanced = false;
      for (int j = 0; j < n; ++j) {
        rem[j][pos[j]] -= step;
        if (rem[j][pos[j]] == 0 && pos[j] + 1 < spec.sizes[j]) {
          ++pos[j];
          advanced = true;
        }
      }
      if (!advanced) break;
    }
  }

  inst.cost.kind = CostKind::ExplicitTable;
  inst.cost.sense = spec.sense;
  inst.cost.values.resize(space.total);
  for (std::int64_t idx = 0; idx < space.total; ++idx) {
    const double value = uniform01(gen) * 10.0;
    const double mask = uniform01(gen);
    const bool forbid = mask < spec.forbidden_fraction &&
                        protected_cells.count(idx) == 0;
    inst.cost.values[idx] = forbid ? kInf : value;
  }
  return validate_instance(std::move(inst));
}

}  // namespace mmot

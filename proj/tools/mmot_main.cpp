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

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "mmot/apps.hpp"
#include "mmot/errors.hpp"
#include "mmot/group.hpp"
#include "mmot/io.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver_lp.hpp"
#include "mmot/solver_sinkhorn.hpp"
#include "mmot/symmetrize.hpp"

namespace {

using namespace mmot;

void print_solve_summary(const SolveReport& rep, std::size_t support_size) {
  std::cout << std::setprecision(12);
  std::cout << "solver: " << rep.solver << "\n";
  std::cout << "primal value: " << rep.primal_value << "\n";
  std::cout << "dual value: " << rep.dual_value << "\n";
  std::cout << "gap: " << rep.gap << "\n";
  std::cout << "iterations: " << rep.iterations << "\n";
  std::cout << "support cells: " << support_size << "\n";
}

int run_solve(const std::string& path, const std::string& solver_flag,
              double epsilon, double tol, int max_iter, double threshold,
              const std::string& out) {
  ProblemFile problem = read_problem_file(path);
  if (!solver_flag.empty()) problem.solver = solver_flag;
  EntropicConfig config = problem.entropic;
  if (epsilon > 0.0) config.epsilon = epsilon;
  if (tol > 0.0) config.tol = tol;
  if (max_iter > 0) config.max_iter = max_iter;

  Plan plan;
  Potentials potentials;
  SolveReport rep;
  if (problem.solver == "lp") {
    std::tie(plan, potentials, rep) = solve_exact(problem.instance);
  } else {
    std::tie(plan, potentials, rep) = solve_entropic(problem.instance, config);
  }

  ReportFile report;
  report.solve = rep;
  report.support_threshold = threshold;
  report.plan_sizes = plan.sizes;
  report.support = plan_support_entries(plan, threshold);
  report.potentials = potentials;
  print_solve_summary(rep, report.support.size());
  if (!out.empty()) write_report_file(out, report);

  if (!rep.converged) {
    std::cerr << "error (NotConverged): iteration limit reached before the "
                 "tolerance was met\n";
    return exit_code_for(Errc::NotConverged);
  }
  return 0;
}

int run_symmetrize(const std::string& path, bool equal_marginals,
                   double threshold, const std::string& out) {
  ProblemFile problem = read_problem_file(path);
  if (problem.actions.empty() && !problem.sigma) {
    throw MkError(Errc::InvalidInput,
                  "symmetrize needs actions or sigma in the problem file");
  }
  auto [plan, potentials, rep] = solve_exact(problem.instance);
  const ActionFamily family =
      generate_group(problem.actions, problem.instance.marginals);

  Plan averaged = plan;
  if (!problem.actions.empty()) averaged = average_plan(averaged, family);
  if (problem.sigma) averaged = average_plan_sigma(averaged);

  double invariance = 0.0;
  for (const auto& g : family.elements) {
    invariance =
        std::max(invariance, plan_l1_distance(pushforward(averaged, g), averaged));
  }
  if (problem.sigma) {
    invariance =
        std::max(invariance, plan_l1_distance(pushforward_sigma(averaged), averaged));
  }

  ReportFile report;
  report.solve = rep;
  report.support_threshold = threshold;
  report.plan_sizes = averaged.sizes;
  report.support = plan_support_entries(averaged, threshold);
  report.extras["value_before"] = plan_cost(plan, problem.instance);
  report.extras["value_after"] = plan_cost(averaged, problem.instance);
  report.extras["plan_invariance_l1"] = invariance;
  report.extras["dual_value_before"] =
      dual_value(potentials, problem.instance.marginals);

  if (equal_marginals) {
    std::vector<MarginalMap> generators;
    for (const auto& action : problem.actions) {
      for (std::size_t k = 1; k < action.maps.size(); ++k) {
        if (action.maps[k].perm != action.maps[0].perm) {
          throw MkError(Errc::InvalidInput,
                        "--equal-marginals needs each action to apply the same "
                        "permutation on every marginal");
        }
      }
      generators.push_back(action.maps[0]);
    }
    CommutingTrace trace =
        commuting_family_symmetrize(problem.instance, potentials, generators);
    report.potentials = trace.potentials;
    report.extras["fixed_point_residual"] = trace.fixed_point_residual;
    report.extras["mix_iterations"] = static_cast<double>(trace.mix_iterations);
  } else {
    SymmetrizationTrace trace =
        symmetrize_dual(problem.instance, potentials, family);
    report.potentials = trace.tightened;
    report.has_trace = true;
    report.trace = trace;
    report.extras["fixed_point_residual"] = trace.fixed_point_residual;
  }
  report.extras["dual_value_after"] =
      dual_value(report.potentials, problem.instance.marginals);

  std::cout << std::setprecision(12);
  std::cout << "value before averaging: " << report.extras["value_before"] << "\n";
  std::cout << "value after averaging: " << report.extras["value_after"] << "\n";
  std::cout << "plan invariance (L1): " << invariance << "\n";
  std::cout << "dual value before: " << report.extras["dual_value_before"] << "\n";
  std::cout << "dual value after: " << report.extras["dual_value_after"] << "\n";
  std::cout << "fixed point residual: " << report.extras["fixed_point_residual"]
            << "\n";
  if (!out.empty()) write_report_file(out, report);
  return 0;
}

int run_demo(const std::string& name, std::vector<double> radii, int m, int n,
             const std::string& out) {
  if (radii.empty()) radii = {1.0};
  const TheoremReport result = name == "determinant"
                                   ? determinant_check(radii, m)
                                   : coulomb_check(radii, m, n);
  std::cout << result.name << ": " << (result.passed ? "PASS" : "FAIL") << "\n";
  std::cout << std::setprecision(12);
  for (const auto& [key, value] : result.metrics) {
    std::cout << "  " << key << " = " << value << "\n";
  }
  std::cout << "  " << result.details << "\n";
  if (!out.empty()) {
    ReportFile report;
    report.theorems.push_back(result);
    write_report_file(out, report);
  }
  return result.passed ? 0 : 1;
}

int run_gen(std::uint64_t seed, int n, int m, double forbidden, bool uniform,
            const std::string& sense, const std::string& out) {
  RandomSpec spec;
  spec.seed = seed;
  spec.sizes.assign(n, m);
  spec.forbidden_fraction = forbidden;
  spec.uniform_weights = uniform;
  spec.sense = sense == "max" ? Sense::Max : Sense::Min;
  ProblemFile problem;
  problem.instance = random_instance(spec);
  if (out.empty()) {
    std::cout << problem_to_text(problem);
  } else {
    write_problem_file(out, problem);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete multi-marginal transport solver and symmetrizer"};
  app.require_subcommand(1);

  std::string path;
  std::string solver_flag;
  double epsilon = 0.0;
  double tol = 0.0;
  int max_iter = 0;
  double threshold = 1e-10;
  std::string out;
  bool equal_marginals = false;
  std::string demo_name;
  std::vector<double> radii;
  int m = 4;
  int n = 2;
  std::uint64_t seed = 0;
  double forbidden = 0.0;
  bool uniform = false;
  std::string sense = "min";

  CLI::App* cmd_solve = app.add_subcommand("solve", "solve a problem file");
  cmd_solve->add_option("file", path, "problem JSON file")->required();
  cmd_solve->add_option("--solver", solver_flag, "lp or sinkhorn")
      ->check(CLI::IsMember({"lp", "sinkhorn"}));
  cmd_solve->add_option("--epsilon", epsilon, "entropic regularization");
  cmd_solve->add_option("--tol", tol, "entropic marginal tolerance");
  cmd_solve->add_option("--max-iter", max_iter, "entropic iteration cap");
  cmd_solve->add_option("--support-threshold", threshold,
                        "smallest mass listed in the report");
  cmd_solve->add_option("--out", out, "write a JSON report here");

  CLI::App* cmd_symmetrize =
      app.add_subcommand("symmetrize", "solve, then average plan and potentials");
  cmd_symmetrize->add_option("file", path, "problem JSON file")->required();
  cmd_symmetrize->add_flag("--equal-marginals", equal_marginals,
                           "use the equal-marginal construction for the duals");
  cmd_symmetrize->add_option("--support-threshold", threshold,
                             "smallest mass listed in the report");
  cmd_symmetrize->add_option("--out", out, "write a JSON report here");

  CLI::App* cmd_demo = app.add_subcommand("demo", "run a built-in application check");
  cmd_demo->add_option("name", demo_name, "determinant or coulomb")
      ->required()
      ->check(CLI::IsMember({"determinant", "coulomb"}));
  cmd_demo->add_option("--radii", radii, "circle radii")->delimiter(',');
  cmd_demo->add_option("--m", m, "points per circle");
  cmd_demo->add_option("--n", n, "marginal count (coulomb only)");
  cmd_demo->add_option("--out", out, "write a JSON report here");

  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a random problem file");
  cmd_gen->add_option("--seed", seed, "random seed");
  cmd_gen->add_option("--n", n, "marginal count");
  cmd_gen->add_option("--m", m, "points per marginal");
  cmd_gen->add_option("--forbidden", forbidden, "fraction of +inf cells");
  cmd_gen->add_flag("--uniform", uniform, "uniform weights");
  cmd_gen->add_option("--sense", sense, "min or max")
      ->check(CLI::IsMember({"min", "max"}));
  cmd_gen->add_option("--out", out, "write the problem here");

  try {
    app.parse(argc, argv);
    if (cmd_solve->parsed()) {
      return run_solve(path, solver_flag, epsilon, tol, max_iter, threshold, out);
    }
    if (cmd_symmetrize->parsed()) {
      return run_symmetrize(path, equal_marginals, threshold, out);
    }
    if (cmd_demo->parsed()) return run_demo(demo_name, radii, m, n, out);
    if (cmd_gen->parsed()) {
      return run_gen(seed, n, m, forbidden, uniform, sense, out);
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const MkError& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

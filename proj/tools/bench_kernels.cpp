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

// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce bitwise identical output.

#include <cstdio>
#include <cstring>
#include <vector>

#include "mmot/apps.hpp"
#include "mmot/cost.hpp"
#include "mmot/io.hpp"
#include "mmot/parallel.hpp"
#include "mmot/solver_sinkhorn.hpp"
#include "mmot/symmetrize.hpp"

namespace {

using namespace mmot;

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const double t0 = wall_seconds();
    fn();
    const double t1 = wall_seconds();
    best = std::min(best, t1 - t0);
  }
  return best;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report_line(const char* name, double serial, double parallel, bool match) {
  std::printf("%-24s serial %8.4f s   parallel %8.4f s   speedup %5.2fx   %s\n",
              name, serial, parallel, serial / parallel,
              match ? "bitwise match" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());

  // Coulomb on three circles, three marginals: 96^3 tuples of planar points.
  const RadialSetup setup = gen_radial_instance({1.0, 2.0, 3.0}, 32, 3);
  Instance instance;
  instance.marginals = setup.marginals;
  instance.cost.kind = CostKind::Coulomb;
  instance.cost.sense = Sense::Min;
  instance = validate_instance(std::move(instance));

  std::vector<double> tensor_serial;
  std::vector<double> tensor_parallel;
  const double t_mat_serial = time_best_of(
      3, [&] { tensor_serial = materialize_tensor_serial(instance); });
  const double t_mat_parallel =
      time_best_of(3, [&] { tensor_parallel = materialize_tensor(instance); });
  report_line("materialize", t_mat_serial, t_mat_parallel,
              bitwise_equal(tensor_serial, tensor_parallel));

  Potentials pot;
  for (const auto& m : instance.marginals) {
    pot.vectors.push_back(std::vector<double>(m.weights.size(), 0.0));
  }
  std::vector<double> conj_serial;
  std::vector<double> conj_parallel;
  const double t_conj_serial = time_best_of(
      3, [&] { conj_serial = c_conjugate_serial(instance, pot, 0); });
  const double t_conj_parallel =
      time_best_of(3, [&] { conj_parallel = c_conjugate(instance, pot, 0); });
  report_line("conjugate sweep", t_conj_serial, t_conj_parallel,
              bitwise_equal(conj_serial, conj_parallel));

  // Entropic iterations exercise the per-slice reductions end to end.
  EntropicConfig config;
  config.epsilon = 0.5;
  config.max_iter = 20;
  config.tol = 1e-300;
  std::vector<double> sink_serial;
  std::vector<double> sink_parallel;
  const double t_sink = time_best_of(2, [&] {
    auto [plan, p, rep] = solve_entropic(instance, config);
    sink_parallel = p.vectors[0];
    (void)plan;
    (void)rep;
  });
  set_thread_count(1);
  const double t_sink_serial = time_best_of(2, [&] {
    auto [plan, p, rep] = solve_entropic(instance, config);
    sink_serial = p.vectors[0];
    (void)plan;
    (void)rep;
  });
  set_thread_count(0);
  report_line("entropic x20", t_sink_serial, t_sink,
              bitwise_equal(sink_serial, sink_parallel));
  return 0;
}

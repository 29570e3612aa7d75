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

#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mmot/errors.hpp"

namespace mmot {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;
constexpr int kRefactorEvery = 100;
constexpr int kIterationCap = 1000000;

// Dense revised simplex state. Variable ids: [0, ncols) are the problem
// columns, [ncols, ncols + nrows) are the artificials (artificial r lives
// only in row r).
class Tableau {
 public:
  explicit Tableau(const SimplexProblem& p)
      : p_(p),
        nrows_(p.nrows),
        ncols_(static_cast<int>(p.columns.size())),
        binv_(static_cast<std::size_t>(nrows_) * nrows_, 0.0),
        xb_(p.rhs),
        basis_(nrows_),
        in_basis_(ncols_ + nrows_, 0) {
    for (int r = 0; r < nrows_; ++r) {
      binv_[idx(r, r)] = 1.0;
      basis_[r] = ncols_ + r;
      in_basis_[ncols_ + r] = 1;
    }
  }

  int iterations() const { return iterations_; }
  const std::vector<int>& basis() const { return basis_; }

  bool is_artificial(int id) const { return id >= ncols_; }

  // Rows of a variable's column.
  const int* column_rows(int id, int& count, int& artificial_row) const {
    if (id < ncols_) {
      count = static_cast<int>(p_.columns[id].size());
      artificial_row = -1;
      return p_.columns[id].data();
    }
    count = 1;
    artificial_row = id - ncols_;
    return &artificial_row;
  }

  // u = B^-1 a_id
  void ftran(int id, std::vector<double>& u) const {
    u.assign(nrows_, 0.0);
    int count, art;
    const int* rows = column_rows(id, count, art);
    for (int r = 0; r < nrows_; ++r) {
      double s = 0.0;
      for (int k = 0; k < count; ++k) s += binv_[idx(r, rows[k])];
      u[r] = s;
    }
  }

  // y = c_B^T B^-1 for the given per-variable cost function.
  template <typename CostFn>
  void duals(CostFn cost_of, std::vector<double>& y) const {
    y.assign(nrows_, 0.0);
    for (int k = 0; k < nrows_; ++k) {
      const double c = cost_of(basis_[k]);
      if (c == 0.0) continue;
      for (int r = 0; r < nrows_; ++r) y[r] += c * binv_[idx(k, r)];
    }
  }

  double reduced_cost(int id, double cost, const std::vector<double>& y) const {
    int count, art;
    const int* rows = column_rows(id, count, art);
    double s = cost;
    for (int k = 0; k < count; ++k) s -= y[rows[k]];
    return s;
  }

  // Replaces basis variable at pivot_row by entering id, updating B^-1 and
  // basic values by Gauss-Jordan on the entering column u.
  void pivot(int enter_id, int pivot_row, const std::vector<double>& u,
             double theta) {
    const double up = u[pivot_row];
    for (int r = 0; r < nrows_; ++r) {
      if (r == pivot_row) continue;
      xb_[r] -= theta * u[r];
      if (xb_[r] < 0.0 && xb_[r] > -1e-11) xb_[r] = 0.0;
    }
    xb_[pivot_row] = theta;
    for (int c = 0; c < nrows_; ++c) binv_[idx(pivot_row, c)] /= up;
    for (int r = 0; r < nrows_; ++r) {
      if (r == pivot_row) continue;
      const double f = u[r];
      if (f == 0.0) continue;
      for (int c = 0; c < nrows_; ++c) {
        binv_[idx(r, c)] -= f * binv_[idx(pivot_row, c)];
      }
    }
    in_basis_[basis_[pivot_row]] = 0;
    in_basis_[enter_id] = 1;
    basis_[pivot_row] = enter_id;
    ++iterations_;
    if (iterations_ % kRefactorEvery == 0) refactor();
  }

  // Rebuilds B^-1 from scratch by Gauss-Jordan with partial pivoting, then
  // recomputes the basic values. Called periodically and before extraction.
  void refactor() {
    std::vector<double> work(static_cast<std::size_t>(nrows_) * 2 * nrows_,
                             0.0);
    const int w = 2 * nrows_;
    for (int k = 0; k < nrows_; ++k) {
      int count, art;
      const int* rows = column_rows(basis_[k], count, art);
      for (int t = 0; t < count; ++t) work[rows[t] * w + k] = 1.0;
    }
    for (int r = 0; r < nrows_; ++r) work[r * w + nrows_ + r] = 1.0;
    for (int col = 0; col < nrows_; ++col) {
      int pivot = col;
      for (int r = col + 1; r < nrows_; ++r) {
        if (std::abs(work[r * w + col]) > std::abs(work[pivot * w + col])) {
          pivot = r;
        }
      }
      if (std::abs(work[pivot * w + col]) < 1e-14) {
        throw MkError(Errc::InvalidInput, "simplex basis became singular");
      }
      if (pivot != col) {
        for (int c = 0; c < w; ++c) std::swap(work[col * w + c], work[pivot * w + c]);
      }
      const double piv = work[col * w + col];
      for (int c = 0; c < w; ++c) work[col * w + c] /= piv;
      for (int r = 0; r < nrows_; ++r) {
        if (r == col) continue;
        const double f = work[r * w + col];
        if (f == 0.0) continue;
        for (int c = 0; c < w; ++c) work[r * w + c] -= f * work[col * w + c];
      }
    }
    for (int r = 0; r < nrows_; ++r) {
      for (int c = 0; c < nrows_; ++c) binv_[idx(r, c)] = work[r * w + nrows_ + c];
    }
    for (int r = 0; r < nrows_; ++r) {
      double s = 0.0;
      for (int c = 0; c < nrows_; ++c) s += binv_[idx(r, c)] * p_.rhs[c];
      xb_[r] = s > -1e-11 && s < 0.0 ? 0.0 : s;
    }
  }

  // One phase of Bland's rule: the entering column is the first nonbasic id
  // with negative reduced cost; the leaving row is the exact minimum ratio,
  // ties broken by smallest basic variable id. Artificials never re-enter.
  template <typename CostFn>
  void run_phase(CostFn cost_of) {
    std::vector<double> y, u;
    for (;;) {
      if (iterations_ > kIterationCap) {
        throw MkError(Errc::InvalidInput, "simplex iteration cap hit");
      }
      duals(cost_of, y);
      int enter = -1;
      for (int id = 0; id < ncols_; ++id) {
        if (in_basis_[id]) continue;
        if (reduced_cost(id, cost_of(id), y) < -kPivotTol) {
          enter = id;
          break;
        }
      }
      if (enter < 0) return;
      ftran(enter, u);
      int leave_row = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < nrows_; ++r) {
        if (u[r] <= kPivotTol) continue;
        const double ratio = std::max(xb_[r], 0.0) / u[r];
        if (leave_row < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave_row])) {
          leave_row = r;
          best_ratio = ratio;
        }
      }
      if (leave_row < 0) {
        throw MkError(Errc::InvalidInput,
                      "simplex direction unbounded on a bounded polytope");
      }
      pivot(enter, leave_row, u, best_ratio);
    }
  }

  // After a feasible phase 1, swap basic artificials for problem columns
  // where possible (degenerate pivots). Rows where no column can enter are
  // redundant; their artificials stay basic at zero and never move again.
  void drive_out_artificials() {
    std::vector<double> u;
    for (int r = 0; r < nrows_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      int best_col = -1;
      double best_mag = kPivotTol;
      for (int id = 0; id < ncols_; ++id) {
        if (in_basis_[id]) continue;
        int count, art;
        const int* rows = column_rows(id, count, art);
        double s = 0.0;
        for (int k = 0; k < count; ++k) s += binv_[idx(r, rows[k])];
        if (std::abs(s) > best_mag) {
          best_mag = std::abs(s);
          best_col = id;
        }
      }
      if (best_col < 0) continue;
      ftran(best_col, u);
      pivot(best_col, r, u, 0.0);
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int r = 0; r < nrows_; ++r) {
      if (basis_[r] < ncols_) v += cost[basis_[r]] * xb_[r];
    }
    return v;
  }

  double artificial_mass() const {
    double v = 0.0;
    for (int r = 0; r < nrows_; ++r) {
      if (is_artificial(basis_[r])) v += xb_[r];
    }
    return v;
  }

  void extract(SimplexResult& result) const {
    result.x.assign(ncols_, 0.0);
    for (int r = 0; r < nrows_; ++r) {
      if (basis_[r] < ncols_) {
        result.x[basis_[r]] = std::max(xb_[r], 0.0);
      }
    }
  }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * nrows_ + c;
  }

  const SimplexProblem& p_;
  int nrows_;
  int ncols_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  int iterations_ = 0;
};

}  // namespace

SimplexResult simplex_solve(const SimplexProblem& problem) {
  Tableau tab(problem);
  const int ncols = static_cast<int>(problem.columns.size());

  // Phase 1: minimize total artificial mass from the all-artificial basis.
  tab.run_phase([&](int id) { return id >= ncols ? 1.0 : 0.0; });

  SimplexResult result;
  if (tab.artificial_mass() > kFeasTol) {
    result.feasible = false;
    result.iterations = tab.iterations();
    return result;
  }
  tab.drive_out_artificials();

  // Phase 2 on the real costs. Artificials still basic sit at zero in
  // redundant rows and are invisible to every ratio test.
  tab.run_phase([&](int id) { return id >= ncols ? 0.0 : problem.cost[id]; });
  tab.refactor();

  result.feasible = true;
  tab.extract(result);
  std::vector<double> y;
  tab.duals([&](int id) { return id >= ncols ? 0.0 : problem.cost[id]; }, y);
  result.duals = std::move(y);
  result.value = tab.objective(problem.cost);
  result.iterations = tab.iterations();
  return result;
}

}  // namespace mmot

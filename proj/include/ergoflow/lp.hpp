// Copyright 2026 The Ergoflow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

/// min c.x subject to A x = b, x >= 0, in exact rational arithmetic.
struct LpProblem {
  std::vector<std::vector<Rat>> rows;  // A, row major
  std::vector<Rat> rhs;                // b
  std::vector<Rat> cost;               // c
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status;
  std::vector<Rat> x;
  Rat objective;
};

namespace detail {

// Dense tableau with Bland's rule; exact pivots, guaranteed termination.
class SimplexTableau {
 public:
  SimplexTableau(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs)
      : rows_(std::move(rows)), rhs_(std::move(rhs)) {
    for (std::size_t i = 0; i < rhs_.size(); ++i) {
      if (rhs_[i] < 0) {
        for (auto& v : rows_[i]) v = -v;
        rhs_[i] = -rhs_[i];
      }
    }
  }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t col_count() const { return rows_.empty() ? 0 : rows_[0].size(); }

  void append_identity_columns() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < rows_.size(); ++j)
        rows_[j].push_back(i == j ? Rat(1) : Rat(0));
      basis_.push_back(col_count() - rows_.size() + i);
    }
  }

  void set_basis(std::vector<std::size_t> basis) { basis_ = std::move(basis); }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t row, std::size_t col) {
    const Rat inv = 1 / rows_[row][col];
    for (auto& v : rows_[row]) v *= inv;
    rhs_[row] *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == row || rows_[i][col] == 0) continue;
      const Rat factor = rows_[i][col];
      for (std::size_t j = 0; j < rows_[i].size(); ++j)
        rows_[i][j] -= factor * rows_[row][j];
      rhs_[i] -= factor * rhs_[row];
    }
    basis_[row] = col;
  }

  /// Runs Bland-rule iterations for the given cost vector restricted to
  /// columns < active_cols. Returns false when unbounded.
  bool optimize(const std::vector<Rat>& cost, std::size_t active_cols) {
    while (true) {
      std::size_t entering = active_cols;
      for (std::size_t j = 0; j < active_cols; ++j) {
        Rat reduced = cost[j];
        for (std::size_t i = 0; i < rows_.size(); ++i)
          reduced -= cost[basis_[i]] * rows_[i][j];
        if (reduced < 0) {
          entering = j;
          break;
        }
      }
      if (entering == active_cols) return true;

      std::size_t leaving = rows_.size();
      Rat best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][entering] <= 0) continue;
        const Rat ratio = rhs_[i] / rows_[i][entering];
        if (leaving == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == rows_.size()) return false;
      pivot(leaving, entering);
    }
  }

  std::vector<Rat> solution(std::size_t var_count) const {
    std::vector<Rat> x(var_count, Rat(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < var_count) x[basis_[i]] = rhs_[i];
    return x;
  }

  const Rat& rhs(std::size_t i) const { return rhs_[i]; }
  const Rat& entry(std::size_t i, std::size_t j) const { return rows_[i][j]; }

  void drop_row(std::size_t row) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(row));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

 private:
  std::vector<std::vector<Rat>> rows_;
  std::vector<Rat> rhs_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpResult simplex_solve(const LpProblem& problem) {
  const std::size_t m = problem.rows.size();
  const std::size_t n = problem.cost.size();
  for (const auto& row : problem.rows) {
    if (row.size() != n) throw ValidationError("LP row width mismatch");
  }
  if (problem.rhs.size() != m) throw ValidationError("LP rhs size mismatch");

  detail::SimplexTableau tableau(problem.rows, problem.rhs);
  tableau.append_identity_columns();

  // Phase 1: minimize the artificial mass.
  std::vector<Rat> phase1_cost(n + m, Rat(0));
  for (std::size_t j = n; j < n + m; ++j) phase1_cost[j] = 1;
  tableau.optimize(phase1_cost, n + m);
  Rat artificial_mass = 0;
  for (std::size_t i = 0; i < tableau.row_count(); ++i)
    if (tableau.basis()[i] >= n) artificial_mass += tableau.rhs(i);
  if (artificial_mass != 0)
    return {LpResult::Status::kInfeasible, {}, Rat(0)};

  // Drive leftover zero-valued artificials out of the basis; a row with no
  // structural pivot is redundant and gets dropped.
  for (std::size_t i = tableau.row_count(); i-- > 0;) {
    if (tableau.basis()[i] < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (tableau.entry(i, j) != 0) {
        col = j;
        break;
      }
    }
    if (col < n) {
      tableau.pivot(i, col);
    } else {
      tableau.drop_row(i);
    }
  }

  std::vector<Rat> phase2_cost(n + m, Rat(0));
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = problem.cost[j];
  if (!tableau.optimize(phase2_cost, n))
    return {LpResult::Status::kUnbounded, {}, Rat(0)};

  std::vector<Rat> x = tableau.solution(n);
  Rat objective = 0;
  for (std::size_t j = 0; j < n; ++j) objective += problem.cost[j] * x[j];
  return {LpResult::Status::kOptimal, std::move(x), std::move(objective)};
}

}  // namespace ergoflow

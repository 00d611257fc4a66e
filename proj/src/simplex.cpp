// Copyright 2026 The c2p2sl Authors
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

#include "c2p2sl/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace c2p2sl::lp {

void Problem::add(std::vector<double> coef, Relation rel, double rhs, std::string name) {
  if (static_cast<int>(coef.size()) != num_vars) throw std::invalid_argument("lp row has wrong width");
  rows.push_back({std::move(coef), rel, rhs, std::move(name)});
}

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostTol = 1e-9;  // reduced costs, on the equilibrated tableau

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const { return a_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs slot holds -objective.
  double& cost(int c) { return at(rows_, c); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> a_;
};

// Minimum-ratio row for column `enter`, or -1 if the column is a ray. Ties
// (common under degeneracy) go to the largest pivot element, then the
// lowest basic index.
int leaving_row(const Tableau& t, const std::vector<int>& basis, int enter) {
  int leave = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < t.rows(); ++r) {
    const double a = t.at(r, enter);
    if (a <= kPivotEps) continue;
    const double ratio = t.rhs(r) / a;
    const double tie = 1e-12 * std::max(1.0, std::abs(best));
    if (leave < 0 || ratio < best - tie) {
      best = ratio;
      leave = r;
    } else if (ratio <= best + tie) {
      const double held = t.at(leave, enter);
      if (a > held * (1.0 + 1e-9) || (a >= held * (1.0 - 1e-9) && basis[r] < basis[leave])) {
        best = std::min(best, ratio);
        leave = r;
      }
    }
  }
  return leave;
}

// Runs simplex iterations on columns [0, usable). The entering column is
// the lowest-index improving column that admits a pivot. Returns false if
// only rays remain improving (unbounded).
bool iterate(Tableau& t, std::vector<int>& basis, int usable, double tol) {
  for (int guard = 0; guard < 100000; ++guard) {
    bool ray = false;
    int enter = -1, leave = -1;
    for (int c = 0; c < usable && enter < 0; ++c) {
      if (t.cost(c) >= -tol) continue;
      leave = leaving_row(t, basis, c);
      if (leave < 0) {
        ray = true;
      } else {
        enter = c;
      }
    }
    if (enter < 0) return !ray;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex iteration limit reached");
}

}  // namespace

Result solve(const Problem& p, double feas_tol) {
  const int n = p.num_vars;
  const int m = static_cast<int>(p.rows.size());

  // Normalize to non-negative right-hand sides.
  std::vector<Row> rows = p.rows;
  for (auto& r : rows) {
    if (r.rhs < 0.0) {
      for (double& c : r.coef) c = -c;
      r.rhs = -r.rhs;
      if (r.relation == Relation::kLessEqual) r.relation = Relation::kGreaterEqual;
      else if (r.relation == Relation::kGreaterEqual) r.relation = Relation::kLessEqual;
    }
  }

  // Equilibrate: unit max-norm rows, then unit max-norm columns. The
  // tolerances below are absolute, so they only make sense after scaling.
  for (auto& r : rows) {
    double big = 0.0;
    for (double c : r.coef) big = std::max(big, std::abs(c));
    if (big == 0.0) continue;
    for (double& c : r.coef) c /= big;
    r.rhs /= big;
  }
  std::vector<double> col_scale(n, 1.0);
  for (int c = 0; c < n; ++c) {
    double big = 0.0;
    for (const auto& r : rows) big = std::max(big, std::abs(r.coef[c]));
    if (big == 0.0) continue;
    col_scale[c] = 1.0 / big;
    for (auto& r : rows) r.coef[c] *= col_scale[c];
  }
  std::vector<double> objective(n);
  for (int c = 0; c < n; ++c) objective[c] = p.objective[c] * col_scale[c];

  int n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::kEqual) ++n_slack;
    if (r.relation != Relation::kLessEqual) ++n_art;
  }
  const int art0 = n + n_slack;
  const int cols = art0 + n_art;
  Tableau t(m, cols);
  std::vector<int> basis(m, -1);
  std::vector<int> art_row;

  int s = n, a = art0;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) t.at(r, c) = rows[r].coef[c];
    t.rhs(r) = rows[r].rhs;
    switch (rows[r].relation) {
      case Relation::kLessEqual:
        t.at(r, s) = 1.0;
        basis[r] = s++;
        break;
      case Relation::kGreaterEqual:
        t.at(r, s++) = -1.0;
        t.at(r, a) = 1.0;
        basis[r] = a++;
        break;
      case Relation::kEqual:
        t.at(r, a) = 1.0;
        basis[r] = a++;
        break;
    }
  }

  Result res;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int r = 0; r < m; ++r) {
      if (basis[r] < art0) continue;
      for (int c = 0; c <= cols; ++c) {
        if (c >= art0 && c < cols) continue;
        t.at(m, c) -= t.at(r, c);
      }
    }
    iterate(t, basis, cols, kCostTol);
    const double infeas = -t.rhs(m);
    if (infeas > feas_tol) {
      for (int r = 0; r < m; ++r) {
        if (basis[r] >= art0 && t.rhs(r) > feas_tol) res.violated.push_back(p.rows[r].name);
      }
      res.status = Status::kInfeasible;
      return res;
    }
    // Drive remaining artificials out of the basis on the largest pivot.
    for (int r = 0; r < m; ++r) {
      if (basis[r] < art0) continue;
      int pc = -1;
      for (int c = 0; c < art0; ++c) {
        if (std::abs(t.at(r, c)) > kPivotEps && (pc < 0 || std::abs(t.at(r, c)) > std::abs(t.at(r, pc)))) pc = c;
      }
      if (pc >= 0) {
        t.pivot(r, pc);
        basis[r] = pc;
      }
    }
  }

  // Phase 2 with the true objective over structural and slack columns.
  for (int c = 0; c <= cols; ++c) t.cost(c) = 0.0;
  for (int c = 0; c < n; ++c) t.cost(c) = objective[c];
  for (int r = 0; r < m; ++r) {
    const int b = basis[r];
    if (b >= art0) continue;  // redundant row with a zero artificial
    const double cb = b < n ? objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (int c = 0; c <= cols; ++c) t.at(m, c) -= cb * t.at(r, c);
  }
  if (!iterate(t, basis, art0, kCostTol)) {
    res.status = Status::kUnbounded;
    return res;
  }
  res.status = Status::kOptimal;
  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) res.x[basis[r]] = std::max(0.0, t.rhs(r)) * col_scale[basis[r]];
  }
  res.objective = 0.0;
  for (int c = 0; c < n; ++c) res.objective += p.objective[c] * res.x[c];
  return res;
}

}  // namespace c2p2sl::lp

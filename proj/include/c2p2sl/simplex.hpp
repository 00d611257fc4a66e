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

#pragma once

// Dense two-phase simplex for small linear programs. Variables are
// non-negative; Bland's rule prevents cycling. Sizes here are a few dozen
// rows, so exactness and determinism matter more than speed.

#include <string>
#include <vector>

namespace c2p2sl::lp {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Row {
  std::vector<double> coef;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

struct Problem {
  int num_vars = 0;
  std::vector<double> objective;  // minimized
  std::vector<Row> rows;

  void add(std::vector<double> coef, Relation rel, double rhs, std::string name = {});
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<std::string> violated;  // rows left unsatisfied by phase 1
};

Result solve(const Problem& problem, double feas_tol = 1e-9);

}  // namespace c2p2sl::lp

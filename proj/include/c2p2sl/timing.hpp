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

// Per-micro-batch stage durations, the pipeline constraint system and the
// BS bubble-rate objective for one (scenario, decision) pair.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "c2p2sl/link_model.hpp"
#include "c2p2sl/scenario.hpp"

namespace c2p2sl {

struct Decision {
  int cut_layer = 1;               // layers 1..cut_layer run on the UEs
  int micro_batches = 1;           // k
  std::vector<int> batch_split;    // samples per UE, sums to the global batch
  std::vector<double> slot_alloc;  // seconds of each frame granted to each UE

  bool operator==(const Decision&) const = default;
};

/// Structural checks: vector sizes, k >= 1, non-negative entries and
/// k <= min positive b_i. Throws ValidationError. Constraint violations
/// (budgets, pipeline conditions) are left to check_constraints.
void validate_decision(const Scenario& scenario, const Decision& decision);

/// Linear coefficients of the stage times at a fixed (cut, k): every UE
/// time is coefficient * b_i (divided by tau_i for the radio stages) and the
/// BS times are coefficient * sum(b).
struct StageCoefficients {
  std::vector<double> fwd;          // t_i^F / b_i
  std::vector<double> bwd;          // t_i^B / b_i
  std::vector<double> up_volume;    // t_i^U * tau_i / b_i
  std::vector<double> down_volume;  // t_i^D * tau_i / b_i
  double bs_fwd = 0.0;              // t_b^F / sum(b)
  double bs_bwd = 0.0;              // t_b^B / sum(b)
  double storage_per_sample = 0.0;  // UE-side FLOPs per sample (fwd + bwd)
};

StageCoefficients stage_coefficients(const Scenario& scenario, std::span<const LinkRates> rates,
                                     int cut_layer, int micro_batches);

struct TimingBreakdown {
  std::vector<double> ue_fwd;   // t_i^F
  std::vector<double> ue_up;    // t_i^U
  std::vector<double> ue_down;  // t_i^D
  std::vector<double> ue_bwd;   // t_i^B
  double bs_fwd = 0.0;          // t_b^F
  double bs_bwd = 0.0;          // t_b^B
  double idle = 0.0;
  double work = 0.0;
  double bubble_rate = 0.0;

  // Maxima over participating UEs (b_i > 0).
  double max_fwd = 0.0;
  double max_up = 0.0;
  double max_down = 0.0;
  double max_bwd = 0.0;
  double max_fwd_up = 0.0;    // max_i (t_i^F + t_i^U)
  double max_down_bwd = 0.0;  // max_i (t_i^D + t_i^B)

  double bs_stage() const { return bs_fwd + bs_bwd; }
  double latency() const { return idle + work; }
};

/// Throws ValidationError for malformed decisions (including a cut outside
/// [1, L-1]) and InfeasibleError when a UE holding data has no time slot.
TimingBreakdown evaluate(const Scenario& scenario, std::span<const LinkRates> rates,
                         const Decision& decision);
TimingBreakdown evaluate(const Scenario& scenario, const Decision& decision);

double bubble_rate(const Scenario& scenario, const Decision& decision);

struct ConstraintCheck {
  std::string name;  // "C1".."C6"
  bool passed = false;
  double slack = 0.0;  // >= 0 when satisfied; negative magnitude of the violation otherwise
  std::string detail;
};

struct ConstraintReport {
  std::vector<ConstraintCheck> checks;

  bool all_passed() const;
  bool passed(std::string_view name) const;
  const ConstraintCheck& at(std::string_view name) const;
  std::vector<std::string> failures() const;
};

/// Relative tolerance used for the time-valued constraints C3, C4 and C6.
inline constexpr double kConstraintRelTol = 1e-9;

ConstraintReport check_constraints(const Scenario& scenario, std::span<const LinkRates> rates,
                                   const Decision& decision);
ConstraintReport check_constraints(const Scenario& scenario, const Decision& decision);

}  // namespace c2p2sl

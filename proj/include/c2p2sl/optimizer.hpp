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

// Alternating optimization of (cut layer, micro-batch count), batch
// partition and TDMA slot allocation to minimize the BS bubble rate.

#include <span>
#include <string>
#include <vector>

#include "c2p2sl/link_model.hpp"
#include "c2p2sl/scenario.hpp"
#include "c2p2sl/timing.hpp"

namespace c2p2sl {

struct SolverTolerances {
  double ao_epsilon = 1e-3;       // stop when successive bubble rates differ by at most this
  double lp_feas_tol = 1e-9;
  double convex_obj_tol = 1e-6;   // relative, slot-allocation objective
};

/// How the micro-batch count is derived from the C4 condition.
enum class KRule {
  kC4Exact,      // eta = BS stage / (max uplink + max downlink); always satisfies C4
  kLiteral  // eta = max over UEs of BS stage / (uplink_i + downlink_i)
};

/// Whether the pipeline pacing conditions hold.
enum class PacingMode {
  // C3 and C4 enforced; the analytic bubble rate is exact and k follows C4.
  kStrict,
  // No cut admits C3 (the uplink cannot keep pace with the BS). C3 and C4
  // are dropped, the objective becomes the simulated BS bubble ratio and
  // k is chosen by exhaustive search against the simulator.
  kRelaxed
};

struct AOOptions {
  SolverTolerances tolerances;
  int max_iterations = 50;
  KRule k_rule = KRule::kC4Exact;
  bool allow_relaxed_pacing = true;
  int bnb_node_limit = 100;
};

/// Micro-batch count for a fixed (cut, b, tau). Throws DomainError when
/// every b_i is zero.
int optimal_k(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
              std::span<const int> batch, std::span<const double> slots, KRule rule = KRule::kC4Exact);
int optimal_k(const Scenario& scenario, int cut_layer, std::span<const int> batch,
              std::span<const double> slots, KRule rule = KRule::kC4Exact);

/// Largest k allowed by the decision invariant: the smallest positive b_i.
int max_micro_batches(std::span<const int> batch);

/// Bubble rate the optimizer minimizes: analytic when strict, simulated
/// (BS idle / makespan) when relaxed.
double objective_bubble_rate(const Scenario& scenario, std::span<const LinkRates> rates, const Decision& decision,
                             PacingMode mode);

/// Micro-batch count for the mode: optimal_k when strict, the simulated
/// arg-min over [1, k_max] (ties to the smaller k) when relaxed.
int choose_micro_batches(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                         std::span<const int> batch, std::span<const double> slots, PacingMode mode,
                         KRule rule = KRule::kC4Exact);

struct SplitChoice {
  int cut_layer = 1;
  int micro_batches = 1;
  double bubble_rate = 0.0;
};

/// Enumerates every cut in [1, L-1] passing C2 (and C3 when strict), takes
/// k from choose_micro_batches and returns the arg-min bubble rate, ties to
/// the smaller cut. Throws InfeasibleError listing the failed constraints
/// per cut.
SplitChoice enumerate_split(const Scenario& scenario, std::span<const LinkRates> rates,
                            std::span<const int> batch, std::span<const double> slots,
                            PacingMode mode = PacingMode::kStrict, KRule rule = KRule::kC4Exact);
SplitChoice enumerate_split(const Scenario& scenario, std::span<const int> batch,
                            std::span<const double> slots);

struct BatchPartition {
  std::vector<int> batch;
  double objective = 0.0;     // t1 + t2 at the integer solution
  double lp_objective = 0.0;  // relaxation bound
  bool certified = false;     // branch and bound closed the gap
};

/// Batch partition subproblem at fixed (cut, k, tau): LP relaxation by the
/// dense simplex, floor/ceiling rounding under sum(b) = b, then branch and
/// bound on the relaxation. Integer solutions keep every b_i either 0 or at
/// least `min_positive` (0 means k). `hint`, a known feasible integer
/// vector, seeds the incumbent.
BatchPartition solve_batch_partition(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                                     int micro_batches, std::span<const double> slots,
                                     PacingMode mode = PacingMode::kStrict,
                                     const SolverTolerances& tol = {}, std::span<const int> hint = {},
                                     int node_limit = 4000, int min_positive = 0);
std::vector<int> solve_batch_partition(const Scenario& scenario, int cut_layer, int micro_batches,
                                       std::span<const double> slots);

/// Objective max_i(t_i^F + t_i^U) + max_i(t_i^D + t_i^B) of a candidate
/// partition, or +inf if it breaks C2, C5, the 0-or-at-least-`min_positive`
/// rule or, when strict, C3 and the auxiliary form of C4.
double batch_partition_objective(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                                 int micro_batches, std::span<const double> slots, std::span<const int> batch,
                                 PacingMode mode = PacingMode::kStrict, int min_positive = 0);

struct SlotAllocation {
  std::vector<double> slots;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
  double objective = 0.0;  // t1 + t2
};

/// Slot allocation subproblem at fixed (cut, k, b), reduced to the four
/// auxiliary times: each slot is the smallest tau_i meeting the uplink and
/// downlink bounds, and t1 + t2 is minimized under sum(tau) <= T.
/// Throws InfeasibleError when even unbounded t1, t2 exhaust the frame.
SlotAllocation solve_slot_allocation(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                                     int micro_batches, std::span<const int> batch,
                                     PacingMode mode = PacingMode::kStrict, const SolverTolerances& tol = {});
std::vector<double> solve_slot_allocation(const Scenario& scenario, int cut_layer, int micro_batches,
                                          std::span<const int> batch);

/// Minimum tau_i meeting every lower bound at the given auxiliary times,
/// for each UE (0 for UEs without data). Infinite if a bound is unattainable.
std::vector<double> minimal_slots(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                                  int micro_batches, std::span<const int> batch, double t1, double t2,
                                  double t3, double t4, PacingMode mode = PacingMode::kStrict);

struct AOStep {
  int iteration = 0;
  double bubble_rate = 0.0;
};

struct AOState {
  int iteration = 0;
  Decision decision;
  double bubble_rate = 0.0;
  double initial_bubble_rate = 0.0;
  Decision initial_decision;
  std::vector<AOStep> history;
  PacingMode mode = PacingMode::kStrict;
  bool converged = false;
};

/// l = round(L/2), k = 1, uniform b and tau.
Decision default_initial_decision(const Scenario& scenario);

/// Runs {enumerate_split -> batch partition -> slot allocation} until the
/// bubble rate changes by at most epsilon or the iteration cap is reached.
/// An unusable initializer is repaired first; InfeasibleError if no cut
/// admits a decision meeting C2 (and C3 unless relaxed pacing is allowed).
AOState run_ao(const Scenario& scenario, const AOOptions& options, const Decision& init);
AOState run_ao(const Scenario& scenario, const AOOptions& options = {});

const char* to_string(PacingMode mode);

}  // namespace c2p2sl

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

// Random instances and brute-force oracles shared by the unit tests and the
// acceptance runner. The oracles only use the timing module (stage times and
// constraint checks), never the optimizer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "c2p2sl/link_model.hpp"
#include "c2p2sl/optimizer.hpp"
#include "c2p2sl/scenario.hpp"
#include "c2p2sl/timing.hpp"

namespace c2p2sl::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Instance {
  Scenario scenario;
  std::vector<LinkRates> rates;
  Decision decision;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random scenario with n in [1, max_ues], bandwidth in [50 MHz, 1 GHz] and
/// a batch in [n, max_batch]; b is a random composition with every entry
/// positive, tau a random split of the frame, the cut uniform and k = 1.
inline Instance random_instance(std::uint64_t seed, int max_ues = 6, int max_batch = 256) {
  std::mt19937_64 rng(seed);
  const int n = uniform_int(rng, 1, max_ues);
  Instance inst;
  Scenario& s = inst.scenario;
  s = random_scenario(n, rng());
  s.channel.bandwidth = uniform(rng, 50e6, 1e9);
  s.total_batch = uniform_int(rng, n, std::max(n, max_batch));
  // Generous storage so C2 rarely decides the outcome.
  for (auto& ue : s.ues) ue.storage_budget *= 50.0;
  inst.rates = link_rates(s);

  Decision& d = inst.decision;
  d.cut_layer = uniform_int(rng, 1, s.model.num_layers() - 1);
  d.micro_batches = 1;
  d.batch_split.assign(n, 1);
  for (int j = n; j < s.total_batch; ++j) d.batch_split[uniform_int(rng, 0, n - 1)] += 1;
  std::vector<double> weights(n);
  double sum = 0.0;
  for (double& w : weights) sum += (w = uniform(rng, 0.1, 1.0));
  d.slot_alloc.resize(n);
  for (int i = 0; i < n; ++i) d.slot_alloc[i] = s.channel.frame_length * weights[i] / sum * (1.0 - 1e-12);
  return inst;
}

/// Largest k in [1, min positive b_i] for which C4 holds.
inline int brute_force_k(const Scenario& s, std::span<const LinkRates> rates, int cut, std::span<const int> batch,
                         std::span<const double> slots) {
  int k_max = std::numeric_limits<int>::max();
  for (int b : batch) {
    if (b > 0) k_max = std::min(k_max, b);
  }
  int best = 1;
  for (int k = 1; k <= k_max; ++k) {
    const Decision d{cut, k, {batch.begin(), batch.end()}, {slots.begin(), slots.end()}};
    if (check_constraints(s, rates, d).passed("C4")) best = k;
  }
  return best;
}

/// Calls `visit` on every composition of `total` into `n` non-negative parts.
inline void for_each_composition(int total, int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parts(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      parts[i] = left;
      visit(parts);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      parts[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
}

/// Exhaustive integer batch partition: minimum of max(F+U) + max(D+B) over
/// compositions meeting C2, C5, the 0-or-at-least-k rule and, when strict,
/// C3 and C4. Returns +inf if none qualifies.
inline double exhaustive_partition(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                                   std::span<const double> slots, PacingMode mode) {
  double best = kInf;
  for_each_composition(s.total_batch, s.num_ues(), [&](const std::vector<int>& b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] > 0 && (b[i] < k || slots[i] <= 0.0)) return;
    }
    const Decision d{cut, k, b, {slots.begin(), slots.end()}};
    const ConstraintReport r = check_constraints(s, rates, d);
    if (!r.passed("C2") || !r.passed("C5")) return;
    if (mode == PacingMode::kStrict && (!r.passed("C3") || !r.passed("C4"))) return;
    const TimingBreakdown t = evaluate(s, rates, d);
    best = std::min(best, t.max_fwd_up + t.max_down_bwd);
  });
  return best;
}

/// Per-UE data of the slot subproblem, rebuilt from the timing module.
struct SlotTerms {
  std::vector<double> fwd, bwd, up, down;  // up/down: radio time * tau
  double bs = 0.0;                         // t_b^F + t_b^B
  double frame = 0.0;
  int k = 1;
};

inline SlotTerms slot_terms(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                            std::span<const int> batch) {
  const int n = s.num_ues();
  const Decision d{cut, k, {batch.begin(), batch.end()}, std::vector<double>(n, 1.0)};
  const TimingBreakdown t = evaluate(s, rates, d);
  SlotTerms out;
  out.fwd = t.ue_fwd;
  out.bwd = t.ue_bwd;
  out.up = t.ue_up;  // tau = 1 s, so this is the radio volume term
  out.down = t.ue_down;
  out.bs = t.bs_stage();
  out.frame = s.channel.frame_length;
  out.k = k;
  return out;
}

/// Total slot demand at (t1..t4), +inf when unattainable.
inline double slot_demand(const SlotTerms& p, double t1, double t2, double t3, double t4, bool strict) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.fwd.size(); ++i) {
    if (p.up[i] <= 0.0 && p.down[i] <= 0.0) continue;
    const double up_den = std::min({t3, strict ? p.bs : kInf, t1 - p.fwd[i]});
    const double down_den = std::min(t4, t2 - p.bwd[i]);
    if (up_den <= 0.0 || down_den <= 0.0) return kInf;
    sum += std::max(p.up[i] / up_den, p.down[i] / down_den);
  }
  return sum;
}

/// Refined 4-axis grid search for min t1 + t2 subject to the slot budget
/// and, for k > 1 when strict, t3 + t4 <= k * bs / (k - 1). Each level
/// re-grids t1 and t2 around the incumbent; t3 and t4 keep their full range.
inline double grid_slot_objective(const SlotTerms& p, bool strict, int points = 24, int levels = 16) {
  double max_f = 0.0, max_b = 0.0, sum_up = 0.0, sum_down = 0.0;
  for (std::size_t i = 0; i < p.fwd.size(); ++i) {
    if (p.up[i] <= 0.0 && p.down[i] <= 0.0) continue;
    max_f = std::max(max_f, p.fwd[i]);
    max_b = std::max(max_b, p.bwd[i]);
    sum_up += p.up[i];
    sum_down += p.down[i];
  }
  // Every UE owning the whole frame bounds each radio time from below; the
  // search box spans a generous multiple of that.
  const double span = 8.0 * (sum_up + sum_down) / p.frame + 8.0 * (max_f + max_b) + 1e-9;
  const double budget = strict && p.k > 1 ? p.k * p.bs / (p.k - 1) : kInf;
  double lo[4] = {max_f, max_b, 0.0, 0.0};
  // Past the C4 budget (and, when strict, past the BS stage for t3) the
  // radio axes are infeasible or gain nothing.
  const double cap3 = std::min({span, budget, strict ? p.bs : kInf});
  const double cap4 = std::min(span, budget);
  double hi[4] = {max_f + span, max_b + span, cap3, cap4};
  double best = kInf;
  double arg[4] = {hi[0], hi[1], hi[2], hi[3]};
  for (int level = 0; level < levels; ++level) {
    double step[4];
    for (int a = 0; a < 4; ++a) step[a] = (hi[a] - lo[a]) / (points - 1);
    for (int i1 = 0; i1 < points; ++i1) {
      const double t1 = lo[0] + i1 * step[0];
      for (int i2 = 0; i2 < points; ++i2) {
        const double t2 = lo[1] + i2 * step[1];
        if (t1 + t2 >= best) break;
        for (int i3 = 0; i3 < points; ++i3) {
          const double t3 = lo[2] + i3 * step[2];
          // Demand falls as t4 grows, so the t4 axis also samples the
          // budget line itself; thin feasible slivers sit right on it.
          for (int i4 = 0; i4 <= points; ++i4) {
            const double t4 = i4 < points ? lo[3] + i4 * step[3] : std::min(hi[3], budget - t3);
            if (t3 + t4 > budget && i4 < points) continue;
            if (t4 < 0.0) break;
            if (slot_demand(p, t1, t2, t3, t4, strict) <= p.frame) {
              best = t1 + t2;
              arg[0] = t1, arg[1] = t2, arg[2] = t3, arg[3] = t4;
              break;
            }
          }
        }
      }
    }
    if (!std::isfinite(best)) return best;
    // Zoom in on the objective axes only. Shrinking the radio axes as well
    // can lock onto a poor (t3, t4) split and stall above the optimum.
    for (int a = 0; a < 2; ++a) {
      lo[a] = std::max(a == 0 ? max_f : max_b, arg[a] - 6.0 * step[a]);
      hi[a] = arg[a] + 6.0 * step[a];
    }
  }
  return best;
}

/// Exhaustive (cut, k) grid: minimum analytic bubble rate over cuts passing
/// C2 and C3 and every k in [1, min positive b_i] passing C4. Ties go to the
/// smaller cut, then the larger k.
struct GridChoice {
  int cut = 0;
  int k = 0;
  double bubble_rate = kInf;
};

inline GridChoice grid_split(const Scenario& s, std::span<const LinkRates> rates, std::span<const int> batch,
                             std::span<const double> slots) {
  GridChoice best;
  int k_max = std::numeric_limits<int>::max();
  for (int b : batch) {
    if (b > 0) k_max = std::min(k_max, b);
  }
  for (int cut = 1; cut <= s.model.num_layers() - 1; ++cut) {
    for (int k = 1; k <= k_max; ++k) {
      const Decision d{cut, k, {batch.begin(), batch.end()}, {slots.begin(), slots.end()}};
      const ConstraintReport r = check_constraints(s, rates, d);
      if (!r.passed("C2") || !r.passed("C3") || !r.passed("C4")) continue;
      const double br = evaluate(s, rates, d).bubble_rate;
      if (br < best.bubble_rate - 1e-15 || (std::abs(br - best.bubble_rate) <= 1e-15 && cut == best.cut)) {
        best = {cut, k, br};
      }
    }
  }
  return best;
}

/// Pacing conditions under which the event model provably reproduces
/// idle + work: C3 and C4, plus the downlink and UE backward stages keeping
/// pace with the BS and the forward cadence max(F, U) fitting the C4 budget.
inline bool extended_pacing(const TimingBreakdown& t, int k) {
  const double w = t.bs_stage();
  const double fwd_pace = std::max(t.max_fwd, t.max_up);
  const double bwd_pace = std::max(t.max_down, t.max_bwd);
  return t.max_fwd <= w && t.max_up <= w && t.max_down <= w && t.max_bwd <= w &&
         (k - 1) * (t.max_up + t.max_down) <= k * w && (k - 1) * (fwd_pace + bwd_pace) <= k * w &&
         (k - 1) * (t.max_fwd + t.max_bwd) <= k * w;
}

/// Random instance with k drawn from [1, min(min b_i, k_cap)].
inline Instance random_pipelined_instance(std::uint64_t seed, int max_ues = 4, int max_batch = 200, int k_cap = 40) {
  Instance inst = random_instance(seed, max_ues, max_batch);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int k_max = std::min(*std::min_element(inst.decision.batch_split.begin(), inst.decision.batch_split.end()),
                             k_cap);
  inst.decision.micro_batches = uniform_int(rng, 1, std::max(1, k_max));
  return inst;
}

}  // namespace c2p2sl::testing

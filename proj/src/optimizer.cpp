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

#include "c2p2sl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <bit>
#include <numeric>
#include <optional>

#include "c2p2sl/errors.hpp"
#include "c2p2sl/schedule_sim.hpp"
#include "c2p2sl/simplex.hpp"

namespace c2p2sl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Decision make_decision(int cut, int k, std::span<const int> batch, std::span<const double> slots) {
  return Decision{cut, k, {batch.begin(), batch.end()}, {slots.begin(), slots.end()}};
}

bool within(double lhs, double rhs) { return lhs <= rhs + kConstraintRelTol * std::abs(rhs); }

}  // namespace

const char* to_string(PacingMode mode) { return mode == PacingMode::kStrict ? "strict" : "relaxed"; }

// ---------------------------------------------------------------------------
// Micro-batch count.

int max_micro_batches(std::span<const int> batch) {
  int k = 0;
  for (int b : batch) {
    if (b > 0 && (k == 0 || b < k)) k = b;
  }
  if (k == 0) throw DomainError("optimal_k: every UE has an empty batch");
  return k;
}

int optimal_k(const Scenario& s, std::span<const LinkRates> rates, int cut, std::span<const int> batch,
              std::span<const double> slots, KRule rule) {
  const int k_max = max_micro_batches(batch);
  Decision d = make_decision(cut, 1, batch, slots);
  const TimingBreakdown t = evaluate(s, rates, d);
  const double bs = t.bs_stage();

  double comm = 0.0;
  if (rule == KRule::kC4Exact) {
    comm = t.max_up + t.max_down;
  } else {
    comm = kInf;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch[i] > 0) comm = std::min(comm, t.ue_up[i] + t.ue_down[i]);
    }
  }
  const double eta = comm > 0.0 ? bs / comm : kInf;
  int k = k_max;
  if (eta < 1.0) {
    const double bound = 1.0 / (1.0 - eta);
    k = bound >= k_max ? k_max : std::max(1, static_cast<int>(std::floor(bound)));
  }
  if (rule == KRule::kLiteral) return k;

  // floor(1 / (1 - eta)) can land one off the true boundary in floating
  // point; settle it against the C4 check itself.
  auto c4 = [&](int kk) {
    return within((kk - 1) * (t.max_up + t.max_down) / kk, bs);
  };
  while (k < k_max && c4(k + 1)) ++k;
  while (k > 1 && !c4(k)) --k;
  return k;
}

int optimal_k(const Scenario& s, int cut, std::span<const int> batch, std::span<const double> slots, KRule rule) {
  const auto rates = link_rates(s);
  return optimal_k(s, rates, cut, batch, slots, rule);
}

double objective_bubble_rate(const Scenario& s, std::span<const LinkRates> rates, const Decision& d,
                             PacingMode mode) {
  if (mode == PacingMode::kStrict) return evaluate(s, rates, d).bubble_rate;
  const ScheduleSummary sim = summarize_schedule(s, rates, d);
  return sim.bs_idle / sim.makespan;
}

int choose_micro_batches(const Scenario& s, std::span<const LinkRates> rates, int cut, std::span<const int> batch,
                         std::span<const double> slots, PacingMode mode, KRule rule) {
  if (mode == PacingMode::kStrict) return optimal_k(s, rates, cut, batch, slots, rule);
  const int k_max = max_micro_batches(batch);
  int best_k = 1;
  double best = kInf;
  for (int k = 1; k <= k_max; ++k) {
    const double br = objective_bubble_rate(s, rates, make_decision(cut, k, batch, slots), mode);
    if (br < best) {
      best = br;
      best_k = k;
    }
  }
  return best_k;
}

// ---------------------------------------------------------------------------
// Cut layer enumeration.

SplitChoice enumerate_split(const Scenario& s, std::span<const LinkRates> rates, std::span<const int> batch,
                            std::span<const double> slots, PacingMode mode, KRule rule) {
  const int L = s.model.num_layers();
  SplitChoice best;
  bool found = false;
  std::vector<std::string> diagnostics;
  for (int cut = 1; cut <= L - 1; ++cut) {
    const ConstraintReport report = check_constraints(s, rates, make_decision(cut, 1, batch, slots));
    std::vector<std::string> failed;
    for (const char* name : {"C2", "C5", "C6"}) {
      if (!report.passed(name)) failed.push_back(report.at(name).name + " (" + report.at(name).detail + ")");
    }
    if (mode == PacingMode::kStrict && !report.passed("C3")) {
      failed.push_back("C3 (" + report.at("C3").detail + ")");
    }
    if (!failed.empty()) {
      std::string line = "cut " + std::to_string(cut) + ":";
      for (const auto& f : failed) line += " " + f;
      diagnostics.push_back(std::move(line));
      continue;
    }
    const int k = choose_micro_batches(s, rates, cut, batch, slots, mode, rule);
    const double br = objective_bubble_rate(s, rates, make_decision(cut, k, batch, slots), mode);
    if (!found || br < best.bubble_rate) {
      best = {cut, k, br};
      found = true;
    }
  }
  if (!found) throw InfeasibleError("no cut layer satisfies the split constraints", std::move(diagnostics));
  return best;
}

SplitChoice enumerate_split(const Scenario& s, std::span<const int> batch, std::span<const double> slots) {
  const auto rates = link_rates(s);
  return enumerate_split(s, rates, batch, slots);
}

// ---------------------------------------------------------------------------
// Batch partition.

double batch_partition_objective(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                                 std::span<const double> slots, std::span<const int> batch, PacingMode mode,
                                 int min_positive) {
  const StageCoefficients c = stage_coefficients(s, rates, cut, k);
  const int floor_b = std::max(k, min_positive);
  long total = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i] < 0 || (batch[i] > 0 && batch[i] < floor_b)) return kInf;
    if (batch[i] > 0 && slots[i] <= 0.0) return kInf;
    total += batch[i];
  }
  if (total != s.total_batch) return kInf;
  const double w = (c.bs_fwd + c.bs_bwd) * static_cast<double>(total);
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double b = batch[i];
    if (b == 0.0) continue;
    if (c.storage_per_sample * b > s.ues[i].storage_budget * (1.0 + 1e-12)) return kInf;
    const double fwd = c.fwd[i] * b, up = c.up_volume[i] * b / slots[i];
    const double down = c.down_volume[i] * b / slots[i], bwd = c.bwd[i] * b;
    if (mode == PacingMode::kStrict && (!within(fwd, w) || !within(up, w))) return kInf;
    t1 = std::max(t1, fwd + up);
    t2 = std::max(t2, down + bwd);
    t3 = std::max(t3, up);
    t4 = std::max(t4, down);
  }
  if (mode == PacingMode::kStrict && !within((k - 1) * (t3 + t4), k * w)) return kInf;
  return t1 + t2;
}

namespace {

struct PartitionLp {
  lp::Problem base;
  int n = 0;
};

PartitionLp build_partition_lp(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                               std::span<const double> slots, PacingMode mode) {
  const StageCoefficients c = stage_coefficients(s, rates, cut, k);
  const int n = s.num_ues();
  const int nv = n + 4;
  const int t1 = n, t2 = n + 1, t3 = n + 2, t4 = n + 3;
  const double w = (c.bs_fwd + c.bs_bwd) * s.total_batch;

  PartitionLp out;
  out.n = n;
  lp::Problem& p = out.base;
  p.num_vars = nv;
  p.objective.assign(nv, 0.0);
  p.objective[t1] = 1.0;
  p.objective[t2] = 1.0;

  auto row = [nv]() { return std::vector<double>(nv, 0.0); };
  std::vector<double> sum = row();
  for (int i = 0; i < n; ++i) {
    const std::string tag = "[" + std::to_string(i) + "]";
    sum[i] = 1.0;
    if (slots[i] <= 0.0) {
      auto r = row();
      r[i] = 1.0;
      p.add(r, lp::Relation::kLessEqual, 0.0, "no-slot" + tag);
      continue;
    }
    const double up = c.up_volume[i] / slots[i];
    const double down = c.down_volume[i] / slots[i];
    {
      auto r = row();
      r[i] = c.storage_per_sample;
      p.add(r, lp::Relation::kLessEqual, s.ues[i].storage_budget, "C2" + tag);
    }
    if (mode == PacingMode::kStrict) {
      auto rf = row();
      rf[i] = c.fwd[i];
      p.add(rf, lp::Relation::kLessEqual, w, "C3-fwd" + tag);
      auto ru = row();
      ru[i] = up;
      p.add(ru, lp::Relation::kLessEqual, w, "C3-up" + tag);
    }
    auto r7 = row();
    r7[i] = c.fwd[i] + up;
    r7[t1] = -1.0;
    p.add(r7, lp::Relation::kLessEqual, 0.0, "C7" + tag);
    auto r8 = row();
    r8[i] = down + c.bwd[i];
    r8[t2] = -1.0;
    p.add(r8, lp::Relation::kLessEqual, 0.0, "C8" + tag);
    auto r9 = row();
    r9[i] = up;
    r9[t3] = -1.0;
    p.add(r9, lp::Relation::kLessEqual, 0.0, "C9" + tag);
    auto r10 = row();
    r10[i] = down;
    r10[t4] = -1.0;
    p.add(r10, lp::Relation::kLessEqual, 0.0, "C10" + tag);
  }
  p.add(sum, lp::Relation::kEqual, s.total_batch, "C5");
  if (k > 1 && mode == PacingMode::kStrict) {
    auto r = row();
    r[t3] = k - 1.0;
    r[t4] = k - 1.0;
    p.add(r, lp::Relation::kLessEqual, k * w, "C4~");
  }
  return out;
}

struct Bounds {
  std::vector<int> lo, hi;  // hi < 0 means unbounded
};

lp::Result solve_node(const PartitionLp& model, const Bounds& bounds, double feas_tol) {
  lp::Problem p = model.base;
  for (int i = 0; i < model.n; ++i) {
    if (bounds.lo[i] > 0) {
      std::vector<double> r(p.num_vars, 0.0);
      r[i] = 1.0;
      p.add(r, lp::Relation::kGreaterEqual, bounds.lo[i], "branch-lo");
    }
    if (bounds.hi[i] >= 0) {
      std::vector<double> r(p.num_vars, 0.0);
      r[i] = 1.0;
      p.add(r, lp::Relation::kLessEqual, bounds.hi[i], "branch-hi");
    }
  }
  return lp::solve(p, feas_tol);
}

}  // namespace

BatchPartition solve_batch_partition(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                                     std::span<const double> slots, PacingMode mode, const SolverTolerances& tol,
                                     std::span<const int> hint, int node_limit, int min_positive) {
  const PartitionLp model = build_partition_lp(s, rates, cut, k, slots, mode);
  const int n = model.n;
  const int floor_b = std::max(k, min_positive);
  Bounds root{std::vector<int>(n, 0), std::vector<int>(n, -1)};
  const lp::Result relaxed = solve_node(model, root, tol.lp_feas_tol);
  if (relaxed.status != lp::Status::kOptimal) {
    throw InfeasibleError("batch partition LP is infeasible", relaxed.violated);
  }

  BatchPartition best;
  best.lp_objective = relaxed.objective;
  best.objective = kInf;
  auto consider = [&](const std::vector<int>& cand) {
    const double obj = batch_partition_objective(s, rates, cut, k, slots, cand, mode, floor_b);
    if (obj < best.objective) {
      best.objective = obj;
      best.batch = cand;
    }
  };

  if (!hint.empty()) consider({hint.begin(), hint.end()});

  // Floor/ceiling rounding of the relaxation under sum(b) = b: largest
  // fractional parts take the ceilings first, then the rest of the lattice.
  {
    std::vector<int> floors(n);
    std::vector<std::pair<double, int>> frac;
    long sum = 0;
    for (int i = 0; i < n; ++i) {
      const double x = relaxed.x[i];
      floors[i] = static_cast<int>(std::floor(x + 1e-9));
      sum += floors[i];
      const double f = x - floors[i];
      if (f > 1e-9) frac.push_back({f, i});
    }
    std::stable_sort(frac.begin(), frac.end(), [](auto& a, auto& b) { return a.first > b.first; });
    const long residue = s.total_batch - sum;
    if (residue >= 0 && residue <= static_cast<long>(frac.size())) {
      std::vector<int> cand = floors;
      for (long j = 0; j < residue; ++j) cand[frac[j].second] += 1;
      consider(cand);
      const std::size_t m = frac.size();
      if (m <= 20) {
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
          if (std::popcount(mask) != residue) continue;
          std::vector<int> c2 = floors;
          for (std::size_t j = 0; j < m; ++j) {
            if (mask & (1u << j)) c2[frac[j].second] += 1;
          }
          consider(c2);
        }
      }
    }
  }

  // Depth-first branch and bound on the relaxation.
  std::vector<Bounds> stack{root};
  int nodes = 0;
  bool exhausted = true;
  while (!stack.empty()) {
    if (nodes >= node_limit) {
      exhausted = false;
      break;
    }
    Bounds node = std::move(stack.back());
    stack.pop_back();
    const lp::Result r = nodes == 0 ? relaxed : solve_node(model, node, tol.lp_feas_tol);
    ++nodes;
    if (r.status != lp::Status::kOptimal) continue;
    if (r.objective >= best.objective - 1e-12 * std::max(1.0, std::abs(best.objective))) continue;

    int branch = -1;
    bool zero_or_k = false;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = r.x[i];
      const double f = std::abs(x - std::round(x));
      if (f > 1e-7 && f > worst) {
        worst = f;
        branch = i;
      }
    }
    if (branch < 0) {
      for (int i = 0; i < n; ++i) {
        const long xi = std::lround(r.x[i]);
        if (xi > 0 && xi < floor_b) {
          branch = i;
          zero_or_k = true;
          break;
        }
      }
    }
    if (branch < 0) {
      std::vector<int> cand(n);
      for (int i = 0; i < n; ++i) cand[i] = static_cast<int>(std::lround(r.x[i]));
      consider(cand);
      continue;
    }
    Bounds down = node, up = node;
    const double x = r.x[branch];
    if (zero_or_k || (x > 0.0 && x < floor_b)) {
      down.hi[branch] = 0;
      up.lo[branch] = std::max(up.lo[branch], floor_b);
    } else {
      down.hi[branch] = static_cast<int>(std::floor(x));
      up.lo[branch] = static_cast<int>(std::ceil(x));
    }
    // Explore the side nearer the relaxed value first.
    if (x - std::floor(x) >= 0.5) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }
  if (best.batch.empty()) {
    throw InfeasibleError("no integer batch partition satisfies the constraints", {"branch and bound found no point"});
  }
  best.certified = exhausted;
  return best;
}

std::vector<int> solve_batch_partition(const Scenario& s, int cut, int k, std::span<const double> slots) {
  const auto rates = link_rates(s);
  return solve_batch_partition(s, rates, cut, k, slots).batch;
}

// ---------------------------------------------------------------------------
// Slot allocation.

namespace {

double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (!(den > 0.0)) return kInf;
  return num / den;
}

// Reduced slot problem over the UEs holding data.
class SlotProblem {
 public:
  SlotProblem(const Scenario& s, std::span<const LinkRates> rates, int cut, int k, std::span<const int> batch,
              PacingMode mode)
      : strict_(mode == PacingMode::kStrict), frame_(s.channel.frame_length) {
    const StageCoefficients c = stage_coefficients(s, rates, cut, k);
    long total = 0;
    for (int b : batch) total += b;
    bs_ = (c.bs_fwd + c.bs_bwd) * static_cast<double>(total);
    budget_ = k > 1 && strict_ ? k * bs_ / (k - 1) : kInf;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch[i] <= 0) continue;
      const double b = batch[i];
      index_.push_back(static_cast<int>(i));
      fwd_.push_back(c.fwd[i] * b);
      bwd_.push_back(c.bwd[i] * b);
      up_.push_back(c.up_volume[i] * b);
      down_.push_back(c.down_volume[i] * b);
    }
  }

  double frame() const { return frame_; }
  double max_fwd() const { return *std::max_element(fwd_.begin(), fwd_.end()); }
  double max_bwd() const { return *std::max_element(bwd_.begin(), bwd_.end()); }

  double slot(std::size_t j, double t1, double t2, double t3, double t4) const {
    const double up_cap = std::min({t3, strict_ ? bs_ : kInf, t1 - fwd_[j]});
    const double down_cap = std::min(t4, t2 - bwd_[j]);
    return std::max(ratio(up_[j], up_cap), ratio(down_[j], down_cap));
  }

  double total(double t1, double t2, double t3, double t4) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < up_.size(); ++j) sum += slot(j, t1, t2, t3, t4);
    return sum;
  }

  // Minimum over the t3/t4 split of the total slot demand at (t1, t2).
  std::pair<double, double> best_split(double t1, double t2) const {
    if (!std::isfinite(budget_)) return {total(t1, t2, kInf, kInf), kInf};
    double up_need = 0.0, down_need = 0.0;
    for (std::size_t j = 0; j < up_.size(); ++j) {
      if (up_[j] > 0.0) up_need = std::max(up_need, std::min(strict_ ? bs_ : kInf, t1 - fwd_[j]));
      if (down_[j] > 0.0) down_need = std::max(down_need, t2 - bwd_[j]);
    }
    if (up_need + down_need <= budget_) {
      const double t3 = up_need;
      return {total(t1, t2, t3, budget_ - t3), t3};
    }
    // Convex in t3 on [budget - down_need, up_need] intersected with [0, budget].
    double a = std::max(0.0, budget_ - down_need), b = std::min(budget_, up_need);
    if (!(a < b)) a = 0.0, b = budget_;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = total(t1, t2, x1, budget_ - x1), f2 = total(t1, t2, x2, budget_ - x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * budget_; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = total(t1, t2, x1, budget_ - x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = total(t1, t2, x2, budget_ - x2);
      }
    }
    return f1 <= f2 ? std::pair{f1, x1} : std::pair{f2, x2};
  }

  bool feasible(double t1, double t2) const { return best_split(t1, t2).first <= frame_; }

  // Smallest t2 keeping (t1, t2) feasible; +inf if none.
  double min_t2(double t1) const {
    if (!feasible(t1, kInf)) return kInf;
    const double lo0 = max_bwd();
    double lo = lo0, hi = lo0 + std::max(1e-9, lo0);
    for (int it = 0; it < 2000 && !feasible(t1, hi); ++it) hi = lo0 + 2.0 * (hi - lo0);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(t1, mid) ? hi : lo) = mid;
    }
    return hi;
  }

  const std::vector<int>& index() const { return index_; }
  double budget() const { return budget_; }
  double up(std::size_t j) const { return up_[j]; }
  double down(std::size_t j) const { return down_[j]; }
  double fwd(std::size_t j) const { return fwd_[j]; }
  double bwd(std::size_t j) const { return bwd_[j]; }

 private:
  bool strict_;
  double frame_;
  double bs_ = 0.0;
  double budget_ = kInf;
  std::vector<int> index_;
  std::vector<double> fwd_, bwd_, up_, down_;
};

}  // namespace

std::vector<double> minimal_slots(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                                  std::span<const int> batch, double t1, double t2, double t3, double t4,
                                  PacingMode mode) {
  const SlotProblem p(s, rates, cut, k, batch, mode);
  std::vector<double> out(batch.size(), 0.0);
  for (std::size_t j = 0; j < p.index().size(); ++j) out[p.index()[j]] = p.slot(j, t1, t2, t3, t4);
  return out;
}

SlotAllocation solve_slot_allocation(const Scenario& s, std::span<const LinkRates> rates, int cut, int k,
                                     std::span<const int> batch, PacingMode mode, const SolverTolerances& tol) {
  max_micro_batches(batch);
  const SlotProblem p(s, rates, cut, k, batch, mode);
  if (!p.feasible(kInf, kInf)) {
    throw InfeasibleError("slot allocation infeasible: spectrum budget exhausted",
                          {"minimum total slot demand exceeds the frame length"});
  }

  // Smallest feasible t1.
  const double f0 = p.max_fwd();
  double lo = f0, hi = f0 + std::max(1e-9, f0);
  for (int it = 0; it < 2000 && !p.feasible(hi, kInf); ++it) hi = f0 + 2.0 * (hi - f0);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p.feasible(mid, kInf) ? hi : lo) = mid;
  }
  const double t1_min = hi;

  // t1 + min_t2(t1) is convex; beyond t1_min + (min_t2(t1_min) - max_bwd) it
  // can only exceed its value at t1_min.
  auto objective = [&](double t1) { return t1 + p.min_t2(t1); };
  const double start = objective(t1_min);
  double a = t1_min, b = t1_min + (start - t1_min - p.max_bwd());
  if (!std::isfinite(b) || b <= a) b = a + std::max(1e-9, a);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double g1 = objective(x1), g2 = objective(x2);
  const double stop = std::min(tol.convex_obj_tol, 1e-9);
  for (int it = 0; it < 300 && (b - a) > stop * 1e-3 * std::max(a, 1e-12); ++it) {
    if (g1 <= g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - gr * (b - a);
      g1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + gr * (b - a);
      g2 = objective(x2);
    }
  }
  double t1 = g1 <= g2 ? x1 : x2;
  if (start <= std::min(g1, g2)) t1 = t1_min;
  const double t2 = p.min_t2(t1);
  const double t3 = p.best_split(t1, t2).second;
  const double t4 = std::isfinite(p.budget()) ? p.budget() - t3 : kInf;

  SlotAllocation out;
  out.slots.assign(batch.size(), 0.0);
  double demand = 0.0;
  for (std::size_t j = 0; j < p.index().size(); ++j) {
    const double g = p.slot(j, t1, t2, t3, t4);
    out.slots[p.index()[j]] = g;
    demand += g;
  }
  // Hand any spare frame time back proportionally; this only shortens stages.
  const double T = p.frame();
  if (demand > 0.0) {
    const double scale = T / demand;
    for (double& tau : out.slots) tau *= scale;
    double sum = std::accumulate(out.slots.begin(), out.slots.end(), 0.0);
    while (sum > T) {
      for (double& tau : out.slots) tau *= (1.0 - 4e-16);
      sum = std::accumulate(out.slots.begin(), out.slots.end(), 0.0);
    }
  }
  for (std::size_t j = 0; j < p.index().size(); ++j) {
    const double tau = out.slots[p.index()[j]];
    const double up = ratio(p.up(j), tau), down = ratio(p.down(j), tau);
    out.t1 = std::max(out.t1, p.fwd(j) + up);
    out.t2 = std::max(out.t2, down + p.bwd(j));
    out.t3 = std::max(out.t3, up);
    out.t4 = std::max(out.t4, down);
  }
  out.objective = out.t1 + out.t2;
  return out;
}

std::vector<double> solve_slot_allocation(const Scenario& s, int cut, int k, std::span<const int> batch) {
  const auto rates = link_rates(s);
  return solve_slot_allocation(s, rates, cut, k, batch).slots;
}

// ---------------------------------------------------------------------------
// Alternating optimization.

Decision default_initial_decision(const Scenario& s) {
  const int n = s.num_ues();
  const int L = s.model.num_layers();
  Decision d;
  d.cut_layer = std::clamp(static_cast<int>(std::lround(L / 2.0)), 1, L - 1);
  d.micro_batches = 1;
  d.batch_split.assign(n, s.total_batch / n);
  for (int i = 0; i < s.total_batch % n; ++i) d.batch_split[i] += 1;
  d.slot_alloc.assign(n, s.channel.frame_length / n);
  return d;
}

namespace {

bool usable(const ConstraintReport& r, PacingMode mode) {
  for (const char* name : {"C1", "C2", "C5", "C6"}) {
    if (!r.passed(name)) return false;
  }
  return mode == PacingMode::kRelaxed || (r.passed("C3") && r.passed("C4"));
}

// Largest k any partition over the currently active UEs could support.
int spread_cap(const Scenario& s, std::span<const int> batch) {
  const auto active = std::count_if(batch.begin(), batch.end(), [](int b) { return b > 0; });
  return std::max<int>(1, s.total_batch / static_cast<int>(std::max<long>(active, 1)));
}

// Greedy: fill UEs in ascending uplink cost up to their storage and
// forward-pacing caps. Balanced: same active set, water-filled toward equal
// shares, which keeps min b_i (and so the reachable k) high. Slots give
// every UE exactly enough uplink time to keep pace with the BS, scaled up to
// fill the frame.
std::optional<Decision> strict_start(const Scenario& s, std::span<const LinkRates> rates, int cut) {
  const StageCoefficients c = stage_coefficients(s, rates, cut, 1);
  const int n = s.num_ues();
  const double w = (c.bs_fwd + c.bs_bwd) * s.total_batch;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return c.up_volume[a] < c.up_volume[b]; });
  std::vector<long> cap(n);
  for (int i = 0; i < n; ++i) {
    const double limit = std::min(s.ues[i].storage_budget / c.storage_per_sample, w / c.fwd[i]);
    cap[i] = std::max(0L, static_cast<long>(std::min(std::floor(limit), 1e9)));
  }
  std::vector<int> greedy(n, 0);
  long remaining = s.total_batch;
  std::vector<int> active;
  for (int i : order) {
    if (remaining == 0) break;
    greedy[i] = static_cast<int>(std::min(remaining, cap[i]));
    remaining -= greedy[i];
    if (greedy[i] > 0) active.push_back(i);
  }
  if (remaining > 0) return std::nullopt;

  std::vector<int> balanced(n, 0);
  remaining = s.total_batch;
  std::vector<int> open = active;
  while (remaining > 0 && !open.empty()) {
    const long share = std::max<long>(1, remaining / static_cast<long>(open.size()));
    std::vector<int> still_open;
    for (int i : open) {
      const long take = std::min({share, cap[i] - balanced[i], remaining});
      balanced[i] += static_cast<int>(take);
      remaining -= take;
      if (balanced[i] < cap[i]) still_open.push_back(i);
    }
    open = std::move(still_open);
  }

  for (const std::vector<int>& batch : {balanced, greedy}) {
    std::vector<double> slots(n, 0.0);
    double demand = 0.0;
    for (int i = 0; i < n; ++i) {
      slots[i] = c.up_volume[i] * batch[i] / w;
      demand += slots[i];
    }
    if (demand > s.channel.frame_length || demand <= 0.0) continue;
    for (double& tau : slots) tau *= s.channel.frame_length / demand * (1.0 - 1e-15);
    Decision d{cut, 1, batch, slots};
    if (usable(check_constraints(s, rates, d), PacingMode::kStrict)) return d;
  }
  return std::nullopt;
}

// Spreads the batch round-robin over UEs below their storage caps.
std::optional<Decision> storage_start(const Scenario& s, std::span<const LinkRates> rates, int cut) {
  const int n = s.num_ues();
  const double per_sample = s.model.ue_fwd_flops(cut) + s.model.ue_bwd_flops(cut);
  std::vector<int> cap(n);
  long capacity = 0;
  for (int i = 0; i < n; ++i) {
    cap[i] = static_cast<int>(std::min(std::floor(s.ues[i].storage_budget / per_sample), 1e9));
    capacity += cap[i];
  }
  if (capacity < s.total_batch) return std::nullopt;
  std::vector<int> batch(n, 0);
  int remaining = s.total_batch;
  while (remaining > 0) {
    for (int i = 0; i < n && remaining > 0; ++i) {
      if (batch[i] < cap[i]) {
        ++batch[i];
        --remaining;
      }
    }
  }
  const int active = static_cast<int>(std::count_if(batch.begin(), batch.end(), [](int b) { return b > 0; }));
  std::vector<double> slots(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (batch[i] > 0) slots[i] = s.channel.frame_length / active;
  }
  Decision d{cut, 1, batch, slots};
  if (!usable(check_constraints(s, rates, d), PacingMode::kRelaxed)) return std::nullopt;
  return d;
}

struct Start {
  Decision decision;
  PacingMode mode;
};

Start repair_start(const Scenario& s, std::span<const LinkRates> rates, const Decision& init, bool allow_relaxed) {
  validate_decision(s, init);
  const int L = s.model.num_layers();
  std::vector<std::string> diagnostics;
  for (PacingMode mode : {PacingMode::kStrict, PacingMode::kRelaxed}) {
    if (mode == PacingMode::kRelaxed && !allow_relaxed) break;
    if (usable(check_constraints(s, rates, init), mode)) return {init, mode};
    // Same b and tau at another cut, one micro-batch.
    for (int cut = 1; cut <= L - 1; ++cut) {
      Decision d{cut, 1, init.batch_split, init.slot_alloc};
      if (usable(check_constraints(s, rates, d), mode)) return {d, mode};
    }
    for (int cut = 1; cut <= L - 1; ++cut) {
      auto d = mode == PacingMode::kStrict ? strict_start(s, rates, cut) : storage_start(s, rates, cut);
      if (d) return {*d, mode};
      diagnostics.push_back(std::string("cut ") + std::to_string(cut) + ": no " +
                            (mode == PacingMode::kStrict ? "C2+C3" : "C2") + "-feasible starting point");
    }
  }
  throw InfeasibleError("no feasible starting decision", std::move(diagnostics));
}

}  // namespace

AOState run_ao(const Scenario& s, const AOOptions& opt, const Decision& init) {
  validate(s);
  const auto rates = link_rates(s);
  const Start start = repair_start(s, rates, init, opt.allow_relaxed_pacing);

  AOState st;
  st.mode = start.mode;
  st.decision = start.decision;
  st.initial_decision = start.decision;
  st.bubble_rate = objective_bubble_rate(s, rates, st.decision, st.mode);
  st.initial_bubble_rate = st.bubble_rate;

  // Scores a candidate; +inf when it breaks a constraint the mode enforces.
  auto score = [&](const Decision& cand) {
    try {
      validate_decision(s, cand);
      const ConstraintReport report = check_constraints(s, rates, cand);
      for (const char* name : {"C1", "C2", "C5", "C6"}) {
        if (!report.passed(name)) return kInf;
      }
      if (st.mode == PacingMode::kStrict) {
        if (!report.passed("C3")) return kInf;
        if (opt.k_rule == KRule::kC4Exact && !report.passed("C4")) return kInf;
      }
      return objective_bubble_rate(s, rates, cand, st.mode);
    } catch (const ValidationError&) {
    } catch (const InfeasibleError&) {
    }
    return kInf;
  };
  auto try_accept = [&](const Decision& cand) {
    const double br = score(cand);
    if (br <= st.bubble_rate) {
      st.decision = cand;
      st.bubble_rate = br;
    }
  };
  // Re-picks k after b or tau moved.
  auto with_best_k = [&](int cut, std::span<const int> batch, std::span<const double> slots) {
    int k = 1;
    try {
      k = choose_micro_batches(s, rates, cut, batch, slots, st.mode, opt.k_rule);
    } catch (const std::exception&) {
    }
    return Decision{cut, k, {batch.begin(), batch.end()}, {slots.begin(), slots.end()}};
  };

  double previous = st.bubble_rate;
  for (int m = 1; m <= opt.max_iterations; ++m) {
    st.iteration = m;
    const Decision& d = st.decision;

    const SplitChoice split = enumerate_split(s, rates, d.batch_split, d.slot_alloc, st.mode, opt.k_rule);
    try_accept(Decision{split.cut_layer, split.micro_batches, d.batch_split, d.slot_alloc});

    // A small b_i caps k; the second candidate asks for partitions that
    // leave room for the k the current cut and slots would otherwise allow.
    std::vector<int> floors{0};
    const int target = spread_cap(s, d.batch_split);
    if (target > max_micro_batches(d.batch_split)) floors.push_back(target);
    std::optional<Decision> best;
    double best_br = kInf;
    for (int floor_b : floors) {
      try {
        const BatchPartition part =
            solve_batch_partition(s, rates, d.cut_layer, d.micro_batches, d.slot_alloc, st.mode, opt.tolerances,
                                  floor_b == 0 ? std::span<const int>(d.batch_split) : std::span<const int>{},
                                  opt.bnb_node_limit, floor_b);
        for (const Decision& cand : {Decision{d.cut_layer, d.micro_batches, part.batch, d.slot_alloc},
                                     with_best_k(d.cut_layer, part.batch, d.slot_alloc)}) {
          const double br = score(cand);
          if (br < best_br) {
            best_br = br;
            best = cand;
          }
        }
      } catch (const InfeasibleError&) {
      }
    }
    if (best) try_accept(*best);

    try {
      const SlotAllocation slots =
          solve_slot_allocation(s, rates, d.cut_layer, d.micro_batches, d.batch_split, st.mode, opt.tolerances);
      const Decision same_k{d.cut_layer, d.micro_batches, d.batch_split, slots.slots};
      const Decision new_k = with_best_k(d.cut_layer, d.batch_split, slots.slots);
      try_accept(score(new_k) < score(same_k) ? new_k : same_k);
    } catch (const InfeasibleError&) {
    }

    st.history.push_back({m, st.bubble_rate});
    if (std::abs(st.bubble_rate - previous) <= opt.tolerances.ao_epsilon) {
      st.converged = true;
      break;
    }
    previous = st.bubble_rate;
  }
  return st;
}

AOState run_ao(const Scenario& s, const AOOptions& opt) { return run_ao(s, opt, default_initial_decision(s)); }

}  // namespace c2p2sl

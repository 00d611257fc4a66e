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

#include "c2p2sl/timing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "c2p2sl/errors.hpp"

namespace c2p2sl {

namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

ConstraintCheck make_check(const char* name, double slack, double scale, std::string detail) {
  const bool ok = std::isfinite(slack) && slack >= -kConstraintRelTol * std::max(scale, 0.0);
  return {name, ok, slack, std::move(detail)};
}

}  // namespace

void validate_decision(const Scenario& scenario, const Decision& d) {
  const auto n = static_cast<std::size_t>(scenario.num_ues());
  if (d.batch_split.size() != n) throw ValidationError("decision.batch_split", "expected one entry per UE");
  if (d.slot_alloc.size() != n) throw ValidationError("decision.slot_alloc", "expected one entry per UE");
  if (d.micro_batches < 1) throw ValidationError("decision.micro_batches", "must be at least 1");
  int min_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.batch_split[i] < 0) throw ValidationError("decision.batch_split", "entries must be non-negative");
    if (!(d.slot_alloc[i] >= 0.0) || !std::isfinite(d.slot_alloc[i])) {
      throw ValidationError("decision.slot_alloc", "entries must be finite and non-negative");
    }
    if (d.batch_split[i] > 0 && (min_positive == 0 || d.batch_split[i] < min_positive)) {
      min_positive = d.batch_split[i];
    }
  }
  if (min_positive == 0) throw ValidationError("decision.batch_split", "at least one UE must hold data");
  if (d.micro_batches > min_positive) {
    throw ValidationError("decision.micro_batches", "exceeds the smallest positive per-UE batch");
  }
}

StageCoefficients stage_coefficients(const Scenario& s, std::span<const LinkRates> rates, int cut, int k) {
  const auto& m = s.model;
  const double T = s.channel.frame_length;
  const double ue_f = m.ue_fwd_flops(cut);
  const double ue_b = m.ue_bwd_flops(cut);
  const double act = m.cut_activation_bits(cut);
  StageCoefficients c;
  const std::size_t n = s.ues.size();
  c.fwd.resize(n);
  c.bwd.resize(n);
  c.up_volume.resize(n);
  c.down_volume.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = s.ues[i].compute_rate();
    c.fwd[i] = ue_f / (k * f);
    c.bwd[i] = ue_b / (k * f);
    c.up_volume[i] = (act + m.label_bits) * T / (k * rates[i].uplink);
    c.down_volume[i] = act * T / (k * rates[i].downlink);
  }
  const double fb = s.bs.compute_rate();
  c.bs_fwd = m.bs_fwd_flops(cut) / (k * fb);
  c.bs_bwd = m.bs_bwd_flops(cut) / (k * fb);
  c.storage_per_sample = ue_f + ue_b;
  return c;
}

TimingBreakdown evaluate(const Scenario& s, std::span<const LinkRates> rates, const Decision& d) {
  validate_decision(s, d);
  const int L = s.model.num_layers();
  if (d.cut_layer < 1 || d.cut_layer > L - 1) {
    throw ValidationError("decision.cut_layer", "must lie in [1, " + std::to_string(L - 1) + "]");
  }
  const StageCoefficients c = stage_coefficients(s, rates, d.cut_layer, d.micro_batches);
  const std::size_t n = s.ues.size();
  TimingBreakdown t;
  t.ue_fwd.assign(n, 0.0);
  t.ue_up.assign(n, 0.0);
  t.ue_down.assign(n, 0.0);
  t.ue_bwd.assign(n, 0.0);
  const double total = std::accumulate(d.batch_split.begin(), d.batch_split.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = d.batch_split[i];
    if (b == 0.0) continue;
    if (d.slot_alloc[i] <= 0.0) {
      throw InfeasibleError("UE " + std::to_string(s.ues[i].id) + " holds data but has no time slot");
    }
    t.ue_fwd[i] = c.fwd[i] * b;
    t.ue_bwd[i] = c.bwd[i] * b;
    t.ue_up[i] = c.up_volume[i] * b / d.slot_alloc[i];
    t.ue_down[i] = c.down_volume[i] * b / d.slot_alloc[i];
    t.max_fwd = std::max(t.max_fwd, t.ue_fwd[i]);
    t.max_up = std::max(t.max_up, t.ue_up[i]);
    t.max_down = std::max(t.max_down, t.ue_down[i]);
    t.max_bwd = std::max(t.max_bwd, t.ue_bwd[i]);
    t.max_fwd_up = std::max(t.max_fwd_up, t.ue_fwd[i] + t.ue_up[i]);
    t.max_down_bwd = std::max(t.max_down_bwd, t.ue_down[i] + t.ue_bwd[i]);
  }
  t.bs_fwd = c.bs_fwd * total;
  t.bs_bwd = c.bs_bwd * total;
  t.idle = t.max_fwd_up + t.max_down_bwd;
  t.work = d.micro_batches * (t.bs_fwd + t.bs_bwd);
  t.bubble_rate = t.idle / (t.idle + t.work);
  return t;
}

TimingBreakdown evaluate(const Scenario& s, const Decision& d) {
  return evaluate(s, link_rates(s), d);
}

double bubble_rate(const Scenario& s, const Decision& d) { return evaluate(s, d).bubble_rate; }

bool ConstraintReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

bool ConstraintReport::passed(std::string_view name) const { return at(name).passed; }

const ConstraintCheck& ConstraintReport::at(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no constraint named " + std::string(name));
}

std::vector<std::string> ConstraintReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name + ": " + c.detail);
  }
  return out;
}

ConstraintReport check_constraints(const Scenario& s, std::span<const LinkRates> rates, const Decision& d) {
  validate_decision(s, d);
  ConstraintReport r;
  const int L = s.model.num_layers();
  const std::size_t n = s.ues.size();

  const bool cut_ok = d.cut_layer >= 1 && d.cut_layer <= L - 1;
  r.checks.push_back({"C1", cut_ok, static_cast<double>(std::min(d.cut_layer - 1, L - 1 - d.cut_layer)),
                      "cut layer " + std::to_string(d.cut_layer) + " in [1, " + std::to_string(L - 1) + "]"});

  // C2: UE-side storage proxy, participating UEs only.
  if (cut_ok) {
    const double per_sample = s.model.ue_fwd_flops(d.cut_layer) + s.model.ue_bwd_flops(d.cut_layer);
    double slack = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d.batch_split[i] == 0) continue;
      slack = std::min(slack, s.ues[i].storage_budget - per_sample * d.batch_split[i]);
      scale = std::max(scale, s.ues[i].storage_budget);
    }
    // Exact comparison up to floating rounding of the product.
    const bool ok = slack >= -1e-12 * scale;
    r.checks.push_back({"C2", ok, slack, fmt("min storage slack %.6g FLOPs over %.0f UEs", slack, n)});
  } else {
    r.checks.push_back({"C2", false, -std::numeric_limits<double>::infinity(), "not evaluated: invalid cut"});
  }

  // C3, C4 need the stage times.
  bool timed = false;
  TimingBreakdown t;
  std::string why;
  if (cut_ok) {
    try {
      t = evaluate(s, rates, d);
      timed = true;
    } catch (const InfeasibleError& e) {
      why = e.what();
    }
  } else {
    why = "invalid cut";
  }
  if (timed) {
    const double bs = t.bs_stage();
    const double lhs3 = std::max(t.max_fwd, t.max_up);
    r.checks.push_back(make_check("C3", bs - lhs3, bs, fmt("max(fwd, up) %.6g s vs BS stage %.6g s", lhs3, bs)));
    const int k = d.micro_batches;
    const double lhs4 = (k - 1) * (t.max_up + t.max_down);
    const double rhs4 = k * bs;
    r.checks.push_back(make_check("C4", rhs4 - lhs4, rhs4, fmt("(k-1)(up+down) %.6g s vs k*BS %.6g s", lhs4, rhs4)));
  } else {
    const double ninf = -std::numeric_limits<double>::infinity();
    r.checks.push_back({"C3", false, ninf, "not evaluated: " + why});
    r.checks.push_back({"C4", false, ninf, "not evaluated: " + why});
  }

  const long sum_b = std::accumulate(d.batch_split.begin(), d.batch_split.end(), 0L);
  const int min_b = *std::min_element(d.batch_split.begin(), d.batch_split.end());
  const double slack5 = -std::abs(static_cast<double>(sum_b - s.total_batch));
  r.checks.push_back({"C5", sum_b == s.total_batch && min_b >= 0, std::min<double>(slack5, min_b),
                      "sum(b) = " + std::to_string(sum_b) + ", required " + std::to_string(s.total_batch)});

  const double T = s.channel.frame_length;
  const double sum_tau = std::accumulate(d.slot_alloc.begin(), d.slot_alloc.end(), 0.0);
  r.checks.push_back(make_check("C6", T - sum_tau, T, fmt("sum(tau) %.9g s vs frame %.9g s", sum_tau, T)));
  return r;
}

ConstraintReport check_constraints(const Scenario& s, const Decision& d) {
  return check_constraints(s, link_rates(s), d);
}

}  // namespace c2p2sl

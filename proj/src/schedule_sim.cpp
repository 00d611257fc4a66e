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

#include "c2p2sl/schedule_sim.hpp"

#include <algorithm>
#include <limits>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace c2p2sl {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int actor_row(const Actor& a, int n) {
  switch (a.kind) {
    case ActorKind::kUE: return a.ue;
    case ActorKind::kUplink: return n + a.ue;
    case ActorKind::kDownlink: return 2 * n + a.ue;
    case ActorKind::kBS: return 3 * n;
  }
  return 3 * n;
}

std::string actor_label(const Actor& a) {
  switch (a.kind) {
    case ActorKind::kUE: return "UE" + std::to_string(a.ue + 1);
    case ActorKind::kUplink: return "UL" + std::to_string(a.ue + 1);
    case ActorKind::kDownlink: return "DL" + std::to_string(a.ue + 1);
    case ActorKind::kBS: return "BS";
  }
  return "?";
}

const char* task_label(TaskKind kind) {
  switch (kind) {
    case TaskKind::kFP: return "FP";
    case TaskKind::kBP: return "BP";
    case TaskKind::kUT: return "UT";
    case TaskKind::kDT: return "DT";
  }
  return "?";
}

namespace {

// Replays the recurrence; blocks are kept only when `record` is set.
ScheduleTrace run(const Scenario& s, std::span<const LinkRates> rates, const Decision& d, bool record) {
  const TimingBreakdown t = evaluate(s, rates, d);
  const int n = s.num_ues();
  const int k = d.micro_batches;

  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (d.batch_split[i] > 0) active.push_back(i);
  }

  ScheduleTrace trace;
  trace.num_ues = n;
  auto& blocks = trace.blocks;
  double first = std::numeric_limits<double>::infinity();
  double last = 0.0;
  double bs_busy = 0.0;
  auto emit = [&](Actor actor, TaskKind kind, int m, double start, double dur) {
    if (record) blocks.push_back({actor, kind, m, start, start + dur});
    first = std::min(first, start);
    last = std::max(last, start + dur);
    if (actor.kind == ActorKind::kBS) bs_busy += dur;
    return start + dur;
  };

  // Forward stage: UE compute stream and its radio stream run independently.
  std::vector<std::vector<double>> ut_end(n, std::vector<double>(k + 1, 0.0));
  std::vector<double> fp_done(n, 0.0);
  for (int i : active) {
    double compute = 0.0;
    for (int m = 1; m <= k; ++m) {
      compute = emit({ActorKind::kUE, i}, TaskKind::kFP, m, compute, t.ue_fwd[i]);
      ut_end[i][m] = emit({ActorKind::kUplink, i}, TaskKind::kUT, m, std::max(compute, ut_end[i][m - 1]), t.ue_up[i]);
    }
    fp_done[i] = compute;
  }

  // BS: FP_m once every UE has delivered micro-batch m, BP_m right after (1F1B).
  std::vector<double> bs_bp_end(k + 1, 0.0);
  double bs_free = 0.0;
  for (int m = 1; m <= k; ++m) {
    double ready = bs_free;
    for (int i : active) ready = std::max(ready, ut_end[i][m]);
    const double fp_end = emit({ActorKind::kBS}, TaskKind::kFP, m, ready, t.bs_fwd);
    bs_free = emit({ActorKind::kBS}, TaskKind::kBP, m, fp_end, t.bs_bwd);
    bs_bp_end[m] = bs_free;
  }

  // Downlink waits for the whole uplink to drain.
  double uplink_drained = 0.0;
  for (int i : active) uplink_drained = std::max(uplink_drained, ut_end[i][k]);

  for (int i : active) {
    double dt_end = 0.0;
    double compute = fp_done[i];
    for (int m = 1; m <= k; ++m) {
      const double dt_start = std::max({bs_bp_end[m], uplink_drained, dt_end});
      dt_end = emit({ActorKind::kDownlink, i}, TaskKind::kDT, m, dt_start, t.ue_down[i]);
      compute = emit({ActorKind::kUE, i}, TaskKind::kBP, m, std::max(dt_end, compute), t.ue_bwd[i]);
    }
  }

  if (record) std::stable_sort(blocks.begin(), blocks.end(), [n](const TaskBlock& a, const TaskBlock& b) {
    if (a.start != b.start) return a.start < b.start;
    const int ra = actor_row(a.actor, n), rb = actor_row(b.actor, n);
    if (ra != rb) return ra < rb;
    return a.micro_batch < b.micro_batch;
  });

  trace.makespan = last - first;
  trace.bs_idle = trace.makespan - bs_busy;
  return trace;
}

}  // namespace

ScheduleTrace simulate(const Scenario& s, std::span<const LinkRates> rates, const Decision& d) {
  return run(s, rates, d, true);
}

ScheduleSummary summarize_schedule(const Scenario& s, std::span<const LinkRates> rates, const Decision& d) {
  const ScheduleTrace trace = run(s, rates, d, false);
  return {trace.makespan, trace.bs_idle};
}

ScheduleTrace simulate(const Scenario& s, const Decision& d) { return simulate(s, link_rates(s), d); }

std::string trace_table(const ScheduleTrace& trace) {
  std::ostringstream out;
  out << "actor,kind,m,start,end\n";
  for (const auto& b : trace.blocks) {
    out << actor_label(b.actor) << ',' << task_label(b.kind) << ',' << b.micro_batch << ','
        << num(b.start) << ',' << num(b.end) << '\n';
  }
  return out.str();
}

void export_trace(const ScheduleTrace& trace, const std::string& path) { write_file(path, trace_table(trace)); }

std::string gantt_svg(const ScheduleTrace& trace) {
  if (trace.blocks.empty()) throw std::invalid_argument("gantt: empty trace");
  const int n = trace.num_ues;

  // Only actors that own at least one block get a row.
  std::map<int, Actor> rows;
  for (const auto& b : trace.blocks) rows.emplace(actor_row(b.actor, n), b.actor);
  std::map<int, int> row_pos;
  for (const auto& [row, actor] : rows) row_pos.emplace(row, static_cast<int>(row_pos.size()));

  constexpr double kLeft = 70.0, kWidth = 900.0, kRowH = 26.0, kTop = 20.0;
  const double span = trace.makespan > 0.0 ? trace.makespan : 1.0;
  const double origin = trace.blocks.front().start;
  const double height = kTop + kRowH * static_cast<double>(rows.size()) + 30.0;
  auto x = [&](double time) { return kLeft + kWidth * (time - origin) / span; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kLeft + kWidth + 20.0) << "\" height=\""
      << num(height) << "\" font-family=\"monospace\" font-size=\"10\">\n";
  for (const auto& [row, actor] : rows) {
    const double y = kTop + kRowH * row_pos.at(row);
    svg << "<text x=\"4\" y=\"" << num(y + kRowH * 0.6) << "\">" << actor_label(actor) << "</text>\n";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y + kRowH) << "\" x2=\"" << num(kLeft + kWidth)
        << "\" y2=\"" << num(y + kRowH) << "\" stroke=\"#ddd\"/>\n";
  }
  for (const auto& b : trace.blocks) {
    static const std::map<TaskKind, const char*> kFill = {{TaskKind::kFP, "#7fb3d5"},
                                                          {TaskKind::kBP, "#f5b041"},
                                                          {TaskKind::kUT, "#82e0aa"},
                                                          {TaskKind::kDT, "#c39bd3"}};
    const double y = kTop + kRowH * row_pos.at(actor_row(b.actor, n)) + 3.0;
    const double x0 = x(b.start);
    const double w = std::max(x(b.end) - x0, 0.5);
    svg << "<rect class=\"block\" x=\"" << num(x0) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
        << "\" height=\"" << num(kRowH - 6.0) << "\" fill=\"" << kFill.at(b.kind) << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << num(x0 + 2.0) << "\" y=\"" << num(y + kRowH * 0.5) << "\">" << task_label(b.kind)
        << b.micro_batch << "</text>\n";
  }
  const double axis_y = kTop + kRowH * static_cast<double>(rows.size()) + 14.0;
  svg << "<text x=\"" << num(kLeft) << "\" y=\"" << num(axis_y) << "\">0 s</text>\n";
  svg << "<text x=\"" << num(kLeft + kWidth - 60.0) << "\" y=\"" << num(axis_y) << "\">" << num(trace.makespan)
      << " s</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void export_gantt(const ScheduleTrace& trace, const std::string& path) { write_file(path, gantt_svg(trace)); }

}  // namespace c2p2sl

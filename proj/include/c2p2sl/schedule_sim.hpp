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

// Discrete-event reconstruction of one training batch: per-UE compute and
// radio streams, the BS 1F1B stream, and the UT-before-DT priority rule.

#include <span>
#include <string>
#include <vector>

#include "c2p2sl/scenario.hpp"
#include "c2p2sl/timing.hpp"

namespace c2p2sl {

enum class ActorKind { kUE, kUplink, kDownlink, kBS };
enum class TaskKind { kFP, kBP, kUT, kDT };

struct Actor {
  ActorKind kind = ActorKind::kBS;
  int ue = -1;  // index into Scenario::ues; -1 for the BS

  bool operator==(const Actor&) const = default;
};

struct TaskBlock {
  Actor actor;
  TaskKind kind = TaskKind::kFP;
  int micro_batch = 1;  // 1-based
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
};

struct ScheduleTrace {
  std::vector<TaskBlock> blocks;  // sorted by (start, actor row, micro-batch)
  int num_ues = 0;
  double makespan = 0.0;
  double bs_idle = 0.0;
};

/// Row index used for ordering: UE rows, then uplinks, then downlinks, then the BS.
int actor_row(const Actor& actor, int num_ues);
std::string actor_label(const Actor& actor);
const char* task_label(TaskKind kind);

/// Simulates one batch. UEs with b_i = 0 produce no blocks.
ScheduleTrace simulate(const Scenario& scenario, std::span<const LinkRates> rates, const Decision& decision);
ScheduleTrace simulate(const Scenario& scenario, const Decision& decision);

struct ScheduleSummary {
  double makespan = 0.0;
  double bs_idle = 0.0;
};

/// Same recurrence as simulate without materializing blocks.
ScheduleSummary summarize_schedule(const Scenario& scenario, std::span<const LinkRates> rates,
                                   const Decision& decision);

/// Tabular trace, one block per line: actor,kind,m,start,end.
std::string trace_table(const ScheduleTrace& trace);
void export_trace(const ScheduleTrace& trace, const std::string& path);

/// Gantt chart as SVG. One row per non-empty actor; throws on an empty
/// trace or an unwritable path.
std::string gantt_svg(const ScheduleTrace& trace);
void export_gantt(const ScheduleTrace& trace, const std::string& path);

}  // namespace c2p2sl

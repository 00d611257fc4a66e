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

#include "c2p2sl/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "c2p2sl/errors.hpp"
#include "c2p2sl/schedule_sim.hpp"

namespace c2p2sl {

namespace {

BaselineReport finish(Scheme scheme, std::vector<std::pair<std::string, double>> components) {
  BaselineReport r{scheme, 0.0, std::move(components)};
  for (const auto& [name, value] : r.components) r.per_batch_latency += value;
  return r;
}

}  // namespace

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kSL: return "sl";
    case Scheme::kPSL: return "psl";
    case Scheme::kEPSL: return "epsl";
    case Scheme::kC2P2SL: return "c2p2sl";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Scheme s : {Scheme::kSL, Scheme::kPSL, Scheme::kEPSL, Scheme::kC2P2SL}) {
    if (lower == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown scheme \"" + name + "\"");
}

BaselineReport latency_sl(const Scenario& s, std::span<const LinkRates> rates, int cut, std::span<const int> batch) {
  const StageCoefficients c = stage_coefficients(s, rates, cut, 1);
  const double T = s.channel.frame_length;
  double fwd = 0.0, up = 0.0, bs_fwd = 0.0, bs_bwd = 0.0, down = 0.0, bwd = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double b = batch[i];
    fwd += c.fwd[i] * b;
    up += c.up_volume[i] * b / T;
    bs_fwd += c.bs_fwd * b;
    bs_bwd += c.bs_bwd * b;
    down += c.down_volume[i] * b / T;
    bwd += c.bwd[i] * b;
  }
  return finish(Scheme::kSL, {{"ue_fwd", fwd}, {"uplink", up}, {"bs_fwd", bs_fwd},
                              {"bs_bwd", bs_bwd}, {"downlink", down}, {"ue_bwd", bwd}});
}

BaselineReport latency_psl(const Scenario& s, std::span<const LinkRates> rates, int cut, std::span<const int> batch,
                           std::span<const double> slots) {
  const TimingBreakdown t =
      evaluate(s, rates, Decision{cut, 1, {batch.begin(), batch.end()}, {slots.begin(), slots.end()}});
  return finish(Scheme::kPSL, {{"forward_stage", t.max_fwd_up}, {"bs_fwd", t.bs_fwd},
                               {"bs_bwd", t.bs_bwd}, {"backward_stage", t.max_down_bwd}});
}

BaselineReport latency_epsl(const Scenario& s, std::span<const LinkRates> rates, int cut,
                            std::span<const int> batch, std::span<const double> slots, double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) throw DomainError("aggregation factor must lie in (0, 1]");
  const TimingBreakdown t =
      evaluate(s, rates, Decision{cut, 1, {batch.begin(), batch.end()}, {slots.begin(), slots.end()}});
  double backward = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i] > 0) backward = std::max(backward, factor * t.ue_down[i] + t.ue_bwd[i]);
  }
  return finish(Scheme::kEPSL, {{"forward_stage", t.max_fwd_up}, {"bs_fwd", t.bs_fwd},
                                {"bs_bwd", factor * t.bs_bwd}, {"backward_stage", backward}});
}

BaselineReport latency_c2p2sl(const Scenario& s, std::span<const LinkRates> rates, const Decision& d) {
  const ScheduleTrace trace = simulate(s, rates, d);
  return finish(Scheme::kC2P2SL, {{"bs_busy", trace.makespan - trace.bs_idle}, {"bs_idle", trace.bs_idle}});
}

double bs_bubble_rate(const BaselineReport& report) {
  double busy = 0.0;
  for (const auto& [name, value] : report.components) {
    if (name == "bs_fwd" || name == "bs_bwd" || name == "bs_busy") busy += value;
  }
  return 1.0 - busy / report.per_batch_latency;
}

}  // namespace c2p2sl

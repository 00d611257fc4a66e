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

// Per-batch latency models for sequential SL, parallel SL, efficient
// parallel SL and the pipelined scheme, built on the same stage times.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "c2p2sl/link_model.hpp"
#include "c2p2sl/scenario.hpp"
#include "c2p2sl/timing.hpp"

namespace c2p2sl {

enum class Scheme { kSL, kPSL, kEPSL, kC2P2SL };

const char* to_string(Scheme scheme);
/// Accepts "sl", "psl", "epsl", "c2p2sl" (case-insensitive); throws std::invalid_argument.
Scheme parse_scheme(const std::string& name);

struct BaselineReport {
  Scheme scheme = Scheme::kSL;
  double per_batch_latency = 0.0;
  std::vector<std::pair<std::string, double>> components;  // sums to per_batch_latency
};

/// UEs train one after another, each owning the whole frame during its
/// turn; the BS processes only that UE's samples.
BaselineReport latency_sl(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                          std::span<const int> batch);

/// One batch, no micro-batching: UEs run forward and upload in parallel, the
/// BS processes the aggregate, then downlink and UE backward run in parallel.
BaselineReport latency_psl(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                           std::span<const int> batch, std::span<const double> slots);

/// PSL with the BS backward pass and every downlink scaled by
/// `aggregation_factor` in (0, 1]; DomainError otherwise.
BaselineReport latency_epsl(const Scenario& scenario, std::span<const LinkRates> rates, int cut_layer,
                            std::span<const int> batch, std::span<const double> slots,
                            double aggregation_factor);

/// BS idle share of the per-batch latency: 1 - (BS compute) / latency.
double bs_bubble_rate(const BaselineReport& report);

/// Pipelined latency: the simulated makespan of `decision`.
BaselineReport latency_c2p2sl(const Scenario& scenario, std::span<const LinkRates> rates,
                              const Decision& decision);

}  // namespace c2p2sl

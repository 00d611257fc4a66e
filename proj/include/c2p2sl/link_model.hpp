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

#include <vector>

#include "c2p2sl/scenario.hpp"

namespace c2p2sl {

struct LinkRates {
  double uplink = 0.0;    // bits/s
  double downlink = 0.0;  // bits/s
};

/// Urban-macro style path loss 28.0 + 22 log10(d) + 20 log10(f), d in
/// meters and f in GHz. Throws DomainError for non-positive arguments.
double path_loss_db(double distance_m, double carrier_ghz);

/// Shannon rate B log2(1 + G p h / (B N0)) with h = 10^(-PL/10).
double shannon_rate(const ChannelParams& channel, double tx_power_w, double path_loss);

/// Per-UE uplink (UE power) and downlink (BS power) rates, in UE order.
std::vector<LinkRates> link_rates(const Scenario& scenario);

}  // namespace c2p2sl

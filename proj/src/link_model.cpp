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

#include "c2p2sl/link_model.hpp"

#include <cmath>

#include "c2p2sl/errors.hpp"

namespace c2p2sl {

double path_loss_db(double distance_m, double carrier_ghz) {
  if (!(distance_m > 0.0) || !(carrier_ghz > 0.0)) {
    throw DomainError("path_loss_db: distance and carrier must be positive");
  }
  return 28.0 + 22.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_ghz);
}

double shannon_rate(const ChannelParams& channel, double tx_power_w, double path_loss) {
  const double gain = std::pow(10.0, -path_loss / 10.0);
  const double snr = channel.antenna_gain * tx_power_w * gain / (channel.bandwidth * channel.noise_psd);
  // log1p keeps precision when the SNR is tiny.
  return channel.bandwidth * std::log1p(snr) / std::log(2.0);
}

std::vector<LinkRates> link_rates(const Scenario& scenario) {
  std::vector<LinkRates> rates;
  rates.reserve(scenario.ues.size());
  for (const auto& ue : scenario.ues) {
    const double pl = path_loss_db(ue.distance, scenario.channel.carrier_freq);
    rates.push_back({shannon_rate(scenario.channel, ue.tx_power, pl),
                     shannon_rate(scenario.channel, scenario.bs.tx_power, pl)});
  }
  return rates;
}

}  // namespace c2p2sl

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

#include <doctest.h>

#include <cmath>
#include <random>

#include "c2p2sl/errors.hpp"
#include "c2p2sl/link_model.hpp"
#include "c2p2sl/scenario.hpp"
#include "c2p2sl/units.hpp"

using namespace c2p2sl;
using namespace c2p2sl::units;

TEST_SUITE("link_model") {
  TEST_CASE("path loss reference points") {
    CHECK(path_loss_db(100.0, 3.5) == doctest::Approx(82.881).epsilon(1e-5));
    CHECK(path_loss_db(1.0, 1.0) == doctest::Approx(28.0));
    CHECK(path_loss_db(500.0, 3.5) == doctest::Approx(98.258).epsilon(1e-5));
    CHECK_THROWS_AS(path_loss_db(0.0, 3.5), DomainError);
    CHECK_THROWS_AS(path_loss_db(100.0, -1.0), DomainError);
  }

  TEST_CASE("uplink rate at 100 m and 23 dBm") {
    const ChannelParams ch = reference_channel();
    const double r = shannon_rate(ch, dbm_to_watts(23.0), path_loss_db(100.0, 3.5));
    CHECK(r == doctest::Approx(1.466e9).epsilon(1e-3));
  }

  TEST_CASE("vanishing power gives vanishing rate") {
    const ChannelParams ch = reference_channel();
    CHECK(shannon_rate(ch, 1e-30, 82.0) < 1e-6);
    CHECK(shannon_rate(ch, 0.0, 82.0) == 0.0);
  }

  TEST_CASE("doubling the gain at high SNR adds about B bit/s") {
    ChannelParams ch = reference_channel();
    const double r1 = shannon_rate(ch, dbm_to_watts(23.0), path_loss_db(100.0, 3.5));
    ch.antenna_gain *= 2.0;
    const double r2 = shannon_rate(ch, dbm_to_watts(23.0), path_loss_db(100.0, 3.5));
    CHECK((r2 - r1) == doctest::Approx(ch.bandwidth).epsilon(1e-3));
  }

  TEST_CASE("rates are monotone in power, gain and distance") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dbm(13.0, 23.0), dist(100.0, 500.0);
    const ChannelParams ch = reference_channel();
    for (int i = 0; i < 500; ++i) {
      const double p = dbm_to_watts(dbm(rng)), d = dist(rng);
      const double base = shannon_rate(ch, p, path_loss_db(d, ch.carrier_freq));
      CHECK(shannon_rate(ch, p * 1.01, path_loss_db(d, ch.carrier_freq)) > base);
      CHECK(shannon_rate(ch, p, path_loss_db(d * 1.01, ch.carrier_freq)) < base);
      ChannelParams g = ch;
      g.antenna_gain *= 1.01;
      CHECK(shannon_rate(g, p, path_loss_db(d, ch.carrier_freq)) > base);
      CHECK(std::isfinite(base));
      CHECK(base > 0.0);
      // Path loss at d >= 1 m is at least the d = 1 m value.
      CHECK(base <= shannon_rate(ch, p, path_loss_db(1.0, ch.carrier_freq)));
    }
  }

  TEST_CASE("downlink beats uplink when the BS transmits louder") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Scenario s = random_scenario(6, seed);
      const auto rates = link_rates(s);
      REQUIRE(rates.size() == 6u);
      for (std::size_t i = 0; i < rates.size(); ++i) {
        CHECK(rates[i].downlink >= rates[i].uplink);
        CHECK(rates[i].uplink == doctest::Approx(shannon_rate(
                                     s.channel, s.ues[i].tx_power,
                                     path_loss_db(s.ues[i].distance, s.channel.carrier_freq))));
      }
    }
  }
}

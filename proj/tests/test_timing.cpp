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
#include <vector>

#include "c2p2sl/errors.hpp"
#include "c2p2sl/link_model.hpp"
#include "c2p2sl/scenario.hpp"
#include "c2p2sl/timing.hpp"
#include "support.hpp"

using namespace c2p2sl;
using c2p2sl::testing::random_instance;
using c2p2sl::testing::random_pipelined_instance;

namespace {

// One UE at 16 GFLOPS holding a 64-sample batch, reference channel and BS.
Scenario single_ue_scenario() {
  Scenario s;
  s.ues.push_back({0, 1e9, 16.0, 0.2, 100.0, 1e12});
  s.bs = reference_bs();
  s.channel = reference_channel();
  s.model = builtin_resnet18();
  s.total_batch = 64;
  return s;
}

std::vector<double> all_times(const TimingBreakdown& t) {
  std::vector<double> v;
  for (const auto* vec : {&t.ue_fwd, &t.ue_up, &t.ue_down, &t.ue_bwd}) v.insert(v.end(), vec->begin(), vec->end());
  v.push_back(t.bs_fwd);
  v.push_back(t.bs_bwd);
  return v;
}

}  // namespace

TEST_SUITE("timing") {
  TEST_CASE("forward compute time of a micro-batch") {
    const Scenario s = single_ue_scenario();
    const std::vector<LinkRates> rates{{1.466e9, 2e9}};
    const TimingBreakdown t = evaluate(s, rates, {2, 4, {64}, {0.00125}});
    CHECK(t.ue_fwd[0] == doctest::Approx(0.30680).epsilon(1e-5));
  }

  TEST_CASE("uplink time of a micro-batch") {
    const Scenario s = single_ue_scenario();
    const std::vector<LinkRates> rates{{1.466e9, 2e9}};
    const TimingBreakdown t = evaluate(s, rates, {2, 4, {64}, {0.00125}});
    CHECK(t.ue_up[0] == doctest::Approx(0.18312).epsilon(1e-4));
    // Downlink carries activations without labels.
    CHECK(t.ue_down[0] == doctest::Approx(64.0 * 2097152.0 * 0.01 / (4.0 * 2e9 * 0.00125)));
    CHECK(t.ue_bwd[0] == doctest::Approx(2.0 * t.ue_fwd[0]));
  }

  TEST_CASE("aggregates follow their definitions") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto inst = random_pipelined_instance(seed);
      const TimingBreakdown t = evaluate(inst.scenario, inst.rates, inst.decision);
      double fu = 0.0, db = 0.0;
      for (std::size_t i = 0; i < t.ue_fwd.size(); ++i) {
        fu = std::max(fu, t.ue_fwd[i] + t.ue_up[i]);
        db = std::max(db, t.ue_down[i] + t.ue_bwd[i]);
      }
      CHECK(t.idle == doctest::Approx(fu + db).epsilon(1e-14));
      CHECK(t.work == doctest::Approx(inst.decision.micro_batches * (t.bs_fwd + t.bs_bwd)).epsilon(1e-14));
      CHECK(t.bubble_rate == t.idle / (t.idle + t.work));
      CHECK(t.bubble_rate >= 0.0);
      CHECK(t.bubble_rate < 1.0);
      for (double x : all_times(t)) CHECK(x >= 0.0);
    }
  }

  TEST_CASE("bubble rate from idle and work") {
    // Tune the BS clock so that work equals idle at k = 1.
    Scenario s = single_ue_scenario();
    const std::vector<LinkRates> rates{{1.466e9, 2e9}};
    const Decision d{2, 1, {64}, {0.01}};
    const TimingBreakdown t0 = evaluate(s, rates, d);
    s.bs.clock_freq *= t0.work / t0.idle;
    const TimingBreakdown t1 = evaluate(s, rates, d);
    CHECK(t1.bubble_rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bubble_rate(s, d) == doctest::Approx(evaluate(s, d).bubble_rate));
  }

  TEST_CASE("scaling every FLOP count and compute rate leaves times unchanged") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto inst = random_pipelined_instance(seed);
      const auto before = all_times(evaluate(inst.scenario, inst.rates, inst.decision));
      Scenario& s = inst.scenario;
      for (auto& layer : s.model.layers) layer.fwd_flops *= 3.0, layer.bwd_flops *= 3.0;
      for (auto& ue : s.ues) ue.clock_freq *= 3.0;
      s.bs.clock_freq *= 3.0;
      const auto after = all_times(evaluate(s, inst.rates, inst.decision));
      for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("doubling every b_i doubles every per-micro-batch time") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto inst = random_pipelined_instance(seed);
      const auto before = all_times(evaluate(inst.scenario, inst.rates, inst.decision));
      inst.scenario.total_batch *= 2;
      for (int& b : inst.decision.batch_split) b *= 2;
      const auto after = all_times(evaluate(inst.scenario, inst.rates, inst.decision));
      for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(after[i] == doctest::Approx(2.0 * before[i]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("per-micro-batch times scale as 1/k and work does not depend on k") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto inst = random_instance(seed);
      inst.decision.micro_batches = 1;
      const TimingBreakdown t1 = evaluate(inst.scenario, inst.rates, inst.decision);
      const auto base = all_times(t1);
      const int k_max = max_micro_batches(inst.decision.batch_split);
      double previous_br = t1.bubble_rate;
      for (int k = 2; k <= std::min(k_max, 64); ++k) {
        inst.decision.micro_batches = k;
        const TimingBreakdown tk = evaluate(inst.scenario, inst.rates, inst.decision);
        const auto times = all_times(tk);
        for (std::size_t i = 0; i < base.size(); ++i) CHECK(times[i] == doctest::Approx(base[i] / k).epsilon(1e-12));
        CHECK(tk.work == doctest::Approx(t1.work).epsilon(1e-12));
        CHECK(tk.bubble_rate < previous_br);
        previous_br = tk.bubble_rate;
      }
    }
  }

  TEST_CASE("a single loaded UE reduces to the single-UE formula") {
    Scenario s = random_scenario(3, 4);
    const auto rates = link_rates(s);
    const Decision d{2, 8, {s.total_batch, 0, 0}, {0.004, 0.0, 0.0}};
    Scenario alone = s;
    alone.ues.resize(1);
    const std::vector<LinkRates> alone_rates(rates.begin(), rates.begin() + 1);
    const Decision d1{2, 8, {s.total_batch}, {0.004}};
    CHECK(evaluate(s, rates, d).bubble_rate == doctest::Approx(evaluate(alone, alone_rates, d1).bubble_rate));
    CHECK(evaluate(s, rates, d).idle == doctest::Approx(evaluate(alone, alone_rates, d1).idle));
  }

  TEST_CASE("structural and slot errors") {
    Scenario s = random_scenario(2, 1);
    const auto rates = link_rates(s);
    CHECK_THROWS_AS(evaluate(s, rates, {0, 1, {256, 256}, {0.005, 0.005}}), ValidationError);
    CHECK_THROWS_AS(evaluate(s, rates, {6, 1, {256, 256}, {0.005, 0.005}}), ValidationError);
    CHECK_THROWS_AS(evaluate(s, rates, {2, 0, {256, 256}, {0.005, 0.005}}), ValidationError);
    CHECK_THROWS_AS(evaluate(s, rates, {2, 300, {256, 256}, {0.005, 0.005}}), ValidationError);
    CHECK_THROWS_AS(evaluate(s, rates, {2, 1, {256, 256}, {0.005}}), ValidationError);
    CHECK_THROWS_AS(evaluate(s, rates, {2, 1, {256, 256}, {0.005, 0.0}}), InfeasibleError);
    CHECK_NOTHROW(evaluate(s, rates, {2, 1, {512, 0}, {0.005, 0.0}}));
  }

  TEST_CASE("C4 always holds at k = 1 with slack k * BS stage") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto inst = random_instance(seed);
      const ConstraintReport r = check_constraints(inst.scenario, inst.rates, inst.decision);
      const TimingBreakdown t = evaluate(inst.scenario, inst.rates, inst.decision);
      CHECK(r.passed("C4"));
      CHECK(r.at("C4").slack == doctest::Approx(t.bs_stage()));
    }
  }

  TEST_CASE("C2 boundary passes with zero slack") {
    Scenario s = random_scenario(2, 3);
    const auto rates = link_rates(s);
    const Decision d{2, 1, {300, 212}, {0.005, 0.005}};
    const double per_sample = s.model.ue_fwd_flops(2) + s.model.ue_bwd_flops(2);
    s.ues[0].storage_budget = 300 * per_sample;
    s.ues[1].storage_budget = 212 * per_sample * 2.0;
    const ConstraintReport r = check_constraints(s, rates, d);
    CHECK(r.passed("C2"));
    CHECK(r.at("C2").slack == doctest::Approx(0.0).epsilon(1e-9));
    s.ues[0].storage_budget *= 0.999;
    CHECK_FALSE(check_constraints(s, rates, d).passed("C2"));
  }

  TEST_CASE("slot budget overrun fails C6") {
    const Scenario s = random_scenario(2, 3);
    const auto rates = link_rates(s);
    const double T = s.channel.frame_length;
    CHECK(check_constraints(s, rates, {2, 1, {256, 256}, {T / 2, T / 2}}).passed("C6"));
    const ConstraintReport r = check_constraints(s, rates, {2, 1, {256, 256}, {T / 2, T / 2 + 1e-6 * T}});
    CHECK_FALSE(r.passed("C6"));
    CHECK(r.at("C6").slack < 0.0);
    CHECK_FALSE(r.all_passed());
    CHECK(r.failures().size() >= 1u);
  }

  TEST_CASE("C5 and C1 failures are reports, not errors") {
    const Scenario s = random_scenario(2, 3);
    const auto rates = link_rates(s);
    const ConstraintReport r = check_constraints(s, rates, {2, 1, {256, 200}, {0.005, 0.005}});
    CHECK_FALSE(r.passed("C5"));
    const ConstraintReport r1 = check_constraints(s, rates, {9, 1, {256, 256}, {0.005, 0.005}});
    CHECK_FALSE(r1.passed("C1"));
  }

  TEST_CASE("C3 and C4 match their closed forms") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto inst = random_pipelined_instance(seed);
      const TimingBreakdown t = evaluate(inst.scenario, inst.rates, inst.decision);
      const ConstraintReport r = check_constraints(inst.scenario, inst.rates, inst.decision);
      const int k = inst.decision.micro_batches;
      const double w = t.bs_stage();
      const double c3 = std::max(t.max_fwd, t.max_up) - w;
      const double c4 = (k - 1) * (t.max_up + t.max_down) - k * w;
      if (std::abs(c3) > 1e-6 * w) CHECK(r.passed("C3") == (c3 <= 0.0));
      if (std::abs(c4) > 1e-6 * k * w) CHECK(r.passed("C4") == (c4 <= 0.0));
    }
  }

  TEST_CASE("UEs without data are ignored by maxima and storage") {
    Scenario s = random_scenario(3, 8);
    const auto rates = link_rates(s);
    s.ues[0].storage_budget = s.ues[1].storage_budget = 1e12;
    s.ues[2].storage_budget = 1.0;  // could not hold a single sample
    const Decision d{2, 4, {256, 256, 0}, {0.004, 0.004, 0.0}};
    const ConstraintReport r = check_constraints(s, rates, d);
    CHECK(r.passed("C2"));
    const TimingBreakdown t = evaluate(s, rates, d);
    CHECK(t.ue_fwd[2] == 0.0);
    CHECK(t.max_fwd == doctest::Approx(std::max(t.ue_fwd[0], t.ue_fwd[1])));
  }
}

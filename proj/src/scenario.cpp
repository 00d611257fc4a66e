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

#include "c2p2sl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "c2p2sl/errors.hpp"
#include "c2p2sl/scenario_io.hpp"
#include "c2p2sl/units.hpp"

namespace c2p2sl {

namespace {

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(field, "must be finite and strictly positive");
  }
}

void require_non_negative(double v, const std::string& field) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError(field, "must be finite and non-negative");
  }
}

void require_cut(const ModelProfile& m, int cut) {
  if (cut < 1 || cut > m.num_layers()) {
    throw DomainError("cut layer " + std::to_string(cut) + " outside [1, " +
                      std::to_string(m.num_layers()) + "]");
  }
}

// Uniform double in [lo, hi] from the top 53 bits; independent of the
// standard library's distribution implementation.
double draw(std::mt19937_64& gen, double lo, double hi) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

double ModelProfile::ue_fwd_flops(int cut) const {
  require_cut(*this, cut);
  double s = 0.0;
  for (int j = 0; j < cut; ++j) s += layers[j].fwd_flops;
  return s;
}

double ModelProfile::ue_bwd_flops(int cut) const {
  require_cut(*this, cut);
  double s = 0.0;
  for (int j = 0; j < cut; ++j) s += layers[j].bwd_flops;
  return s;
}

double ModelProfile::bs_fwd_flops(int cut) const {
  require_cut(*this, cut);
  double s = 0.0;
  for (int j = cut; j < num_layers(); ++j) s += layers[j].fwd_flops;
  return s;
}

double ModelProfile::bs_bwd_flops(int cut) const {
  require_cut(*this, cut);
  double s = 0.0;
  for (int j = cut; j < num_layers(); ++j) s += layers[j].bwd_flops;
  return s;
}

double ModelProfile::cut_activation_bits(int cut) const {
  require_cut(*this, cut);
  return layers[cut - 1].activation_bits;
}

void validate(const ModelProfile& model) {
  if (model.layers.size() < 2) throw ValidationError("model.layers", "at least 2 layers required");
  for (std::size_t j = 0; j < model.layers.size(); ++j) {
    const auto& layer = model.layers[j];
    const std::string base = "model.layers[" + std::to_string(j) + "]";
    require_positive(layer.fwd_flops, base + ".fwd_flops");
    require_non_negative(layer.bwd_flops, base + ".bwd_flops");
    require_non_negative(layer.activation_bits, base + ".activation_bits");
  }
  require_non_negative(model.label_bits, "model.label_bits");
}

void validate(const Scenario& s) {
  require_positive(s.channel.bandwidth, "channel.bandwidth");
  require_positive(s.channel.carrier_freq, "channel.carrier_freq");
  require_positive(s.channel.antenna_gain, "channel.antenna_gain");
  require_positive(s.channel.noise_psd, "channel.noise_psd");
  require_positive(s.channel.frame_length, "channel.frame_length");
  require_positive(s.bs.clock_freq, "bs.clock_freq");
  require_positive(s.bs.flops_per_cycle, "bs.flops_per_cycle");
  require_positive(s.bs.tx_power, "bs.tx_power");
  if (s.ues.empty()) throw ValidationError("ues", "at least one UE required");
  std::set<int> ids;
  for (std::size_t i = 0; i < s.ues.size(); ++i) {
    const auto& ue = s.ues[i];
    const std::string base = "ues[" + std::to_string(i) + "]";
    if (!ids.insert(ue.id).second) throw ValidationError(base + ".id", "duplicate UE id");
    require_positive(ue.clock_freq, base + ".clock_freq");
    require_positive(ue.flops_per_cycle, base + ".flops_per_cycle");
    require_positive(ue.tx_power, base + ".tx_power");
    require_positive(ue.distance, base + ".distance");
    require_positive(ue.storage_budget, base + ".storage_budget");
  }
  validate(s.model);
  if (s.total_batch < s.num_ues()) {
    throw ValidationError("batch.total_batch", "must be at least the number of UEs");
  }
}

ModelProfile builtin_resnet18() {
  struct Row {
    const char* name;
    double mflop;
    double traffic_mb;
  };
  static constexpr Row kRows[] = {
      {"Conv1", 3.802, 0.250},  {"Block1", 303.0, 0.250}, {"Block2", 269.1, 0.125},
      {"Block3", 268.8, 0.063}, {"Block4", 268.6, 0.031}, {"Avgpool+FC", 0.026, 3.81e-5},
  };
  ModelProfile m;
  for (const auto& r : kRows) {
    const double fwd = r.mflop * 1e6;
    m.layers.push_back({r.name, fwd, 2.0 * fwd, units::megabytes_to_bits(r.traffic_mb)});
  }
  m.label_bits = 32.0;
  return m;
}

ChannelParams reference_channel() {
  return ChannelParams{
      .bandwidth = 100e6,
      .carrier_freq = 3.5,
      .antenna_gain = 10.0,
      .noise_psd = units::dbm_to_watts(-174.0),
      .frame_length = 10e-3,
  };
}

BSProfile reference_bs() {
  return BSProfile{.clock_freq = 80e9, .flops_per_cycle = 32.0, .tx_power = units::dbm_to_watts(46.0)};
}

Scenario random_scenario(int n_ues, std::uint64_t seed) {
  if (n_ues < 1) throw ValidationError("ues", "n_ues must be at least 1");
  std::mt19937_64 gen(seed);
  Scenario s;
  s.channel = reference_channel();
  s.bs = reference_bs();
  s.model = builtin_resnet18();
  s.total_batch = kReferenceBatch;
  s.ues.reserve(n_ues);
  for (int i = 0; i < n_ues; ++i) {
    UEProfile ue;
    ue.id = i;
    ue.clock_freq = draw(gen, 1e9, 2e9);
    ue.flops_per_cycle = kReferenceUeFlopsPerCycle;
    ue.tx_power = units::dbm_to_watts(draw(gen, 13.0, 23.0));
    ue.distance = draw(gen, 100.0, 500.0);
    ue.storage_budget = draw(gen, 1e9, 2e9);
    s.ues.push_back(ue);
  }
  validate(s);
  return s;
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t p = 0; p < limit; ++p) {
      if (text[p] == '\n') ++line;
    }
    throw FormatError(source + ":" + std::to_string(line), e.what());
  }
  return scenario_from_json(doc);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_scenario(scenario);
}

}  // namespace c2p2sl

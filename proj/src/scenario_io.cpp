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

#include "c2p2sl/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "c2p2sl/errors.hpp"
#include "c2p2sl/units.hpp"

namespace c2p2sl {

namespace {

using nlohmann::json;

enum class Scale { kLinear, kDbmToWatts, kDbwToWatts, kDbToLinear };

struct UnitRule {
  double factor = 1.0;
  Scale scale = Scale::kLinear;
};

struct QuantityRules {
  const char* default_unit;
  std::map<std::string, UnitRule> units;
};

const QuantityRules& rules_for(Quantity kind) {
  static const std::map<Quantity, QuantityRules> kRules = [] {
    const UnitRule dbm{1.0, Scale::kDbmToWatts};
    std::map<Quantity, QuantityRules> r;
    r[Quantity::kPower] = {"dBm", {{"dBm", dbm}, {"dBW", {1.0, Scale::kDbwToWatts}}, {"W", {}}, {"mW", {1e-3}}}};
    const std::map<std::string, UnitRule> hz = {
        {"Hz", {1.0}}, {"kHz", {1e3}}, {"MHz", {1e6}}, {"GHz", {1e9}}};
    auto clock = hz;
    clock.insert({{"cycle/s", {1.0}}, {"Mcycle/s", {1e6}}, {"Gcycle/s", {1e9}}});
    r[Quantity::kClock] = {"GHz", clock};
    r[Quantity::kBandwidth] = {"MHz", hz};
    r[Quantity::kCarrier] = {"GHz", {{"Hz", {1e-9}}, {"kHz", {1e-6}}, {"MHz", {1e-3}}, {"GHz", {1.0}}}};
    r[Quantity::kNoisePsd] = {"dBm/Hz", {{"dBm/Hz", dbm}, {"W/Hz", {}}}};
    r[Quantity::kTime] = {"ms", {{"s", {1.0}}, {"ms", {1e-3}}, {"us", {1e-6}}}};
    r[Quantity::kDistance] = {"m", {{"m", {1.0}}, {"km", {1e3}}}};
    const std::map<std::string, UnitRule> flops = {
        {"FLOP", {1.0}}, {"kFLOP", {1e3}}, {"MFLOP", {1e6}}, {"GFLOP", {1e9}}, {"TFLOP", {1e12}},
        {"FLOPs", {1.0}}, {"kFLOPs", {1e3}}, {"MFLOPs", {1e6}}, {"GFLOPs", {1e9}}, {"TFLOPs", {1e12}}};
    r[Quantity::kFlops] = {"MFLOP", flops};
    r[Quantity::kStorageFlops] = {"GFLOP", flops};
    const std::map<std::string, UnitRule> data = {
        {"bit", {1.0}}, {"bits", {1.0}}, {"B", {8.0}}, {"KB", {8.0 * 1024.0}},
        {"MB", {units::kBitsPerMegabyte}}, {"GB", {units::kBitsPerMegabyte * 1024.0}}};
    r[Quantity::kData] = {"MB", data};
    r[Quantity::kLabelData] = {"bit", data};
    r[Quantity::kGain] = {
        "", {{"", {}}, {"x", {}}, {"dB", {1.0, Scale::kDbToLinear}}, {"dBi", {1.0, Scale::kDbToLinear}}}};
    r[Quantity::kPlain] = {"", {{"", {}}}};
    return r;
  }();
  return kRules.at(kind);
}

double apply(const UnitRule& rule, double v) {
  switch (rule.scale) {
    case Scale::kDbmToWatts: return units::dbm_to_watts(v);
    case Scale::kDbwToWatts: return units::dbm_to_watts(v + 30.0);
    case Scale::kDbToLinear: return units::db_to_linear(v);
    case Scale::kLinear: break;
  }
  return v * rule.factor;
}

std::string with_unit(double v, const char* unit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %s", v, unit);
  return buf;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.is_object()) throw FormatError(path.empty() ? "<root>" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw ValidationError(field, "required field missing");
  return *it;
}

double quantity_at(const json& obj, const char* key, const std::string& path, Quantity kind) {
  return parse_quantity(require(obj, key, path), kind, path + "." + key);
}

int integer_at(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) throw FormatError(path + "." + key, "expected an integer");
  return v.get<int>();
}

}  // namespace

double parse_quantity(const json& value, Quantity kind, const std::string& field) {
  const QuantityRules& rules = rules_for(kind);
  if (value.is_number()) {
    return apply(rules.units.at(rules.default_unit), value.get<double>());
  }
  if (!value.is_string()) throw FormatError(field, "expected a number or a \"<value> <unit>\" string");
  const std::string text = value.get<std::string>();
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw FormatError(field, "cannot parse number in \"" + text + "\"");
  std::string unit(end);
  const auto first = unit.find_first_not_of(' ');
  unit = first == std::string::npos ? "" : unit.substr(first, unit.find_last_not_of(' ') - first + 1);
  if (unit.empty()) unit = rules.default_unit;
  auto it = rules.units.find(unit);
  if (it == rules.units.end()) throw FormatError(field, "unknown unit \"" + unit + "\"");
  return apply(it->second, v);
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["channel"] = {
      {"bandwidth", with_unit(s.channel.bandwidth, "Hz")},
      {"carrier_freq", with_unit(s.channel.carrier_freq, "GHz")},
      {"antenna_gain", s.channel.antenna_gain},
      {"noise_psd", with_unit(s.channel.noise_psd, "W/Hz")},
      {"frame_length", with_unit(s.channel.frame_length, "s")},
  };
  doc["bs"] = {
      {"clock_freq", with_unit(s.bs.clock_freq, "Hz")},
      {"flops_per_cycle", s.bs.flops_per_cycle},
      {"tx_power", with_unit(s.bs.tx_power, "W")},
  };
  json ues = json::array();
  for (const auto& ue : s.ues) {
    ues.push_back({
        {"id", ue.id},
        {"clock_freq", with_unit(ue.clock_freq, "Hz")},
        {"flops_per_cycle", ue.flops_per_cycle},
        {"tx_power", with_unit(ue.tx_power, "W")},
        {"distance", with_unit(ue.distance, "m")},
        {"storage_budget", with_unit(ue.storage_budget, "FLOP")},
    });
  }
  doc["ues"] = std::move(ues);
  json layers = json::array();
  for (const auto& layer : s.model.layers) {
    layers.push_back({
        {"name", layer.name},
        {"fwd_flops", with_unit(layer.fwd_flops, "FLOP")},
        {"bwd_flops", with_unit(layer.bwd_flops, "FLOP")},
        {"activation_bits", with_unit(layer.activation_bits, "bit")},
    });
  }
  doc["model"] = {{"label_bits", with_unit(s.model.label_bits, "bit")}, {"layers", std::move(layers)}};
  doc["batch"] = {{"total_batch", s.total_batch}};
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("<root>", "scenario document must be an object");
  Scenario s;

  const json& ch = require(doc, "channel", "");
  s.channel.bandwidth = quantity_at(ch, "bandwidth", "channel", Quantity::kBandwidth);
  s.channel.carrier_freq = quantity_at(ch, "carrier_freq", "channel", Quantity::kCarrier);
  s.channel.antenna_gain = quantity_at(ch, "antenna_gain", "channel", Quantity::kGain);
  s.channel.noise_psd = quantity_at(ch, "noise_psd", "channel", Quantity::kNoisePsd);
  s.channel.frame_length = quantity_at(ch, "frame_length", "channel", Quantity::kTime);

  const json& bs = require(doc, "bs", "");
  s.bs.clock_freq = quantity_at(bs, "clock_freq", "bs", Quantity::kClock);
  s.bs.flops_per_cycle = quantity_at(bs, "flops_per_cycle", "bs", Quantity::kPlain);
  s.bs.tx_power = quantity_at(bs, "tx_power", "bs", Quantity::kPower);

  const json& ues = require(doc, "ues", "");
  if (!ues.is_array()) throw FormatError("ues", "expected a list");
  for (std::size_t i = 0; i < ues.size(); ++i) {
    const std::string path = "ues[" + std::to_string(i) + "]";
    const json& u = ues[i];
    UEProfile ue;
    ue.id = u.is_object() && u.contains("id") ? integer_at(u, "id", path) : static_cast<int>(i);
    ue.clock_freq = quantity_at(u, "clock_freq", path, Quantity::kClock);
    ue.flops_per_cycle = quantity_at(u, "flops_per_cycle", path, Quantity::kPlain);
    ue.tx_power = quantity_at(u, "tx_power", path, Quantity::kPower);
    ue.distance = quantity_at(u, "distance", path, Quantity::kDistance);
    ue.storage_budget = quantity_at(u, "storage_budget", path, Quantity::kStorageFlops);
    s.ues.push_back(ue);
  }

  const json& model = require(doc, "model", "");
  if (model.is_string()) {
    const std::string name = model.get<std::string>();
    if (name != "resnet18") throw FormatError("model", "unknown built-in model \"" + name + "\"");
    s.model = builtin_resnet18();
  } else {
    if (model.contains("label_bits")) {
      s.model.label_bits = quantity_at(model, "label_bits", "model", Quantity::kLabelData);
    }
    const json& layers = require(model, "layers", "model");
    if (!layers.is_array()) throw FormatError("model.layers", "expected a list");
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const std::string path = "model.layers[" + std::to_string(j) + "]";
      const json& l = layers[j];
      Layer layer;
      layer.name = l.is_object() && l.contains("name") ? l["name"].get<std::string>() : "layer" + std::to_string(j + 1);
      layer.fwd_flops = quantity_at(l, "fwd_flops", path, Quantity::kFlops);
      layer.bwd_flops = l.contains("bwd_flops") ? quantity_at(l, "bwd_flops", path, Quantity::kFlops)
                                                : 2.0 * layer.fwd_flops;
      layer.activation_bits = quantity_at(l, "activation_bits", path, Quantity::kData);
      s.model.layers.push_back(std::move(layer));
    }
  }

  const json& batch = require(doc, "batch", "");
  s.total_batch = batch.is_number_integer() ? batch.get<int>() : integer_at(batch, "total_batch", "batch");

  validate(s);
  return s;
}

}  // namespace c2p2sl

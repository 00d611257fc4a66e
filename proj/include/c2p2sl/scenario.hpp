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

// Problem instances: UE, BS, channel and model profiles plus the global batch.
// All stored quantities are SI (bits, seconds, Hz, watts, FLOPs) except
// ChannelParams::carrier_freq, which is kept in GHz for the path-loss formula.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace c2p2sl {

struct UEProfile {
  int id = 0;
  double clock_freq = 0.0;       // cycles/s
  double flops_per_cycle = 0.0;  // FLOPs/cycle
  double tx_power = 0.0;         // W
  double distance = 0.0;         // m
  double storage_budget = 0.0;   // FLOPs at maximum memory occupancy

  double compute_rate() const { return clock_freq * flops_per_cycle; }
  bool operator==(const UEProfile&) const = default;
};

struct BSProfile {
  double clock_freq = 0.0;       // cycles/s
  double flops_per_cycle = 0.0;  // FLOPs/cycle
  double tx_power = 0.0;         // W

  double compute_rate() const { return clock_freq * flops_per_cycle; }
  bool operator==(const BSProfile&) const = default;
};

struct ChannelParams {
  double bandwidth = 0.0;     // Hz
  double carrier_freq = 0.0;  // GHz
  double antenna_gain = 0.0;  // linear
  double noise_psd = 0.0;     // W/Hz
  double frame_length = 0.0;  // s

  bool operator==(const ChannelParams&) const = default;
};

struct Layer {
  std::string name;
  double fwd_flops = 0.0;        // per sample
  double bwd_flops = 0.0;        // per sample
  double activation_bits = 0.0;  // per sample, output of this layer

  bool operator==(const Layer&) const = default;
};

struct ModelProfile {
  std::vector<Layer> layers;
  double label_bits = 32.0;  // per sample

  int num_layers() const { return static_cast<int>(layers.size()); }

  // Cut index `cut` is 1-based: layers 1..cut run on the UE.
  double ue_fwd_flops(int cut) const;
  double ue_bwd_flops(int cut) const;
  double bs_fwd_flops(int cut) const;
  double bs_bwd_flops(int cut) const;
  double cut_activation_bits(int cut) const;

  bool operator==(const ModelProfile&) const = default;
};

struct Scenario {
  std::vector<UEProfile> ues;
  BSProfile bs;
  ChannelParams channel;
  ModelProfile model;
  int total_batch = 0;

  int num_ues() const { return static_cast<int>(ues.size()); }
  bool operator==(const Scenario&) const = default;
};

/// Throws ValidationError naming the first offending field.
void validate(const Scenario& scenario);
void validate(const ModelProfile& model);

/// Six-unit ResNet-18 profile for 32x32 inputs: Conv1, Block1-4, Avgpool+FC.
/// Backward cost is twice the forward cost; labels are 32-bit class indices.
ModelProfile builtin_resnet18();

/// Fixed system parameters of the reference cell (100 MHz, 10 ms frames,
/// 3.5 GHz carrier, G = 10, N0 = -174 dBm/Hz).
ChannelParams reference_channel();
BSProfile reference_bs();
inline constexpr int kReferenceBatch = 512;
inline constexpr double kReferenceUeFlopsPerCycle = 16.0;

/// Reference cell with `n_ues` heterogeneous UEs drawn from `seed`:
/// clock in [1, 2] Gcycle/s, power in [13, 23] dBm, distance in [100, 500] m,
/// storage budget in [1, 2] GFLOPs. Deterministic for a given seed.
Scenario random_scenario(int n_ues, std::uint64_t seed);

/// Scenario document I/O. Files carry human units ("23 dBm", "0.25 MB");
/// bare numbers take a per-field default unit (see the README).
Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace c2p2sl

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

// JSON mapping of scenarios, shared by the scenario loader and result records.

#include <string>

#include <nlohmann/json.hpp>

#include "c2p2sl/scenario.hpp"

namespace c2p2sl {

/// Serializes with explicit SI unit strings ("0.19952623149688797 W") at
/// full precision so that parsing the output reproduces `scenario` exactly.
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws FormatError for structural problems and ValidationError for
/// values that break an invariant; both name the dotted field path.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Parses one quantity field. Accepts a bare number (interpreted in the
/// field's default unit) or a string "<number> <unit>".
enum class Quantity { kPower, kClock, kBandwidth, kCarrier, kNoisePsd, kTime,
                      kDistance, kFlops, kStorageFlops, kData, kLabelData, kGain, kPlain };
double parse_quantity(const nlohmann::json& value, Quantity kind, const std::string& field);

}  // namespace c2p2sl

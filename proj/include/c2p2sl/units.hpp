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

// Unit conversions used at the scenario-file boundary. Internally every
// quantity is SI: bits, bits/s, seconds, Hz, watts, FLOPs.

#include <cmath>

namespace c2p2sl::units {

inline constexpr double kBitsPerMegabyte = 8.0 * 1024.0 * 1024.0;  // MB = 2^20 bytes

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline double megabytes_to_bits(double mb) { return mb * kBitsPerMegabyte; }
inline double bits_to_megabytes(double bits) { return bits / kBitsPerMegabyte; }

}  // namespace c2p2sl::units

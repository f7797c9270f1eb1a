// Copyright 2026 The rydarp Authors
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

#include <numbers>

// Frequencies enter configuration as ordinary frequencies in MHz and are
// carried internally as angular frequencies in rad/us. Times are us
// internally and ns in configuration files.
namespace rydarp::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double mhz_to_angular(double mhz) noexcept { return two_pi * mhz; }
constexpr double angular_to_mhz(double rad_per_us) noexcept { return rad_per_us / two_pi; }

constexpr double ns_to_us(double ns) noexcept { return ns * 1e-3; }
constexpr double us_to_ns(double us) noexcept { return us * 1e3; }

// Chirp rates: MHz/us <-> rad/us^2.
constexpr double mhz_per_us_to_angular(double rate) noexcept { return two_pi * rate; }

// Unit chirp rate used for the area scans, u = 2 pi x 12 MHz/us.
inline constexpr double chirp_unit = two_pi * 12.0;

}  // namespace rydarp::units

/*
   Copyright 2026 The phasecool Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <numbers>

namespace phasecool {

/// Recoil units: hbar = k = 1 and m = 1/2, so that the recoil frequency
/// hbar k^2 / 2m is exactly one. Times are in 1/omega_rec, momenta in hbar k,
/// positions in 1/k.
struct RecoilUnits {
    static constexpr double hbar = 1.0;
    static constexpr double k = 1.0;
    static constexpr double mass = 0.5;
    static constexpr double planck = 2.0 * std::numbers::pi * hbar;

    static constexpr double recoil_frequency() { return hbar * k * k / (2.0 * mass); }
};

inline constexpr double hbar = RecoilUnits::hbar;
inline constexpr double mass = RecoilUnits::mass;
inline constexpr double planck = RecoilUnits::planck;
inline constexpr double pi = std::numbers::pi;

static_assert(RecoilUnits::recoil_frequency() == 1.0);

}  // namespace phasecool

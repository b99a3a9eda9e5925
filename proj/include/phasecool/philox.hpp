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

#include <array>
#include <cmath>
#include <cstdint>

#include "phasecool/units.hpp"

namespace phasecool {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011): a keyed
/// bijection of a 128-bit counter. Stateless, so any stream position can
/// be computed independently.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += bump0;
                key[1] += bump1;
            }
            const std::uint64_t p0 = std::uint64_t{mul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{mul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    static Key key_from_seed(std::uint64_t seed)
    {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }

private:
    static constexpr std::uint32_t mul0 = 0xD2511F53u;
    static constexpr std::uint32_t mul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t bump0 = 0x9E3779B9u;
    static constexpr std::uint32_t bump1 = 0xBB67AE85u;
};

/// 53-bit uniform in [0, 1) from two 32-bit words.
inline double uniform53(std::uint32_t hi, std::uint32_t lo)
{
    const std::uint64_t bits = (std::uint64_t{hi >> 5} << 26) | (lo >> 6);
    return static_cast<double>(bits) * 0x1.0p-53;
}

/// Two independent standard normals for stream position `index` under `seed`
/// (Box-Muller on one Philox block).
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t index,
                                         std::uint32_t stream = 0)
{
    const auto out = Philox4x32::apply(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0u},
        Philox4x32::key_from_seed(seed));
    const double u1 = 1.0 - uniform53(out[0], out[1]);
    const double u2 = uniform53(out[2], out[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace phasecool

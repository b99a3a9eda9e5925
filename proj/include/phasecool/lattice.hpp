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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "phasecool/error.hpp"
#include "phasecool/units.hpp"

namespace phasecool {

/// Uniform momentum lattice p_i = (i - n_rec*s) / s in units of hbar k.
/// One photon recoil is exactly s lattice steps.
class MomentumGrid {
public:
    MomentumGrid(int subdivision, int extent)
        : subdivision_(subdivision), extent_(extent)
    {
        if (subdivision < 2 || subdivision % 2 != 0) {
            fail(ErrorKind::invalid_parameter,
                 "momentum subdivision must be even and >= 2, got " + std::to_string(subdivision));
        }
        if (extent < 1) {
            fail(ErrorKind::invalid_parameter,
                 "momentum extent must be >= 1, got " + std::to_string(extent));
        }
    }

    int subdivision() const { return subdivision_; }
    int extent() const { return extent_; }
    std::size_t size() const { return static_cast<std::size_t>(2 * extent_ * subdivision_ + 1); }
    std::size_t center() const { return static_cast<std::size_t>(extent_ * subdivision_); }
    double step() const { return hbar * RecoilUnits::k / subdivision_; }

    /// Exact rational value: integer offset divided by the subdivision.
    double at(std::size_t i) const
    {
        return static_cast<double>(static_cast<std::int64_t>(i) - extent_ * subdivision_) /
               subdivision_;
    }

    double min() const { return at(0); }
    double max() const { return at(size() - 1); }

    /// Lattice shift corresponding to n photon recoils.
    std::int64_t kick_offset(int n_kicks) const
    {
        return static_cast<std::int64_t>(n_kicks) * subdivision_;
    }

    bool operator==(const MomentumGrid&) const = default;

private:
    int subdivision_;
    int extent_;
};

inline MomentumGrid make_momentum_grid(int subdivision, int extent)
{
    return MomentumGrid(subdivision, extent);
}

/// Index of p + n_kicks * hbar k, or nullopt when it falls off the lattice.
inline std::optional<std::size_t> shift_index(const MomentumGrid& grid, std::size_t idx, int n_kicks)
{
    const auto target = static_cast<std::int64_t>(idx) + grid.kick_offset(n_kicks);
    if (target < 0 || target >= static_cast<std::int64_t>(grid.size())) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(target);
}

/// Periodic position lattice conjugate to a momentum grid. With the default
/// oversampling of one, dr * dp * N_p = h. The grid spans one full period
/// h / dp of the lattice wavefunctions and contains r = 0.
class PositionGrid {
public:
    explicit PositionGrid(const MomentumGrid& momenta, int oversample = 1)
        : count_(momenta.size() * static_cast<std::size_t>(oversample))
    {
        if (oversample < 1) {
            fail(ErrorKind::invalid_parameter, "position oversampling must be >= 1");
        }
        step_ = planck / (static_cast<double>(count_) * momenta.step());
        center_ = count_ / 2;
    }

    std::size_t size() const { return count_; }
    double step() const { return step_; }
    std::size_t center() const { return center_; }
    double period() const { return step_ * static_cast<double>(count_); }
    double at(std::size_t k) const
    {
        return (static_cast<double>(k) - static_cast<double>(center_)) * step_;
    }
    double min() const { return at(0); }

    bool operator==(const PositionGrid&) const = default;

private:
    std::size_t count_;
    double step_ = 0.0;
    std::size_t center_ = 0;
};

}  // namespace phasecool

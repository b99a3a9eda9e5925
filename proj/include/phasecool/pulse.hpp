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

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "phasecool/error.hpp"
#include "phasecool/units.hpp"

namespace phasecool {

/// Classical plane-wave pulse with a rectangular envelope. The direction is
/// +1 or -1 (k_L = direction * k); frequencies are in omega_rec.
struct LaserPulse {
    int direction = 1;
    double rabi = 0.0;
    double detuning = 0.0;
    double phase = 0.0;
    double t_start = 0.0;
    double t_stop = 0.0;

    double wavenumber() const { return direction * RecoilUnits::k; }

    /// Complex coupling amplitude Omega * exp(-i Phi).
    std::complex<double> amplitude() const { return std::polar(rabi, -phase); }

    /// Half-open activity window [t_start, t_stop).
    bool active_at(double t) const { return t >= t_start && t < t_stop; }

    /// True when the pulse is on throughout the open interval (a, b).
    bool covers(double a, double b) const { return t_start <= a && b <= t_stop; }

    void validate() const
    {
        if (direction != 1 && direction != -1) {
            fail(ErrorKind::invalid_parameter, "pulse direction must be +1 or -1");
        }
        if (!(rabi >= 0.0) || !std::isfinite(rabi)) {
            fail(ErrorKind::invalid_parameter, "pulse Rabi frequency must be >= 0");
        }
        if (!(t_stop > t_start)) {
            fail(ErrorKind::invalid_parameter, "pulse must satisfy t_stop > t_start");
        }
        if (!std::isfinite(detuning) || !std::isfinite(phase)) {
            fail(ErrorKind::invalid_parameter, "pulse detuning and phase must be finite");
        }
    }

    bool operator==(const LaserPulse&) const = default;
};

/// Ordered list of pulses. Pulses may overlap in time; their couplings add.
class PulseSequence {
public:
    PulseSequence() = default;
    explicit PulseSequence(std::vector<LaserPulse> pulses) : pulses_(std::move(pulses))
    {
        for (const auto& p : pulses_) {
            p.validate();
        }
    }

    const std::vector<LaserPulse>& pulses() const { return pulses_; }
    bool empty() const { return pulses_.empty(); }
    std::size_t size() const { return pulses_.size(); }

    void add(const LaserPulse& pulse)
    {
        pulse.validate();
        pulses_.push_back(pulse);
    }

    double duration() const
    {
        double end = 0.0;
        for (const auto& p : pulses_) {
            end = std::max(end, p.t_stop);
        }
        return end;
    }

    /// Pulses switched on during the whole interval (a, b). Callers split time
    /// at every pulse edge so that activity is constant inside each interval.
    std::vector<LaserPulse> active_during(double a, double b) const
    {
        std::vector<LaserPulse> out;
        for (const auto& p : pulses_) {
            if (p.covers(a, b)) {
                out.push_back(p);
            }
        }
        return out;
    }

    std::vector<double> edges() const
    {
        std::vector<double> e;
        for (const auto& p : pulses_) {
            e.push_back(p.t_start);
            e.push_back(p.t_stop);
        }
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    }

    bool operator==(const PulseSequence&) const = default;

private:
    std::vector<LaserPulse> pulses_;
};

/// Duration of a pi transfer for generalized Rabi frequency sqrt(Omega^2 + delta^2).
inline double pi_pulse_duration(double rabi, double residual_detuning)
{
    if (!(rabi > 0.0)) {
        fail(ErrorKind::invalid_parameter, "pi-pulse duration needs a positive Rabi frequency");
    }
    return pi / std::hypot(rabi, residual_detuning);
}

/// Two back-to-back pi-pulses: the first from the right (direction -1),
/// the second from the left (direction +1), no gap between them.
inline PulseSequence counter_propagating_pi_pair(double rabi, double detuning, double t0 = 0.0)
{
    const double tau = pi_pulse_duration(rabi, 0.0);
    return PulseSequence({
        LaserPulse{-1, rabi, detuning, 0.0, t0, t0 + tau},
        LaserPulse{+1, rabi, detuning, 0.0, t0 + tau, t0 + 2.0 * tau},
    });
}

}  // namespace phasecool

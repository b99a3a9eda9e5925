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

#include <cmath>

#include <gtest/gtest.h>

#include "phasecool/lattice.hpp"
#include "phasecool/pulse.hpp"
#include "phasecool/units.hpp"

namespace pc = phasecool;

namespace {

pc::ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const pc::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no phasecool::Error thrown";
    return pc::ErrorKind::config;
}

}  // namespace

TEST(Units, RecoilFrequencyIsOne)
{
    EXPECT_EQ(pc::RecoilUnits::recoil_frequency(), 1.0);
    EXPECT_DOUBLE_EQ(pc::planck, 2.0 * M_PI);
}

TEST(MomentumGrid, DefaultGridSize)
{
    const auto g = pc::make_momentum_grid(10, 8);
    EXPECT_EQ(g.size(), 161u);
    EXPECT_DOUBLE_EQ(g.step(), 0.1);
    EXPECT_EQ(g.at(0), -8.0);
    EXPECT_EQ(g.at(g.center()), 0.0);
    EXPECT_EQ(g.at(160), 8.0);
}

TEST(MomentumGrid, FivePointGrid)
{
    const auto g = pc::make_momentum_grid(2, 1);
    ASSERT_EQ(g.size(), 5u);
    const double expect[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(g.at(i), expect[i]);
    }
}

TEST(MomentumGrid, RejectsBadArguments)
{
    EXPECT_EQ(kind_of([] { pc::make_momentum_grid(3, 4); }), pc::ErrorKind::invalid_parameter);
    EXPECT_EQ(kind_of([] { pc::make_momentum_grid(0, 4); }), pc::ErrorKind::invalid_parameter);
    EXPECT_EQ(kind_of([] { pc::make_momentum_grid(10, 0); }), pc::ErrorKind::invalid_parameter);
    EXPECT_EQ(kind_of([] { pc::make_momentum_grid(-2, 3); }), pc::ErrorKind::invalid_parameter);
}

TEST(MomentumGrid, OneKickIsSSteps)
{
    for (int s : {2, 4, 10, 20}) {
        const pc::MomentumGrid g(s, 3);
        const std::size_t c = g.center();
        EXPECT_EQ(g.at(c + static_cast<std::size_t>(g.kick_offset(1))), 1.0);
    }
}

TEST(MomentumGrid, ValuesAreExactRationals)
{
    const pc::MomentumGrid g(10, 8);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double expect = (static_cast<double>(i) - 80.0) / 10.0;
        EXPECT_EQ(g.at(i), expect);
    }
    EXPECT_EQ(pc::MomentumGrid(10, 8), g);
}

TEST(ShiftIndex, Examples)
{
    const pc::MomentumGrid g(10, 8);
    EXPECT_EQ(pc::shift_index(g, 80, 1), 90u);
    EXPECT_EQ(pc::shift_index(g, 80, 0), 80u);
    EXPECT_FALSE(pc::shift_index(g, 160, 1).has_value());
    EXPECT_FALSE(pc::shift_index(g, 0, -1).has_value());
    EXPECT_EQ(pc::shift_index(g, 0, 16), 160u);
}

TEST(ShiftIndex, RoundTrip)
{
    const pc::MomentumGrid g(4, 3);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int n = -7; n <= 7; ++n) {
            const auto there = pc::shift_index(g, i, n);
            if (there) {
                EXPECT_EQ(pc::shift_index(g, *there, -n), i);
            }
        }
    }
}

TEST(PositionGrid, ConjugateToMomentumLattice)
{
    for (int over : {1, 2, 3}) {
        const pc::MomentumGrid g(10, 8);
        const pc::PositionGrid r(g, over);
        EXPECT_EQ(r.size(), g.size() * static_cast<std::size_t>(over));
        EXPECT_NEAR(r.period() * g.step(), pc::planck, 1e-12);
        EXPECT_EQ(r.at(r.center()), 0.0);
    }
    EXPECT_THROW(pc::PositionGrid(pc::MomentumGrid(2, 1), 0), pc::Error);
}

TEST(PiPulse, Durations)
{
    EXPECT_DOUBLE_EQ(pc::pi_pulse_duration(2.0, 0.0), M_PI / 2.0);
    EXPECT_DOUBLE_EQ(pc::pi_pulse_duration(1.0, 0.0), M_PI);
    EXPECT_NEAR(pc::pi_pulse_duration(1.0, 1.0), M_PI / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(pc::pi_pulse_duration(1.0, 1.0), 2.2214, 1e-4);
    EXPECT_EQ(kind_of([] { pc::pi_pulse_duration(0.0, 0.0); }), pc::ErrorKind::invalid_parameter);
}

TEST(PulseSequence, ValidatesPulses)
{
    EXPECT_EQ(kind_of([] { pc::LaserPulse{0, 1.0, 0.0, 0.0, 0.0, 1.0}.validate(); }),
              pc::ErrorKind::invalid_parameter);
    EXPECT_EQ(kind_of([] { pc::LaserPulse{1, -1.0, 0.0, 0.0, 0.0, 1.0}.validate(); }),
              pc::ErrorKind::invalid_parameter);
    EXPECT_EQ(kind_of([] { pc::LaserPulse{1, 1.0, 0.0, 0.0, 1.0, 1.0}.validate(); }),
              pc::ErrorKind::invalid_parameter);
    pc::PulseSequence seq;
    EXPECT_THROW(seq.add(pc::LaserPulse{2, 1.0, 0.0, 0.0, 0.0, 1.0}), pc::Error);
    EXPECT_TRUE(seq.empty());
}

TEST(PulseSequence, CounterPropagatingPair)
{
    const auto seq = pc::counter_propagating_pi_pair(2.0, -2.0);
    ASSERT_EQ(seq.size(), 2u);
    const auto& a = seq.pulses()[0];
    const auto& b = seq.pulses()[1];
    EXPECT_EQ(a.direction, -1);
    EXPECT_EQ(b.direction, 1);
    EXPECT_EQ(a.t_stop, b.t_start);
    EXPECT_DOUBLE_EQ(seq.duration(), M_PI);
    EXPECT_EQ(seq.edges().size(), 3u);
    EXPECT_EQ(seq.active_during(0.1, 0.2).size(), 1u);
    EXPECT_EQ(seq.active_during(0.1, 0.2).front().direction, -1);
    EXPECT_TRUE(seq.active_during(4.0, 5.0).empty());
    EXPECT_TRUE(a.active_at(0.0));
    EXPECT_FALSE(a.active_at(a.t_stop));
}

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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "phasecool/phase_space.hpp"
#include "phasecool/quantum.hpp"

namespace pc = phasecool;
using pc::Complex;

namespace {

pc::DensityMatrix schrodinger(pc::DensityMatrix rho, double t = 0.0)
{
    rho.set_time(t);
    return pc::to_schrodinger(rho);
}

pc::PhaseSpaceField gaussian_field(double sr, double sp)
{
    const pc::Axis ra{-15.0, 0.05, 601, false};
    const pc::Axis pa{-8.0, 0.05, 321, false};
    pc::PhaseSpaceField f(ra, pa, pc::FieldKind::histogram);
    for (std::size_t i = 0; i < ra.count; ++i) {
        for (std::size_t j = 0; j < pa.count; ++j) {
            const double r = ra.at(i), p = pa.at(j);
            f(i, j) = std::exp(-r * r / (2 * sr * sr) - p * p / (2 * sp * sp)) / (2 * M_PI * sr * sp);
        }
    }
    return f;
}

double variance(const pc::Marginal& m)
{
    double w = 0.0, mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < m.density.size(); ++i) {
        const double x = m.axis.at(i);
        const double v = m.axis.weight(i) * m.density[i];
        w += v;
        mean += v * x;
        sq += v * x * x;
    }
    mean /= w;
    return sq / w - mean * mean;
}

}  // namespace

TEST(FieldKind, StringRoundTrip)
{
    for (auto k : {pc::FieldKind::wigner, pc::FieldKind::husimi, pc::FieldKind::histogram,
                   pc::FieldKind::smoothed}) {
        EXPECT_EQ(pc::field_kind_from_string(pc::to_string(k)), k);
    }
    EXPECT_THROW(pc::field_kind_from_string("glauber"), pc::Error);
}

TEST(Wigner, GaussianPeakAndNormalization)
{
    const pc::MomentumGrid g(10, 8);
    const pc::PositionGrid rg(g);
    for (auto [sr, sp] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.7}}) {
        const auto w = pc::wigner(schrodinger(pc::gaussian_mixed_state(g, {sr, sp})), pc::Level::g, rg);
        const double peak = 1.0 / (2.0 * M_PI * sr * sp);
        EXPECT_NEAR(w.max(), peak, 0.02 * peak);
        EXPECT_NEAR(w(rg.center(), 2 * g.center()), peak, 0.02 * peak);
        EXPECT_NEAR(w.integral(), 1.0, 1e-6);
        EXPECT_EQ(w.kind(), pc::FieldKind::wigner);
    }
}

TEST(Wigner, MomentumMarginalEqualsPopulations)
{
    const pc::MomentumGrid g(10, 8);
    std::mt19937_64 rng(3);
    const pc::DensityMatrix rho(g, oracle::random_density(2 * 161, rng, 4),
                                pc::Picture::schrodinger, 0.0);
    for (int over : {1, 2}) {
        const pc::PositionGrid rg(g, over);
        for (auto lv : {pc::Level::g, pc::Level::e, pc::Level::total}) {
            const auto m = pc::lattice_momentum_marginal(pc::wigner(rho, lv, rg));
            const auto pops = pc::momentum_populations(rho, lv);
            ASSERT_EQ(m.size(), pops.size());
            for (std::size_t i = 0; i < pops.size(); ++i) {
                EXPECT_NEAR(m[i], pops[i] / g.step(), 1e-8);
            }
        }
    }
}

TEST(Wigner, TotalIsSumOfLevels)
{
    const pc::MomentumGrid g(4, 3);
    std::mt19937_64 rng(8);
    const pc::DensityMatrix rho(g, oracle::random_density(50, rng), pc::Picture::schrodinger, 0.0);
    const pc::PositionGrid rg(g);
    auto sum = pc::wigner(rho, pc::Level::g, rg);
    sum += pc::wigner(rho, pc::Level::e, rg);
    const auto total = pc::wigner(rho, pc::Level::total, rg);
    for (std::size_t i = 0; i < sum.values().size(); ++i) {
        EXPECT_NEAR(sum.values()[i], total.values()[i], 1e-14);
    }
}

TEST(Wigner, TwoModeFringes)
{
    const pc::MomentumGrid g(4, 4);
    const std::size_t a = g.center() - 3, b = g.center() + 5;
    const auto rho = schrodinger(
        pc::pure_momentum_state(g, {{a, Complex(1.0, 0.0)}, {b, Complex(1.0, 0.0)}}));
    const pc::PositionGrid rg(g, 2);
    const auto w = pc::wigner(rho, pc::Level::g, rg);
    const double gap = g.at(b) - g.at(a);
    // closed form: W(r, (p0 + p1)/2) = (2/h) cos(r (p1 - p0) / hbar), W(r, p0) = 1/h
    for (std::size_t k = 0; k < rg.size(); ++k) {
        const double r = rg.at(k);
        EXPECT_NEAR(w(k, a + b), 2.0 / pc::planck * std::cos(r * gap), 1e-12);
        EXPECT_NEAR(w(k, 2 * a), 1.0 / pc::planck, 1e-12);
        const double period = 2.0 * M_PI / gap;
        EXPECT_NEAR(pc::wigner_at(rho.block(0, 0), g, r + period, a + b), w(k, a + b), 1e-12);
    }
    EXPECT_LT(w.min(), -0.9 * 2.0 / pc::planck);
}

TEST(Wigner, NonHermitianInputRejected)
{
    const pc::MomentumGrid g(2, 2);
    pc::ComplexMatrix block = pc::ComplexMatrix::Zero(9, 9);
    block(2, 4) = Complex(0.0, 0.3);
    try {
        pc::wigner_of_block(block, g, pc::PositionGrid(g));
        FAIL();
    } catch (const pc::Error& e) {
        EXPECT_EQ(e.kind(), pc::ErrorKind::non_physical_state);
    }
}

TEST(Wigner, InteractionPictureRejected)
{
    const pc::MomentumGrid g(10, 8);
    const auto rho = pc::thermal_diagonal_state(g, 1.0);
    EXPECT_THROW(pc::wigner(rho, pc::Level::g, pc::PositionGrid(g)), pc::Error);
    EXPECT_THROW(pc::husimi_direct(rho, 0.7, pc::PositionGrid(g)), pc::Error);
}

TEST(Wigner, FreeFlightShear)
{
    const pc::MomentumGrid g(10, 8);
    const pc::PositionGrid rg(g);
    const auto rho0 = pc::gaussian_mixed_state(g, {1.0, 1.0, 0.5, 0.3});
    const auto s0 = schrodinger(rho0);
    const pc::ComplexMatrix b0 = s0.block(0, 0);
    const auto half = pc::half_momentum_axis(g);
    for (double t : {0.4, 1.3}) {
        const auto st = schrodinger(pc::propagate(rho0, {}, 1e-3, {t}).front(), t);
        const auto w = pc::wigner(st, pc::Level::g, rg);
        double worst = 0.0;
        for (std::size_t k = 0; k < rg.size(); k += 3) {
            for (std::size_t c = 0; c < half.count; c += 2) {
                const double shifted = rg.at(k) - 2.0 * half.at(c) * t;
                worst = std::max(worst, std::abs(w(k, c) - pc::wigner_at(b0, g, shifted, c)));
            }
        }
        EXPECT_LT(worst, 1e-6) << "t = " << t;
    }
}

TEST(Wigner, InteractionPictureConsistency)
{
    const pc::MomentumGrid g(4, 6);
    const pc::PositionGrid rg(g);
    const auto rho0 = pc::gaussian_mixed_state(g, {1.0, 1.0});
    const auto seq = pc::counter_propagating_pi_pair(2.0, -2.0);
    const auto half = pc::half_momentum_axis(g);
    for (const auto& snap : pc::propagate(rho0, seq, 1e-3, {0.6, 1.9})) {
        const auto st = pc::to_schrodinger(snap);
        const pc::ComplexMatrix bi = snap.block(1, 1);
        const auto ws = pc::wigner(st, pc::Level::e, rg);
        for (std::size_t k = 0; k < rg.size(); k += 5) {
            for (std::size_t c = 0; c < half.count; ++c) {
                const double r = rg.at(k) - 2.0 * half.at(c) * snap.time();
                EXPECT_NEAR(pc::wigner_at(bi, g, r, c), ws(k, c), 1e-10);
            }
        }
    }
}

TEST(Smoothing, GaussianWidthsAdd)
{
    const auto f = gaussian_field(1.2, 0.8);
    const auto s = pc::weierstrass_smooth(f, 0.5, 0.6);
    EXPECT_EQ(s.kind(), pc::FieldKind::smoothed);
    EXPECT_NEAR(s.integral(), f.integral(), 1e-6);
    const auto m = pc::marginals(s);
    EXPECT_NEAR(variance(m.position), 1.2 * 1.2 + 0.5 * 0.5, 1e-4);
    EXPECT_NEAR(variance(m.momentum), 0.8 * 0.8 + 0.6 * 0.6, 1e-4);
    const double peak = 1.0 / (2 * M_PI * std::hypot(1.2, 0.5) * std::hypot(0.8, 0.6));
    EXPECT_NEAR(s.max(), peak, 1e-6);
}

TEST(Smoothing, Semigroup)
{
    const auto f = gaussian_field(0.9, 0.6);
    const auto twice = pc::weierstrass_smooth(pc::weierstrass_smooth(f, 0.5, 0.4), 0.5, 0.4);
    const auto once = pc::weierstrass_smooth(f, 0.5 * std::sqrt(2.0), 0.4 * std::sqrt(2.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        worst = std::max(worst, std::abs(twice.values()[i] - once.values()[i]));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(Smoothing, LinearAndPositive)
{
    auto a = gaussian_field(1.0, 0.5);
    auto b = gaussian_field(0.3, 1.1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : b.values()) {
        v *= u(rng);
    }
    auto sum = a;
    sum += b;
    const auto sa = pc::weierstrass_smooth(a, 0.4, 0.3);
    const auto sb = pc::weierstrass_smooth(b, 0.4, 0.3);
    const auto ss = pc::weierstrass_smooth(sum, 0.4, 0.3);
    for (std::size_t i = 0; i < ss.values().size(); ++i) {
        EXPECT_NEAR(ss.values()[i], sa.values()[i] + sb.values()[i], 1e-13);
    }
    EXPECT_GE(sb.min(), 0.0);
}

TEST(Smoothing, PeriodicAxisWraps)
{
    const pc::MomentumGrid g(10, 8);
    const pc::PositionGrid rg(g);
    const auto w = pc::wigner(schrodinger(pc::gaussian_mixed_state(g, {1.0, 1.0})), pc::Level::g, rg);
    auto shifted = w;
    const std::size_t np = w.p_axis().count, nr = w.r_axis().count;
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            shifted(i, j) = w((i + 40) % nr, j);
        }
    }
    const auto a = pc::weierstrass_smooth(w, 0.8, 0.7);
    const auto b = pc::weierstrass_smooth(shifted, 0.8, 0.7);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            EXPECT_NEAR(b(i, j), a((i + 40) % nr, j), 1e-14);
        }
    }
}

TEST(Smoothing, KindAndValidation)
{
    const pc::MomentumGrid g(10, 8);
    const pc::PositionGrid rg(g);
    const auto w = pc::wigner(schrodinger(pc::gaussian_mixed_state(g, {1.0, 1.0})), pc::Level::g, rg);
    EXPECT_EQ(pc::weierstrass_smooth(w, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)).kind(),
              pc::FieldKind::husimi);
    EXPECT_EQ(pc::weierstrass_smooth(w, 1.0, 1.0).kind(), pc::FieldKind::smoothed);
    try {
        pc::weierstrass_smooth(w, 0.1, 1.0);
        FAIL();
    } catch (const pc::Error& e) {
        EXPECT_EQ(e.kind(), pc::ErrorKind::invalid_parameter);
    }
    EXPECT_THROW(pc::weierstrass_smooth(w, 1.0, 0.0), pc::Error);
}

TEST(Husimi, MatchedCoherentState)
{
    const pc::MomentumGrid g(10, 8);
    const pc::PositionGrid rg(g);
    const double s = 1.0 / std::sqrt(2.0);
    const auto rho = schrodinger(pc::gaussian_mixed_state(g, {s, s}));
    const auto q = pc::husimi_direct(rho, s, rg);
    EXPECT_EQ(q.kind(), pc::FieldKind::husimi);
    EXPECT_NEAR(q(rg.center(), 2 * g.center()), 1.0 / pc::planck, 1e-10);
    EXPECT_NEAR(q.max(), 1.0 / pc::planck, 1e-10);
    EXPECT_NEAR(q.integral(), 1.0, 1e-6);
}

TEST(Husimi, EqualsSmoothedWigner)
{
    const pc::MomentumGrid g(10, 8);
    const double s = 1.0 / std::sqrt(2.0);
    for (int over : {1, 2}) {
        const pc::PositionGrid rg(g, over);
        const auto rho = schrodinger(pc::gaussian_mixed_state(g, {1.5, 1.0, 0.4, -0.3}), 0.9);
        const auto sw = pc::weierstrass_smooth(pc::wigner(rho, pc::Level::total, rg), s, s);
        const auto q = pc::husimi_direct(rho, s, rg);
        double worst = 0.0;
        for (std::size_t i = 0; i < q.values().size(); ++i) {
            worst = std::max(worst, std::abs(q.values()[i] - sw.values()[i]));
        }
        EXPECT_LT(worst, 1e-4) << "oversample " << over;
    }
}

TEST(Husimi, BoundedByInverseH)
{
    const pc::MomentumGrid g(4, 3);
    const pc::PositionGrid rg(g, 2);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = oracle::random_density(25, rng, 1 + trial);
        const auto q = pc::husimi_direct(a, g, 0.7, rg);
        EXPECT_LE(q.max(), 1.0 / pc::planck * (1.0 + 1e-12));
        EXPECT_GE(q.min(), 0.0);
    }
}

TEST(Marginals, GaussianWidthsAndNormalization)
{
    const pc::MomentumGrid g(10, 8);
    const pc::PositionGrid rg(g, 2);
    const auto w = pc::wigner(schrodinger(pc::gaussian_mixed_state(g, {1.3, 0.9})), pc::Level::g, rg);
    const auto m = pc::marginals(w);
    EXPECT_NEAR(m.position.integral(), w.integral(), 1e-8);
    EXPECT_NEAR(m.momentum.integral(), w.integral(), 1e-8);
    EXPECT_NEAR(variance(m.position), 1.3 * 1.3, 1e-3);
    const auto f = gaussian_field(1.1, 0.7);
    const auto fm = pc::marginals(f);
    EXPECT_NEAR(fm.position.integral(), f.integral(), 1e-8);
    EXPECT_NEAR(variance(fm.position), 1.1 * 1.1, 1e-6);
    EXPECT_NEAR(variance(fm.momentum), 0.7 * 0.7, 1e-6);
}

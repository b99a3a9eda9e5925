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
#include <cstdint>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "phasecool/error.hpp"
#include "phasecool/phase_space.hpp"
#include "phasecool/philox.hpp"
#include "phasecool/pulse.hpp"
#include "phasecool/units.hpp"

namespace phasecool {

/// Classical position and velocity with internal Bloch variables.
struct TestParticle {
    double r = 0.0;
    double v = 0.0;
    double s11 = 1.0;
    double s22 = 0.0;
    std::complex<double> s21{0.0, 0.0};

    double momentum() const { return mass * v; }
    bool operator==(const TestParticle&) const = default;
};

struct EnsembleSpec {
    std::size_t count = 1;
    double sigma_r = 1.0;
    double sigma_p = 1.0;
    double mean_r = 0.0;
    double mean_p = 0.0;
    std::uint64_t seed = 0;
};

/// Structure-of-arrays particle storage.
struct Ensemble {
    std::vector<double> r, v, s11, s22, re21, im21;

    explicit Ensemble(std::size_t n = 0)
        : r(n, 0.0), v(n, 0.0), s11(n, 1.0), s22(n, 0.0), re21(n, 0.0), im21(n, 0.0)
    {
    }

    std::size_t size() const { return r.size(); }

    TestParticle get(std::size_t i) const
    {
        return TestParticle{r[i], v[i], s11[i], s22[i], {re21[i], im21[i]}};
    }

    void set(std::size_t i, const TestParticle& p)
    {
        r[i] = p.r;
        v[i] = p.v;
        s11[i] = p.s11;
        s22[i] = p.s22;
        re21[i] = p.s21.real();
        im21[i] = p.s21.imag();
    }

    bool operator==(const Ensemble&) const = default;
};

/// Particle i draws (r, p) from one Philox block keyed by the seed with
/// counter i, so samples do not depend on how the ensemble is partitioned.
inline TestParticle sample_particle(const EnsembleSpec& spec, std::uint64_t index)
{
    const auto z = normal_pair(spec.seed, index);
    TestParticle p;
    p.r = spec.mean_r + spec.sigma_r * z[0];
    p.v = (spec.mean_p + spec.sigma_p * z[1]) / mass;
    return p;
}

inline Ensemble sample_ensemble(const EnsembleSpec& spec)
{
    if (spec.count < 1) {
        fail(ErrorKind::invalid_parameter, "ensemble needs at least one particle");
    }
    if (!(spec.sigma_r >= 0.0) || !(spec.sigma_p >= 0.0)) {
        fail(ErrorKind::invalid_parameter, "ensemble widths must be non-negative");
    }
    Ensemble ens(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        ens.set(i, sample_particle(spec, i));
    }
    return ens;
}

/// `coupled` applies the radiation force to the motion; `frozen` keeps every
/// velocity fixed so the internal dynamics see a constant Doppler shift.
enum class MotionMode { coupled, frozen };

inline constexpr double bloch_tolerance = 1e-6;

namespace detail {

struct BlochState {
    double r, v, s11, s22;
    std::complex<double> s21;
};

inline BlochState bloch_rhs(const BlochState& y, double t, const std::vector<LaserPulse>& active,
                            MotionMode mode)
{
    BlochState d{y.v, 0.0, 0.0, 0.0, {0.0, 0.0}};
    for (const auto& pulse : active) {
        const double kl = pulse.wavenumber();
        const std::complex<double> field =
            std::polar(pulse.rabi, kl * y.r - pulse.detuning * t - pulse.phase);
        const double drive = (std::conj(field) * y.s21).imag();
        d.s22 += drive;
        d.s11 -= drive;
        d.s21 += std::complex<double>(0.0, 0.5) * field * (y.s11 - y.s22);
        if (mode == MotionMode::coupled) {
            d.v += hbar * kl * drive / mass;
        }
    }
    return d;
}

inline BlochState axpy(const BlochState& y, double h, const BlochState& d)
{
    return {y.r + h * d.r, y.v + h * d.v, y.s11 + h * d.s11, y.s22 + h * d.s22, y.s21 + h * d.s21};
}

inline void check_bloch(double s11, double s22, double re, double im, double t, std::size_t index)
{
    const double sum_err = std::abs(s11 + s22 - 1.0);
    const double excess = re * re + im * im - s11 * s22;
    const bool bad = !(sum_err <= bloch_tolerance) || !(excess <= bloch_tolerance) ||
                     !(s11 >= -bloch_tolerance) || !(s22 >= -bloch_tolerance);
    if (bad) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Bloch invariants violated for particle " << index << " at t = " << t
            << " (population sum error " << sum_err << ", coherence excess " << excess << ")";
        fail(ErrorKind::integration_diverged, msg.str());
    }
}

}  // namespace detail

/// One RK4 step of the coupled Bloch and Newton equations with the field
/// phase k_L r(t) - delta0 t - Phi evaluated along the trajectory.
inline TestParticle bloch_step(const TestParticle& particle, const PulseSequence& pulses, double t,
                               double dt, MotionMode mode = MotionMode::coupled)
{
    if (!(dt > 0.0)) {
        fail(ErrorKind::invalid_parameter, "bloch_step needs dt > 0");
    }
    std::vector<LaserPulse> active;
    for (const auto& p : pulses.pulses()) {
        if (p.active_at(t + 0.5 * dt)) {
            active.push_back(p);
        }
    }
    if (active.empty()) {
        TestParticle out = particle;
        out.r += particle.v * dt;
        return out;
    }
    const detail::BlochState y{particle.r, particle.v, particle.s11, particle.s22, particle.s21};
    const auto k1 = detail::bloch_rhs(y, t, active, mode);
    const auto k2 = detail::bloch_rhs(detail::axpy(y, 0.5 * dt, k1), t + 0.5 * dt, active, mode);
    const auto k3 = detail::bloch_rhs(detail::axpy(y, 0.5 * dt, k2), t + 0.5 * dt, active, mode);
    const auto k4 = detail::bloch_rhs(detail::axpy(y, dt, k3), t + dt, active, mode);
    auto out = y;
    out.r += dt / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
    out.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    out.s11 += dt / 6.0 * (k1.s11 + 2.0 * k2.s11 + 2.0 * k3.s11 + k4.s11);
    out.s22 += dt / 6.0 * (k1.s22 + 2.0 * k2.s22 + 2.0 * k3.s22 + k4.s22);
    out.s21 += dt / 6.0 * (k1.s21 + 2.0 * k2.s21 + 2.0 * k3.s21 + k4.s21);
    detail::check_bloch(out.s11, out.s22, out.s21.real(), out.s21.imag(), t + dt, 0);
    return TestParticle{out.r, out.v, out.s11, out.s22, out.s21};
}

struct EnsembleOptions {
    MotionMode mode = MotionMode::coupled;
    unsigned threads = 1;
};

namespace detail {

/// Single active pulse: integrate in the frame co-rotating with the field
/// phase theta = d r - delta0 t - Phi, where the coherence is a + ib.
/// RK4 over steps of equal length h on particles [lo, hi).
inline void corotating_segment(Ensemble& ens, std::size_t lo, std::size_t hi,
                               const LaserPulse& pulse, double t0, double t1, long steps,
                               MotionMode mode)
{
    const double h = (t1 - t0) / static_cast<double>(steps);
    const double kl = pulse.wavenumber();
    const double om = pulse.rabi;
    const double det = pulse.detuning;
    const double kick = mode == MotionMode::coupled ? hbar * kl * om / mass : 0.0;
    constexpr std::size_t block = 512;

    double r[block], v[block], s[block], a[block], b[block];
    for (std::size_t start = lo; start < hi; start += block) {
        const std::size_t n = std::min(block, hi - start);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t g = start + i;
            const std::complex<double> rot =
                std::polar(1.0, -(kl * ens.r[g] - det * t0 - pulse.phase));
            const std::complex<double> c = std::complex<double>(ens.re21[g], ens.im21[g]) * rot;
            r[i] = ens.r[g];
            v[i] = ens.v[g];
            s[i] = ens.s22[g];
            a[i] = c.real();
            b[i] = c.imag();
        }
        for (long step = 0; step < steps; ++step) {
            for (std::size_t i = 0; i < n; ++i) {
                const double r0 = r[i], v0 = v[i], s0 = s[i], a0 = a[i], b0 = b[i];

                const double w1 = kl * v0 - det;
                const double dr1 = v0, dv1 = kick * b0, ds1 = om * b0;
                const double da1 = w1 * b0, db1 = 0.5 * om * (1.0 - 2.0 * s0) - w1 * a0;

                const double v2 = v0 + 0.5 * h * dv1, s2 = s0 + 0.5 * h * ds1;
                const double a2 = a0 + 0.5 * h * da1, b2 = b0 + 0.5 * h * db1;
                const double w2 = kl * v2 - det;
                const double dr2 = v2, dv2 = kick * b2, ds2 = om * b2;
                const double da2 = w2 * b2, db2 = 0.5 * om * (1.0 - 2.0 * s2) - w2 * a2;

                const double v3 = v0 + 0.5 * h * dv2, s3 = s0 + 0.5 * h * ds2;
                const double a3 = a0 + 0.5 * h * da2, b3 = b0 + 0.5 * h * db2;
                const double w3 = kl * v3 - det;
                const double dr3 = v3, dv3 = kick * b3, ds3 = om * b3;
                const double da3 = w3 * b3, db3 = 0.5 * om * (1.0 - 2.0 * s3) - w3 * a3;

                const double v4 = v0 + h * dv3, s4 = s0 + h * ds3;
                const double a4 = a0 + h * da3, b4 = b0 + h * db3;
                const double w4 = kl * v4 - det;
                const double dr4 = v4, dv4 = kick * b4, ds4 = om * b4;
                const double da4 = w4 * b4, db4 = 0.5 * om * (1.0 - 2.0 * s4) - w4 * a4;

                const double c6 = h / 6.0;
                r[i] = r0 + c6 * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4);
                v[i] = v0 + c6 * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4);
                s[i] = s0 + c6 * (ds1 + 2.0 * ds2 + 2.0 * ds3 + ds4);
                a[i] = a0 + c6 * (da1 + 2.0 * da2 + 2.0 * da3 + da4);
                b[i] = b0 + c6 * (db1 + 2.0 * db2 + 2.0 * db3 + db4);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t g = start + i;
            const std::complex<double> rot = std::polar(1.0, kl * r[i] - det * t1 - pulse.phase);
            const std::complex<double> c = std::complex<double>(a[i], b[i]) * rot;
            ens.r[g] = r[i];
            ens.v[g] = v[i];
            ens.s22[g] = s[i];
            ens.s11[g] = 1.0 - s[i];
            ens.re21[g] = c.real();
            ens.im21[g] = c.imag();
            check_bloch(ens.s11[g], ens.s22[g], c.real(), c.imag(), t1, g);
        }
    }
}

inline void general_segment(Ensemble& ens, std::size_t lo, std::size_t hi,
                            const std::vector<LaserPulse>& active, double t0, double t1,
                            long steps, MotionMode mode)
{
    const double h = (t1 - t0) / static_cast<double>(steps);
    PulseSequence seq(active);
    for (std::size_t g = lo; g < hi; ++g) {
        TestParticle p = ens.get(g);
        for (long step = 0; step < steps; ++step) {
            const double t = t0 + static_cast<double>(step) * h;
            const BlochState y{p.r, p.v, p.s11, p.s22, p.s21};
            const auto k1 = bloch_rhs(y, t, active, mode);
            const auto k2 = bloch_rhs(axpy(y, 0.5 * h, k1), t + 0.5 * h, active, mode);
            const auto k3 = bloch_rhs(axpy(y, 0.5 * h, k2), t + 0.5 * h, active, mode);
            const auto k4 = bloch_rhs(axpy(y, h, k3), t + h, active, mode);
            p.r += h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
            p.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
            p.s11 += h / 6.0 * (k1.s11 + 2.0 * k2.s11 + 2.0 * k3.s11 + k4.s11);
            p.s22 += h / 6.0 * (k1.s22 + 2.0 * k2.s22 + 2.0 * k3.s22 + k4.s22);
            p.s21 += h / 6.0 * (k1.s21 + 2.0 * k2.s21 + 2.0 * k3.s21 + k4.s21);
        }
        check_bloch(p.s11, p.s22, p.s21.real(), p.s21.imag(), t1, g);
        ens.set(g, p);
    }
}

template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace detail

/// Integrates every particle independently from t_start to t_end. Time is
/// split at pulse edges; pieces without a pulse are exact free flight, and
/// pieces with pulses use ceil(length / dt) equal RK4 steps.
inline void propagate_ensemble(Ensemble& ens, const PulseSequence& pulses, double dt,
                               double t_start, double t_end, const EnsembleOptions& options = {})
{
    if (!(dt > 0.0)) {
        fail(ErrorKind::invalid_parameter, "propagate_ensemble needs dt > 0");
    }
    if (t_end < t_start) {
        fail(ErrorKind::invalid_parameter, "propagate_ensemble needs t_end >= t_start");
    }
    std::vector<double> marks{t_start, t_end};
    for (double e : pulses.edges()) {
        if (e > t_start && e < t_end) {
            marks.push_back(e);
        }
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    for (std::size_t seg = 0; seg + 1 < marks.size(); ++seg) {
        const double a = marks[seg];
        const double b = marks[seg + 1];
        const auto active = pulses.active_during(a, b);
        const auto steps = static_cast<long>(std::max(1.0, std::ceil((b - a) / dt - 1e-9)));
        detail::parallel_chunks(ens.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
            if (active.empty()) {
                for (std::size_t i = lo; i < hi; ++i) {
                    ens.r[i] += ens.v[i] * (b - a);
                }
            } else if (active.size() == 1) {
                detail::corotating_segment(ens, lo, hi, active.front(), a, b, steps, options.mode);
            } else {
                detail::general_segment(ens, lo, hi, active, a, b, steps, options.mode);
            }
        });
    }
}

/// Integer counts on half-open cells [origin + n cell, origin + (n+1) cell).
struct Histogram2D {
    double cell_r = 0.0;
    double cell_p = 0.0;
    double origin_r = 0.0;
    double origin_p = 0.0;
    std::size_t nr = 0;
    std::size_t np = 0;
    std::vector<std::int64_t> counts;

    std::int64_t& at(std::size_t ir, std::size_t ip) { return counts[ir * np + ip]; }
    std::int64_t at(std::size_t ir, std::size_t ip) const { return counts[ir * np + ip]; }

    std::int64_t total() const
    {
        std::int64_t t = 0;
        for (auto c : counts) {
            t += c;
        }
        return t;
    }
};

/// Bins particle positions and momenta m v. Cell boundaries sit on
/// multiples of the cell size offset by the anchors; the array covers every
/// particle plus `pad_r` / `pad_p` empty cells on each side.
inline Histogram2D histogram(const Ensemble& ens, double cell_r, double cell_p,
                             std::size_t pad_r = 0, std::size_t pad_p = 0, double anchor_r = 0.0,
                             double anchor_p = 0.0)
{
    if (!(cell_r > 0.0) || !(cell_p > 0.0)) {
        fail(ErrorKind::invalid_parameter, "histogram cells must be positive");
    }
    if (ens.size() == 0) {
        fail(ErrorKind::invalid_parameter, "histogram of an empty ensemble");
    }
    auto cell_of = [](double x, double anchor, double cell) {
        return static_cast<std::int64_t>(std::floor((x - anchor) / cell));
    };
    std::int64_t r_lo = std::numeric_limits<std::int64_t>::max(), r_hi = std::numeric_limits<std::int64_t>::min();
    std::int64_t p_lo = r_lo, p_hi = r_hi;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto cr = cell_of(ens.r[i], anchor_r, cell_r);
        const auto cp = cell_of(mass * ens.v[i], anchor_p, cell_p);
        r_lo = std::min(r_lo, cr);
        r_hi = std::max(r_hi, cr);
        p_lo = std::min(p_lo, cp);
        p_hi = std::max(p_hi, cp);
    }
    r_lo -= static_cast<std::int64_t>(pad_r);
    r_hi += static_cast<std::int64_t>(pad_r);
    p_lo -= static_cast<std::int64_t>(pad_p);
    p_hi += static_cast<std::int64_t>(pad_p);

    Histogram2D h;
    h.cell_r = cell_r;
    h.cell_p = cell_p;
    h.origin_r = anchor_r + static_cast<double>(r_lo) * cell_r;
    h.origin_p = anchor_p + static_cast<double>(p_lo) * cell_p;
    h.nr = static_cast<std::size_t>(r_hi - r_lo + 1);
    h.np = static_cast<std::size_t>(p_hi - p_lo + 1);
    h.counts.assign(h.nr * h.np, 0);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto cr = cell_of(ens.r[i], anchor_r, cell_r) - r_lo;
        const auto cp = cell_of(mass * ens.v[i], anchor_p, cell_p) - p_lo;
        ++h.at(static_cast<std::size_t>(cr), static_cast<std::size_t>(cp));
    }
    return h;
}

enum class HistogramScale { counts_per_area, probability_density };

/// Field sampled at cell centres: counts / (cell area), optionally divided
/// by the particle count so it integrates to one.
inline PhaseSpaceField to_field(const Histogram2D& h, HistogramScale scale, double time = 0.0)
{
    const Axis ra{h.origin_r + 0.5 * h.cell_r, h.cell_r, h.nr, false};
    const Axis pa{h.origin_p + 0.5 * h.cell_p, h.cell_p, h.np, false};
    PhaseSpaceField field(ra, pa, FieldKind::histogram, time);
    double norm = h.cell_r * h.cell_p;
    if (scale == HistogramScale::probability_density) {
        norm *= static_cast<double>(h.total());
    }
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        field.values()[i] = static_cast<double>(h.counts[i]) / norm;
    }
    return field;
}

}  // namespace phasecool

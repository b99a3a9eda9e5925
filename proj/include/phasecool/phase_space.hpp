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
#include <cstddef>
#include <string>
#include <vector>

#include "phasecool/density_matrix.hpp"
#include "phasecool/error.hpp"
#include "phasecool/lattice.hpp"
#include "phasecool/units.hpp"

namespace phasecool {

enum class FieldKind { wigner, husimi, histogram, smoothed };

inline const char* to_string(FieldKind kind)
{
    switch (kind) {
    case FieldKind::wigner: return "wigner";
    case FieldKind::husimi: return "husimi";
    case FieldKind::histogram: return "histogram";
    case FieldKind::smoothed: return "smoothed";
    }
    return "?";
}

inline FieldKind field_kind_from_string(const std::string& s)
{
    for (auto k : {FieldKind::wigner, FieldKind::husimi, FieldKind::histogram, FieldKind::smoothed}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    fail(ErrorKind::invalid_kind, "unknown field kind '" + s + "'");
}

/// Uniform 1D sample axis. Periodic axes integrate with the rectangle rule
/// over one period; open axes with the trapezoid rule.
struct Axis {
    double origin = 0.0;
    double step = 1.0;
    std::size_t count = 0;
    bool periodic = false;

    double at(std::size_t i) const { return origin + static_cast<double>(i) * step; }

    double weight(std::size_t i) const
    {
        if (!periodic && count > 1 && (i == 0 || i + 1 == count)) {
            return 0.5 * step;
        }
        return step;
    }

    bool operator==(const Axis&) const = default;
};

inline Axis position_axis(const PositionGrid& grid)
{
    return Axis{grid.min(), grid.step(), grid.size(), true};
}

/// Half-step momentum lattice p_c = p_min + c * dp / 2, c = 0 .. 2N - 2.
inline Axis half_momentum_axis(const MomentumGrid& grid)
{
    return Axis{grid.min(), 0.5 * grid.step(), 2 * grid.size() - 1, false};
}

/// Real field on an (r, p) lattice, stored row-major with one row per r.
class PhaseSpaceField {
public:
    PhaseSpaceField() = default;
    PhaseSpaceField(Axis r, Axis p, FieldKind kind, double time = 0.0)
        : r_(r), p_(p), kind_(kind), time_(time), values_(r.count * p.count, 0.0)
    {
    }

    const Axis& r_axis() const { return r_; }
    const Axis& p_axis() const { return p_; }
    FieldKind kind() const { return kind_; }
    void set_kind(FieldKind k) { kind_ = k; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double& operator()(std::size_t ir, std::size_t ip) { return values_[ir * p_.count + ip]; }
    double operator()(std::size_t ir, std::size_t ip) const { return values_[ir * p_.count + ip]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double integral() const
    {
        double total = 0.0;
        for (std::size_t i = 0; i < r_.count; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < p_.count; ++j) {
                row += p_.weight(j) * (*this)(i, j);
            }
            total += r_.weight(i) * row;
        }
        return total;
    }

    double max() const { return *std::max_element(values_.begin(), values_.end()); }
    double min() const { return *std::min_element(values_.begin(), values_.end()); }

    PhaseSpaceField& operator+=(const PhaseSpaceField& other)
    {
        if (!(r_ == other.r_) || !(p_ == other.p_)) {
            fail(ErrorKind::invalid_parameter, "cannot add fields on different grids");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            values_[i] += other.values_[i];
        }
        return *this;
    }

private:
    Axis r_;
    Axis p_;
    FieldKind kind_ = FieldKind::wigner;
    double time_ = 0.0;
    std::vector<double> values_;
};

inline constexpr double wigner_imaginary_tolerance = 1e-10;

namespace detail {

inline std::vector<Complex> roots_of_unity(std::size_t n)
{
    std::vector<Complex> tw(n);
    for (std::size_t k = 0; k < n; ++k) {
        tw[k] = std::polar(1.0, -2.0 * pi * static_cast<double>(k) / static_cast<double>(n));
    }
    return tw;
}

inline std::size_t wrap(std::int64_t x, std::size_t n)
{
    const auto m = static_cast<std::int64_t>(n);
    const std::int64_t r = x % m;
    return static_cast<std::size_t>(r < 0 ? r + m : r);
}

}  // namespace detail

/// Discrete Weyl transform of one momentum-basis block (any picture):
/// W(r, p_c) = (2/h) sum_{i+j=c} block(i, j) exp(-i r (p_j - p_i) / hbar)
/// on the half-step momentum lattice and the periodic position grid.
inline PhaseSpaceField wigner_of_block(const ComplexMatrix& block, const MomentumGrid& grid,
                                       const PositionGrid& r_grid, double time = 0.0)
{
    const auto n = static_cast<std::int64_t>(grid.size());
    if (block.rows() != n || block.cols() != n) {
        fail(ErrorKind::invalid_parameter, "Wigner block does not match the momentum grid");
    }
    if (grid.subdivision() % 2 != 0) {
        fail(ErrorKind::invalid_parameter, "Wigner transform needs an even subdivision");
    }
    PhaseSpaceField field(position_axis(r_grid), half_momentum_axis(grid), FieldKind::wigner, time);
    const std::size_t nr = r_grid.size();
    const auto center = static_cast<std::int64_t>(r_grid.center());
    const auto tw = detail::roots_of_unity(nr);
    const double pref = 2.0 / planck;
    double worst_imag = 0.0;

    std::vector<Complex> coef;
    std::vector<std::int64_t> offs;
    for (std::int64_t c = 0; c <= 2 * (n - 1); ++c) {
        coef.clear();
        offs.clear();
        const std::int64_t i_lo = std::max<std::int64_t>(0, c - (n - 1));
        const std::int64_t i_hi = std::min<std::int64_t>(n - 1, c);
        for (std::int64_t i = i_lo; i <= i_hi; ++i) {
            const std::int64_t j = c - i;
            const Complex v = block(i, j);
            if (v != Complex(0.0, 0.0)) {
                coef.push_back(v);
                offs.push_back(j - i);
            }
        }
        for (std::size_t k = 0; k < nr; ++k) {
            const std::int64_t kr = static_cast<std::int64_t>(k) - center;
            Complex sum(0.0, 0.0);
            for (std::size_t t = 0; t < coef.size(); ++t) {
                sum += coef[t] * tw[detail::wrap(kr * offs[t], nr)];
            }
            worst_imag = std::max(worst_imag, std::abs(pref * sum.imag()));
            field(k, static_cast<std::size_t>(c)) = pref * sum.real();
        }
    }
    if (worst_imag >= wigner_imaginary_tolerance) {
        fail(ErrorKind::non_physical_state,
             "Wigner transform has imaginary residue " + std::to_string(worst_imag));
    }
    return field;
}

/// Same transform evaluated at one arbitrary position and half-lattice index.
inline double wigner_at(const ComplexMatrix& block, const MomentumGrid& grid, double r,
                        std::size_t c)
{
    const auto n = static_cast<std::int64_t>(grid.size());
    const auto cc = static_cast<std::int64_t>(c);
    const double dp = grid.step();
    Complex sum(0.0, 0.0);
    const std::int64_t i_lo = std::max<std::int64_t>(0, cc - (n - 1));
    const std::int64_t i_hi = std::min<std::int64_t>(n - 1, cc);
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
        const std::int64_t j = cc - i;
        sum += block(i, j) * std::polar(1.0, -r * static_cast<double>(j - i) * dp / hbar);
    }
    return 2.0 / planck * sum.real();
}

inline ComplexMatrix level_block(const DensityMatrix& rho, Level which)
{
    switch (which) {
    case Level::g: return rho.block(0, 0);
    case Level::e: return rho.block(1, 1);
    case Level::total: return rho.block(0, 0) + rho.block(1, 1);
    }
    return rho.block(0, 0);
}

inline PhaseSpaceField wigner(const DensityMatrix& rho, Level which, const PositionGrid& r_grid)
{
    if (rho.picture() != Picture::schrodinger) {
        fail(ErrorKind::wrong_picture, "wigner expects a Schrodinger-picture matrix");
    }
    return wigner_of_block(level_block(rho, which), rho.grid(), r_grid, rho.time());
}

namespace detail {

/// Discrete Gaussian weights exp(-(k h)^2 / 2 s^2) for |k| <= half, normalized to sum 1.
inline std::vector<double> gaussian_taps(double step, double width, std::size_t half)
{
    std::vector<double> w(2 * half + 1);
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = (static_cast<double>(i) - static_cast<double>(half)) * step;
        w[i] = std::exp(-x * x / (2.0 * width * width));
        total += w[i];
    }
    for (double& x : w) {
        x /= total;
    }
    return w;
}

/// Convolve `count` samples spaced `stride` apart in `data` with the taps.
inline void convolve_line(const std::vector<double>& taps, double* data, std::size_t count,
                          std::size_t stride, bool periodic, std::vector<double>& scratch)
{
    const auto half = static_cast<std::int64_t>(taps.size() / 2);
    const auto n = static_cast<std::int64_t>(count);
    scratch.assign(count, 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::int64_t t = -half; t <= half; ++t) {
            std::int64_t src = i + t;
            if (periodic) {
                src = static_cast<std::int64_t>(wrap(src, count));
            } else if (src < 0 || src >= n) {
                continue;
            }
            acc += taps[static_cast<std::size_t>(t + half)] *
                   data[static_cast<std::size_t>(src) * stride];
        }
        scratch[static_cast<std::size_t>(i)] = acc;
    }
    for (std::size_t i = 0; i < count; ++i) {
        data[i * stride] = scratch[i];
    }
}

inline std::vector<double> axis_taps(const Axis& axis, double width)
{
    auto half = static_cast<std::size_t>(std::ceil(8.0 * width / axis.step));
    if (axis.periodic) {
        half = std::min(half, axis.count / 2);
    }
    return gaussian_taps(axis.step, width, half);
}

}  // namespace detail

/// Separable Gaussian convolution with widths (s_r, s_p), evaluated directly
/// on the field's own grid. Periodic axes wrap; open axes are zero-padded.
inline PhaseSpaceField weierstrass_smooth(const PhaseSpaceField& field, double s_r, double s_p)
{
    if (!(s_r > 0.0) || !(s_p > 0.0)) {
        fail(ErrorKind::invalid_parameter, "smoothing widths must be positive");
    }
    if (s_r < field.r_axis().step || s_p < field.p_axis().step) {
        fail(ErrorKind::invalid_parameter, "smoothing kernel is narrower than one grid cell");
    }
    PhaseSpaceField out = field;
    const std::size_t nr = field.r_axis().count;
    const std::size_t np = field.p_axis().count;
    std::vector<double> scratch;

    const auto taps_p = detail::axis_taps(field.p_axis(), s_p);
    for (std::size_t i = 0; i < nr; ++i) {
        detail::convolve_line(taps_p, &out(i, 0), np, 1, field.p_axis().periodic, scratch);
    }
    const auto taps_r = detail::axis_taps(field.r_axis(), s_r);
    for (std::size_t j = 0; j < np; ++j) {
        detail::convolve_line(taps_r, &out(0, j), nr, np, field.r_axis().periodic, scratch);
    }
    const bool minimal = std::abs(s_r * s_p - 0.5 * hbar) < 1e-12;
    out.set_kind(minimal && field.kind() == FieldKind::wigner ? FieldKind::husimi
                                                               : FieldKind::smoothed);
    return out;
}

/// Q(r, p) = <alpha|rho_A|alpha> / h with lattice coherent states of
/// position width sigma_r, evaluated on the half-step momentum lattice.
inline PhaseSpaceField husimi_direct(const ComplexMatrix& rho_a, const MomentumGrid& grid,
                                     double sigma_r, const PositionGrid& r_grid, double time = 0.0)
{
    if (!(sigma_r > 0.0)) {
        fail(ErrorKind::invalid_parameter, "coherent-state width must be positive");
    }
    const auto n = static_cast<std::int64_t>(grid.size());
    if (rho_a.rows() != n || rho_a.cols() != n) {
        fail(ErrorKind::invalid_parameter, "external matrix does not match the momentum grid");
    }
    const double sigma_p = 0.5 * hbar / sigma_r;
    PhaseSpaceField field(position_axis(r_grid), half_momentum_axis(grid), FieldKind::husimi, time);
    const Axis& pax = field.p_axis();
    const std::size_t nr = r_grid.size();
    const auto center = static_cast<std::int64_t>(r_grid.center());
    const auto tw = detail::roots_of_unity(nr);
    const auto reach = static_cast<std::int64_t>(std::ceil(8.0 * sigma_p / grid.step()));

    std::vector<double> g;
    std::vector<Complex> c_n;
    for (std::size_t c = 0; c < pax.count; ++c) {
        const double pbar = pax.at(c);
        // lattice window around pbar
        const auto mid = static_cast<std::int64_t>(c / 2);
        const std::int64_t lo = std::max<std::int64_t>(0, mid - reach);
        const std::int64_t hi = std::min<std::int64_t>(n - 1, mid + reach + 1);
        const std::int64_t w = hi - lo + 1;
        g.assign(static_cast<std::size_t>(w), 0.0);
        double norm = 0.0;
        for (std::int64_t i = 0; i < w; ++i) {
            const double d = grid.at(static_cast<std::size_t>(lo + i)) - pbar;
            g[static_cast<std::size_t>(i)] = std::exp(-d * d / (4.0 * sigma_p * sigma_p));
            norm += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        }
        norm = 1.0 / std::sqrt(norm);
        for (double& x : g) {
            x *= norm;
        }
        c_n.assign(static_cast<std::size_t>(2 * w - 1), Complex(0.0, 0.0));
        for (std::int64_t a = 0; a < w; ++a) {
            for (std::int64_t b = 0; b < w; ++b) {
                c_n[static_cast<std::size_t>(b - a + w - 1)] +=
                    g[static_cast<std::size_t>(a)] * g[static_cast<std::size_t>(b)] *
                    rho_a(lo + a, lo + b);
            }
        }
        for (std::size_t k = 0; k < nr; ++k) {
            const std::int64_t kr = static_cast<std::int64_t>(k) - center;
            Complex sum(0.0, 0.0);
            for (std::int64_t m = -(w - 1); m <= w - 1; ++m) {
                sum += c_n[static_cast<std::size_t>(m + w - 1)] * tw[detail::wrap(kr * m, nr)];
            }
            field(k, c) = std::max(0.0, sum.real()) / planck;
        }
    }
    return field;
}

inline PhaseSpaceField husimi_direct(const DensityMatrix& rho, double sigma_r,
                                     const PositionGrid& r_grid)
{
    if (rho.picture() != Picture::schrodinger) {
        fail(ErrorKind::wrong_picture, "husimi_direct expects a Schrodinger-picture matrix");
    }
    return husimi_direct(level_block(rho, Level::total), rho.grid(), sigma_r, r_grid, rho.time());
}

struct Marginal {
    Axis axis;
    std::vector<double> density;

    double integral() const
    {
        double total = 0.0;
        for (std::size_t i = 0; i < density.size(); ++i) {
            total += axis.weight(i) * density[i];
        }
        return total;
    }
};

struct Marginals {
    Marginal position;
    Marginal momentum;
};

inline Marginals marginals(const PhaseSpaceField& field)
{
    const Axis& ra = field.r_axis();
    const Axis& pa = field.p_axis();
    Marginals out{{ra, std::vector<double>(ra.count, 0.0)}, {pa, std::vector<double>(pa.count, 0.0)}};
    for (std::size_t i = 0; i < ra.count; ++i) {
        for (std::size_t j = 0; j < pa.count; ++j) {
            const double v = field(i, j);
            out.position.density[i] += pa.weight(j) * v;
            out.momentum.density[j] += ra.weight(i) * v;
        }
    }
    return out;
}

/// Momentum marginal of a half-lattice field averaged onto parent-lattice
/// cells [p_i - dp/2, p_i + dp/2] with weights 1/4, 1/2, 1/4.
inline std::vector<double> lattice_momentum_marginal(const PhaseSpaceField& field)
{
    const auto m = marginals(field).momentum.density;
    const std::size_t n = (m.size() + 1) / 2;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = 2 * i;
        double v = 0.5 * m[c];
        if (c > 0) {
            v += 0.25 * m[c - 1];
        }
        if (c + 1 < m.size()) {
            v += 0.25 * m[c + 1];
        }
        out[i] = v;
    }
    return out;
}

}  // namespace phasecool

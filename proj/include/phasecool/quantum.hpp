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
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phasecool/density_matrix.hpp"
#include "phasecool/error.hpp"
#include "phasecool/lattice.hpp"
#include "phasecool/pulse.hpp"
#include "phasecool/units.hpp"

namespace phasecool {

/// Gaussian phase-space state. sigma_r = +infinity means full spatial
/// delocalization (diagonal in momentum).
struct GaussianStateSpec {
    double sigma_r = 1.0;
    double sigma_p = 1.0;
    double mean_r = 0.0;
    double mean_p = 0.0;
};

enum class EdgeCheck { enforce, skip };

inline constexpr double edge_population_limit = 1e-6;
inline constexpr double trace_tolerance = 1e-10;
inline constexpr double hermiticity_tolerance = 1e-12;
inline constexpr double positivity_tolerance = 1e-8;

inline void require_edge_safety(const DensityMatrix& rho, const std::string& context)
{
    const double edge = rho.edge_population();
    if (edge >= edge_population_limit) {
        std::ostringstream msg;
        msg << context << ": population " << edge << " on the outermost momentum point (limit "
            << edge_population_limit << ")";
        fail(ErrorKind::boundary, msg.str());
    }
}

/// Ground-state populations proportional to exp(-p^2 / 2 sigma_p^2), no coherences.
inline DensityMatrix thermal_diagonal_state(const MomentumGrid& grid, double sigma_p,
                                            EdgeCheck edges = EdgeCheck::enforce)
{
    if (!(sigma_p > 0.0)) {
        fail(ErrorKind::invalid_parameter, "thermal state needs sigma_p > 0");
    }
    auto rho = DensityMatrix::zero(grid);
    double total = 0.0;
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid.at(i);
        w[i] = std::exp(-p * p / (2.0 * sigma_p * sigma_p));
        total += w[i];
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        rho.matrix()(k, k) = w[i] / total;
    }
    if (edges == EdgeCheck::enforce) {
        require_edge_safety(rho, "thermal_diagonal_state");
    }
    return rho;
}

/// Ground-state Gaussian whose Wigner function is
/// exp(-(r-r0)^2/2 sigma_r^2 - (p-p0)^2/2 sigma_p^2) / (2 pi sigma_r sigma_p).
inline DensityMatrix gaussian_mixed_state(const MomentumGrid& grid, const GaussianStateSpec& spec,
                                          EdgeCheck edges = EdgeCheck::enforce)
{
    if (!(spec.sigma_p > 0.0) || !(spec.sigma_r > 0.0)) {
        fail(ErrorKind::invalid_parameter, "Gaussian state needs positive widths");
    }
    if (std::isinf(spec.sigma_r)) {
        auto rho = DensityMatrix::zero(grid);
        double total = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double d = grid.at(i) - spec.mean_p;
            const auto k = static_cast<Eigen::Index>(i);
            rho.matrix()(k, k) = std::exp(-d * d / (2.0 * spec.sigma_p * spec.sigma_p));
            total += rho.matrix()(k, k).real();
        }
        rho.matrix() /= total;
        if (edges == EdgeCheck::enforce) {
            require_edge_safety(rho, "gaussian_mixed_state");
        }
        return rho;
    }
    if (spec.sigma_r * spec.sigma_p < 0.5 * hbar * (1.0 - 1e-12)) {
        fail(ErrorKind::invalid_parameter, "Gaussian state violates sigma_r * sigma_p >= hbar/2");
    }
    auto rho = DensityMatrix::zero(grid);
    const auto n = rho.n();
    auto g = rho.block(0, 0);
    const double a = 1.0 / (8.0 * spec.sigma_p * spec.sigma_p);
    const double b = spec.sigma_r * spec.sigma_r / (2.0 * hbar * hbar);
    for (Eigen::Index col = 0; col < n; ++col) {
        const double p = grid.at(static_cast<std::size_t>(col));
        for (Eigen::Index row = 0; row < n; ++row) {
            const double pp = grid.at(static_cast<std::size_t>(row));
            const double sum = pp + p - 2.0 * spec.mean_p;
            const double diff = pp - p;
            g(row, col) = std::polar(std::exp(-a * sum * sum - b * diff * diff),
                                     -spec.mean_r * diff / hbar);
        }
    }
    rho.matrix() /= rho.trace();
    if (edges == EdgeCheck::enforce) {
        require_edge_safety(rho, "gaussian_mixed_state");
    }
    return rho;
}

/// Pure state sum_k c_k |p_k, level> (normalized internally).
inline DensityMatrix pure_momentum_state(const MomentumGrid& grid,
                                         const std::vector<std::pair<std::size_t, Complex>>& amps,
                                         int level = 0)
{
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * grid.size()));
    for (const auto& [idx, c] : amps) {
        if (idx >= grid.size()) {
            fail(ErrorKind::invalid_parameter, "pure state index off the grid");
        }
        psi(static_cast<Eigen::Index>(level * grid.size() + idx)) += c;
    }
    const double norm = psi.norm();
    if (norm == 0.0) {
        fail(ErrorKind::invalid_parameter, "pure state has zero norm");
    }
    psi /= norm;
    return DensityMatrix(grid, psi * psi.adjoint(), Picture::interaction, 0.0);
}

namespace detail {

/// Complex multiply-add written on real parts so it vectorizes.
inline void cmadd(Complex& acc, const Complex& a, const Complex& b)
{
    const double re = a.real() * b.real() - a.imag() * b.imag();
    const double im = a.real() * b.imag() + a.imag() * b.real();
    acc = Complex(acc.real() + re, acc.imag() + im);
}

/// d[r] += coef[r] * s[r + shift] for rows where both exist.
inline void add_shifted_column(Complex* d, const Complex* s, const Complex* coef, Eigen::Index n,
                               Eigen::Index shift)
{
    const Eigen::Index lo = std::max<Eigen::Index>(0, -shift);
    const Eigen::Index hi = std::min<Eigen::Index>(n, n - shift);
    for (Eigen::Index r = lo; r < hi; ++r) {
        cmadd(d[r], coef[r], s[r + shift]);
    }
}

/// d[r] += k * s[r].
inline void add_scaled_column(Complex* d, const Complex* s, Complex k, Eigen::Index n)
{
    for (Eigen::Index r = 0; r < n; ++r) {
        cmadd(d[r], k, s[r]);
    }
}

struct PulseCoefficients {
    Eigen::Index shift;
    Eigen::VectorXcd fwd, fwd_conj, back, back_conj;
};

/// Interaction-picture coupling derivative for the given active pulses,
/// written into `out` (resized and overwritten). Output is assembled one
/// column at a time so each source column is read while it is hot.
inline void coupling_rhs_into(const ComplexMatrix& rho, const MomentumGrid& grid, double t,
                              const std::vector<LaserPulse>& active, ComplexMatrix& out)
{
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    const Eigen::Index ld = 2 * n;
    out.resize(ld, ld);
    const Complex half_i(0.0, 0.5);

    std::vector<PulseCoefficients> coefs;
    coefs.reserve(active.size());
    for (const auto& pulse : active) {
        const double kl = pulse.wavenumber();
        PulseCoefficients pc{grid.kick_offset(pulse.direction), Eigen::VectorXcd(n),
                             Eigen::VectorXcd(n), Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
        const Complex coupling = half_i * std::conj(pulse.amplitude());
        // fwd[q] = (i/2) Omega* exp(i delta^{q+} t), with
        // delta^{q+} = delta0 - (k_L/m)(p_q + hbar k_L/2).
        for (Eigen::Index q = 0; q < n; ++q) {
            const double p = grid.at(static_cast<std::size_t>(q));
            const double delta = pulse.detuning - (kl / mass) * (p + 0.5 * hbar * kl);
            pc.fwd(q) = coupling * std::polar(1.0, delta * t);
            pc.fwd_conj(q) = std::conj(pc.fwd(q));
        }
        // back[q] = -fwd[q - shift] (delta^{q-} equals delta^{(q - hbar k_L)+}).
        for (Eigen::Index q = 0; q < n; ++q) {
            const Eigen::Index src = q - pc.shift;
            if (src >= 0 && src < n) {
                pc.back(q) = -pc.fwd(src);
                pc.back_conj(q) = -pc.fwd_conj(src);
            }
        }
        coefs.push_back(std::move(pc));
    }

    const Complex* in = rho.data();
    auto src_col = [&](int i, int j, Eigen::Index c) { return in + (j * n + c) * ld + i * n; };
    for (int j = 0; j < 2; ++j) {
        for (Eigen::Index c = 0; c < n; ++c) {
            Complex* top = out.data() + (j * n + c) * ld;
            std::fill(top, top + ld, Complex(0.0, 0.0));
        }
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        Complex* d11 = out.data() + c * ld;
        Complex* d21 = d11 + n;
        Complex* d12 = out.data() + (n + c) * ld;
        Complex* d22 = d12 + n;
        for (const auto& pc : coefs) {
            const Eigen::Index sh = pc.shift;
            const bool up = c + sh >= 0 && c + sh < n;
            const bool down = c - sh >= 0 && c - sh < n;

            add_shifted_column(d11, src_col(1, 0, c), pc.fwd.data(), n, sh);
            if (up) {
                add_scaled_column(d11, src_col(0, 1, c + sh), pc.fwd_conj(c), n);
            }
            add_shifted_column(d12, src_col(1, 1, c), pc.fwd.data(), n, sh);
            if (down) {
                add_scaled_column(d12, src_col(0, 0, c - sh), pc.back(c), n);
            }
            add_shifted_column(d21, src_col(0, 0, c), pc.back_conj.data(), n, -sh);
            if (up) {
                add_scaled_column(d21, src_col(1, 1, c + sh), pc.fwd_conj(c), n);
            }
            add_shifted_column(d22, src_col(0, 1, c), pc.back_conj.data(), n, -sh);
            if (down) {
                add_scaled_column(d22, src_col(1, 0, c - sh), pc.back(c), n);
            }
        }
    }
}

}  // namespace detail

/// Interaction-picture time derivative of rho under the pulses active at t.
/// Photon-shifted indices that leave the lattice contribute nothing.
inline ComplexMatrix coupling_rhs(const DensityMatrix& rho, double t, const PulseSequence& pulses)
{
    if (rho.picture() != Picture::interaction) {
        fail(ErrorKind::wrong_picture, "coupling_rhs expects an interaction-picture matrix");
    }
    std::vector<LaserPulse> active;
    for (const auto& p : pulses.pulses()) {
        if (p.active_at(t)) {
            active.push_back(p);
        }
    }
    ComplexMatrix out;
    detail::coupling_rhs_into(rho.matrix(), rho.grid(), t, active, out);
    return out;
}

/// Kinetic phase (p'^2 - p^2) t / 2 m hbar; internal energies are a
/// reference phase and are left out.
inline DensityMatrix picture_change(const DensityMatrix& rho, double sign, Picture target)
{
    DensityMatrix out = rho;
    const double t = rho.time();
    if (t == 0.0) {
        out.set_picture(target);
        return out;
    }
    const auto n = rho.n();
    std::vector<double> p(static_cast<std::size_t>(n));
    for (Eigen::Index q = 0; q < n; ++q) {
        p[static_cast<std::size_t>(q)] = rho.grid().at(static_cast<std::size_t>(q));
    }
    // per-element phases keep the diagonal exactly unchanged
    const double scale = sign * t / (2.0 * mass * hbar);
    ComplexMatrix& m = out.matrix();
    for (Eigen::Index c = 0; c < 2 * n; ++c) {
        const double pc = p[static_cast<std::size_t>(c % n)];
        for (Eigen::Index r = 0; r < 2 * n; ++r) {
            const double pr = p[static_cast<std::size_t>(r % n)];
            if (pr != pc) {
                m(r, c) *= std::polar(1.0, scale * (pr - pc) * (pr + pc));
            }
        }
    }
    out.set_picture(target);
    return out;
}

inline DensityMatrix to_schrodinger(const DensityMatrix& rho)
{
    if (rho.picture() != Picture::interaction) {
        fail(ErrorKind::wrong_picture, "to_schrodinger expects an interaction-picture matrix");
    }
    return picture_change(rho, -1.0, Picture::schrodinger);
}

inline DensityMatrix to_interaction(const DensityMatrix& rho)
{
    if (rho.picture() != Picture::schrodinger) {
        fail(ErrorKind::wrong_picture, "to_interaction expects a Schrodinger-picture matrix");
    }
    return picture_change(rho, +1.0, Picture::interaction);
}

/// rho_A = rho_gg + rho_ee on the momentum lattice.
inline ComplexMatrix partial_trace_internal(const DensityMatrix& rho)
{
    return rho.block(0, 0) + rho.block(1, 1);
}

inline std::vector<double> momentum_populations(const DensityMatrix& rho, Level which)
{
    std::vector<double> pops(rho.grid().size());
    const auto n = rho.n();
    for (Eigen::Index q = 0; q < n; ++q) {
        const double g = rho.matrix()(q, q).real();
        const double e = rho.matrix()(n + q, n + q).real();
        pops[static_cast<std::size_t>(q)] = which == Level::g ? g : which == Level::e ? e : g + e;
    }
    return pops;
}

inline double purity(const ComplexMatrix& m) { return (m * m).trace().real(); }
inline double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

/// Ascending eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::non_physical_state, "eigenvalue solver did not converge");
    }
    return solver.eigenvalues();
}

struct PropagateOptions {
    EdgeCheck edges = EdgeCheck::enforce;
    bool check_positivity = true;
};

namespace detail {

/// Interleaved real view of a complex matrix, for element-wise updates.
inline Eigen::Map<Eigen::VectorXd> as_real(ComplexMatrix& m)
{
    return {reinterpret_cast<double*>(m.data()), 2 * m.size()};
}

inline void check_step_invariants(const DensityMatrix& rho, double t, EdgeCheck edges)
{
    auto diverged = [t](const std::string& what, double value) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << " = " << value << " at t = " << t;
        fail(ErrorKind::integration_diverged, msg.str());
    };
    const double tr = std::abs(rho.trace() - 1.0);
    if (!(tr < trace_tolerance)) {
        diverged("trace error", tr);
    }
    const double herm = rho.hermiticity_residue();
    if (!(herm < hermiticity_tolerance)) {
        diverged("hermiticity residue", herm);
    }
    if (edges == EdgeCheck::enforce && !(rho.edge_population() < edge_population_limit)) {
        diverged("edge population", rho.edge_population());
    }
}

inline void check_positivity(const DensityMatrix& rho)
{
    const double lo = hermitian_eigenvalues(rho.matrix())(0);
    if (lo < -positivity_tolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "minimum eigenvalue " << lo << " at t = " << rho.time();
        fail(ErrorKind::integration_diverged, msg.str());
    }
}

}  // namespace detail

/// Fixed-step RK4 integration of the interaction-picture equations. Time is
/// split at every pulse edge and every sample time; each piece is divided
/// into ceil(length / dt) equal steps. Intervals with no active pulse leave
/// rho unchanged. Returns deep copies at the requested sample times.
inline std::vector<DensityMatrix> propagate(const DensityMatrix& initial,
                                            const PulseSequence& pulses, double dt,
                                            const std::vector<double>& sample_times,
                                            const PropagateOptions& options = {})
{
    if (initial.picture() != Picture::interaction) {
        fail(ErrorKind::wrong_picture, "propagate expects an interaction-picture matrix");
    }
    if (!(dt > 0.0)) {
        fail(ErrorKind::invalid_parameter, "propagate needs dt > 0");
    }
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < initial.time() || (i > 0 && sample_times[i] < sample_times[i - 1])) {
            fail(ErrorKind::invalid_parameter,
                 "sample times must be ascending and not before the initial time");
        }
    }
    std::vector<DensityMatrix> snapshots;
    if (sample_times.empty()) {
        return snapshots;
    }

    const double t0 = initial.time();
    const double t_end = sample_times.back();
    std::vector<double> marks{t0, t_end};
    for (double e : pulses.edges()) {
        if (e > t0 && e < t_end) {
            marks.push_back(e);
        }
    }
    for (double s : sample_times) {
        marks.push_back(s);
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    DensityMatrix rho = initial;
    const auto dim = rho.matrix().rows();
    ComplexMatrix k(dim, dim), acc(dim, dim), tmp(dim, dim);
    const MomentumGrid grid = rho.grid();

    std::size_t next_sample = 0;
    auto emit_samples = [&](double t) {
        while (next_sample < sample_times.size() && sample_times[next_sample] == t) {
            rho.set_time(t);
            if (options.check_positivity) {
                detail::check_positivity(rho);
            }
            snapshots.push_back(rho);
            ++next_sample;
        }
    };
    emit_samples(t0);

    for (std::size_t seg = 0; seg + 1 < marks.size(); ++seg) {
        const double a = marks[seg];
        const double b = marks[seg + 1];
        const auto active = pulses.active_during(a, b);
        if (!active.empty()) {
            const auto steps = static_cast<long>(std::max(1.0, std::ceil((b - a) / dt - 1e-9)));
            const double h = (b - a) / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s) {
                const double t = a + static_cast<double>(s) * h;
                ComplexMatrix& y = rho.matrix();
                const auto yr = detail::as_real(y);
                const auto kr = detail::as_real(k);
                auto ar = detail::as_real(acc);
                auto tr = detail::as_real(tmp);
                detail::coupling_rhs_into(y, grid, t, active, k);
                ar = kr;
                tr = yr + (0.5 * h) * kr;
                detail::coupling_rhs_into(tmp, grid, t + 0.5 * h, active, k);
                ar += 2.0 * kr;
                tr = yr + (0.5 * h) * kr;
                detail::coupling_rhs_into(tmp, grid, t + 0.5 * h, active, k);
                ar += 2.0 * kr;
                tr = yr + h * kr;
                detail::coupling_rhs_into(tmp, grid, t + h, active, k);
                ar += kr;
                detail::as_real(y) += (h / 6.0) * ar;
                detail::check_step_invariants(rho, t + h, options.edges);
            }
        }
        rho.set_time(b);
        emit_samples(b);
    }
    return snapshots;
}

}  // namespace phasecool

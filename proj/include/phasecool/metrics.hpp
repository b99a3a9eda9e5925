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

#include "phasecool/density_matrix.hpp"
#include "phasecool/error.hpp"
#include "phasecool/phase_space.hpp"
#include "phasecool/quantum.hpp"
#include "phasecool/units.hpp"

namespace phasecool {

inline constexpr double eigenvalue_clamp = 1e-8;
inline constexpr double population_clamp = 1e-12;

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Eigenvalues clamped at zero after checking none is below -1e-8.
inline std::vector<double> spectrum(const ComplexMatrix& m)
{
    const auto ev = hermitian_eigenvalues(m);
    if (ev(0) < -eigenvalue_clamp) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "minimum eigenvalue " << ev(0) << " below " << -eigenvalue_clamp;
        fail(ErrorKind::non_physical_state, msg.str());
    }
    std::vector<double> out(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        out[static_cast<std::size_t>(i)] = std::max(0.0, ev(i));
    }
    return out;
}

inline double shannon(const std::vector<double>& probs)
{
    double s = 0.0;
    for (double p : probs) {
        s -= xlogx(p < 0.0 && p >= -population_clamp ? 0.0 : p);
    }
    return s;
}

inline double von_neumann(const ComplexMatrix& m) { return shannon(spectrum(m)); }
inline double von_neumann(const DensityMatrix& rho) { return von_neumann(rho.matrix()); }

inline std::vector<double> diagonal(const ComplexMatrix& m)
{
    std::vector<double> d(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        d[static_cast<std::size_t>(i)] = m(i, i).real();
    }
    return d;
}

/// full: |p, i> populations; external: diagonal of rho_A; ground_filtered:
/// the unnormalized g-block diagonal alone (a pseudo-entropy).
enum class ShannonBasis { full, external, ground_filtered };

inline double shannon(const DensityMatrix& rho, ShannonBasis basis)
{
    switch (basis) {
    case ShannonBasis::full: return shannon(diagonal(rho.matrix()));
    case ShannonBasis::external: return shannon(diagonal(partial_trace_internal(rho)));
    case ShannonBasis::ground_filtered: return shannon(momentum_populations(rho, Level::g));
    }
    return 0.0;
}

enum class EntropyFamily { renyi, tsallis };

inline double generalized_entropy(const std::vector<double>& probs, EntropyFamily family, double q)
{
    if (!(q >= 0.0)) {
        fail(ErrorKind::invalid_parameter, "entropy order q must be >= 0");
    }
    if (q == 1.0) {
        fail(ErrorKind::use_shannon, "q = 1 is the Shannon limit");
    }
    double sum = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            sum += std::pow(p, q);
        }
    }
    if (family == EntropyFamily::tsallis) {
        return (1.0 - sum) / (q - 1.0);
    }
    return std::log(sum) / (1.0 - q);
}

/// Renyi entropy in the q -> infinity limit.
inline double min_entropy(const std::vector<double>& probs)
{
    return -std::log(*std::max_element(probs.begin(), probs.end()));
}

/// S_W = -integral Q ln(h Q) dr dp: the continuous entropy measured in
/// units of phase-space cells of area h. A coherent state gives 1.
inline double wehrl(const PhaseSpaceField& q)
{
    if (q.kind() != FieldKind::husimi) {
        fail(ErrorKind::invalid_kind, std::string("wehrl needs a husimi field, got ") +
                                          to_string(q.kind()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q.r_axis().count; ++i) {
        for (std::size_t j = 0; j < q.p_axis().count; ++j) {
            const double v = q(i, j);
            if (v > 0.0) {
                s -= q.r_axis().weight(i) * q.p_axis().weight(j) * v * std::log(planck * v);
            }
        }
    }
    return s;
}

struct PsdReport {
    double time = 0.0;
    double s_vn = 0.0;
    double s_sh = 0.0;
    double s_vn_a = 0.0;
    double s_sh_a = 0.0;
    double s_sh_g = 0.0;
    double max_rho_a = 0.0;
    double max_q = 0.0;
    double s_wehrl = 0.0;

    double d_vn() const { return std::exp(-s_vn); }
    double d_sh() const { return std::exp(-s_sh); }
    double d_vn_a() const { return std::exp(-s_vn_a); }
    double d_sh_a() const { return std::exp(-s_sh_a); }
    double d_sh_g() const { return std::exp(-s_sh_g); }
    double d_wehrl() const { return std::exp(-s_wehrl); }
};

struct ReportOptions {
    double husimi_sigma_r = 1.0 / std::sqrt(2.0);
    int position_oversample = 1;
};

/// Entropies and PSD measures of one snapshot (either picture).
inline PsdReport psd_report(const DensityMatrix& rho, const ReportOptions& options = {})
{
    const DensityMatrix schr = rho.picture() == Picture::schrodinger ? rho : to_schrodinger(rho);
    const ComplexMatrix rho_a = partial_trace_internal(schr);
    PsdReport r;
    r.time = rho.time();
    r.s_vn = von_neumann(schr.matrix());
    r.s_sh = shannon(diagonal(schr.matrix()));
    r.s_vn_a = von_neumann(rho_a);
    const auto pops_a = diagonal(rho_a);
    r.s_sh_a = shannon(pops_a);
    r.s_sh_g = shannon(momentum_populations(schr, Level::g));
    r.max_rho_a = *std::max_element(pops_a.begin(), pops_a.end());
    const PositionGrid rg(schr.grid(), options.position_oversample);
    const auto q = husimi_direct(rho_a, schr.grid(), options.husimi_sigma_r, rg, r.time);
    r.max_q = q.max();
    r.s_wehrl = wehrl(q);
    return r;
}

struct BoundVerdict {
    bool holds = true;
    std::vector<std::string> violations;
    double gain_max_rho_a = 1.0;
    double gain_d_vn_a = 1.0;
    double gain_d_sh_a = 1.0;
    double gain_max_q = 1.0;
    double gain_d_sh = 1.0;
    double gain_d_vn = 1.0;
    double gain_d_sh_g = 1.0;
    double gain_d_wehrl = 1.0;
};

/// Checks the M-level phase-space-density bounds at every sample relative
/// to the first one. The ground-filtered gain is reported, never gated.
inline BoundVerdict bound_check(const std::vector<PsdReport>& series, int levels)
{
    if (series.empty()) {
        fail(ErrorKind::invalid_parameter, "bound_check needs at least one report");
    }
    if (levels < 1) {
        fail(ErrorKind::invalid_parameter, "bound_check needs M >= 1");
    }
    const double m = levels;
    const PsdReport& r0 = series.front();
    BoundVerdict v;
    auto violate = [&v](const std::string& what, double t, double lhs, double rhs) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << " at t = " << t << ": " << lhs << " > " << rhs;
        v.violations.push_back(msg.str());
        v.holds = false;
    };
    for (const auto& r : series) {
        const double lim_rho = m * r0.max_rho_a * (1.0 + 1e-6);
        if (r.max_rho_a > lim_rho) {
            violate("max_rho_A", r.time, r.max_rho_a, lim_rho);
        }
        const double lim_vn_a = m * r0.d_vn_a() * (1.0 + 1e-6);
        if (r.d_vn_a() > lim_vn_a) {
            violate("D_VN_A", r.time, r.d_vn_a(), lim_vn_a);
        }
        if (r.d_sh_a() > r.d_vn_a() * (1.0 + 1e-9)) {
            violate("D_Sh_A above D_VN_A", r.time, r.d_sh_a(), r.d_vn_a());
        }
        const double lim_q = m * r0.max_q * (1.0 + 1e-3);
        if (r.max_q > lim_q) {
            violate("max_Q", r.time, r.max_q, lim_q);
        }
        const double lim_sh = r0.d_sh() * (1.0 + 1e-6);
        if (r.d_sh() > lim_sh) {
            violate("D_Sh", r.time, r.d_sh(), lim_sh);
        }
        if (r.d_sh() > r.d_vn() * (1.0 + 1e-9)) {
            violate("D_Sh above D_VN", r.time, r.d_sh(), r.d_vn());
        }
        v.gain_max_rho_a = std::max(v.gain_max_rho_a, r.max_rho_a / r0.max_rho_a);
        v.gain_d_vn_a = std::max(v.gain_d_vn_a, r.d_vn_a() / r0.d_vn_a());
        v.gain_d_sh_a = std::max(v.gain_d_sh_a, r.d_sh_a() / r0.d_sh_a());
        v.gain_max_q = std::max(v.gain_max_q, r.max_q / r0.max_q);
        v.gain_d_sh = std::max(v.gain_d_sh, r.d_sh() / r0.d_sh());
        v.gain_d_vn = std::max(v.gain_d_vn, r.d_vn() / r0.d_vn());
        v.gain_d_sh_g = std::max(v.gain_d_sh_g, r.d_sh_g() / r0.d_sh_g());
        v.gain_d_wehrl = std::max(v.gain_d_wehrl, r.d_wehrl() / r0.d_wehrl());
    }
    return v;
}

}  // namespace phasecool

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
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phasecool/config.hpp"
#include "phasecool/io.hpp"
#include "phasecool/metrics.hpp"
#include "phasecool/phase_space.hpp"
#include "phasecool/quantum.hpp"
#include "phasecool/semiclassical.hpp"

namespace phasecool {

inline std::vector<std::string> preset_names() { return {"fig2", "fig3"}; }

/// fig2: localized thermal cloud, pi-pulse pair, quantum and test-particle
/// runs. fig3: the same pulses on a spatially delocalized cloud, densely
/// sampled, quantum only.
inline ExperimentConfig preset(const std::string& name)
{
    ExperimentConfig c;
    c.name = name;
    c.sequence = counter_propagating_pi_pair(2.0, -2.0);
    c.dt = 1e-3;
    c.smoothing = SmoothingConfig{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    c.levels = 2;
    if (name == "fig2") {
        c.grid = GridConfig{20, 8, 2};
        c.initial = InitialConfig{InitialKind::gaussian, 20.0, 1.0};
        c.samples = {0.0, pi / 4, pi / 2, 3 * pi / 4, pi};
        c.semiclassical = SemiclassicalConfig{1000000, 20190117, 0.2, 0.1};
        c.output_dir = "fig2";
    } else if (name == "fig3") {
        c.grid = GridConfig{10, 8, 1};
        c.initial = InitialConfig{InitialKind::delocalized, 1.0, 1.0};
        c.samples.clear();
        for (int i = 0; i <= 64; ++i) {
            c.samples.push_back(pi * i / 64.0);
        }
        c.semiclassical = SemiclassicalConfig{0, 1, 0.2, 0.1};
        c.output_dir = "fig3";
    } else {
        fail(ErrorKind::unknown_preset, "no preset named '" + name + "'");
    }
    return c;
}

inline DensityMatrix initial_state(const ExperimentConfig& c)
{
    const MomentumGrid grid(c.grid.subdivision, c.grid.extent);
    if (c.initial.kind == InitialKind::delocalized) {
        return thermal_diagonal_state(grid, c.initial.sigma_p);
    }
    return gaussian_mixed_state(grid, GaussianStateSpec{c.initial.sigma_r, c.initial.sigma_p});
}

/// In-memory results of one experiment.
struct Bundle {
    std::string hash;
    ExperimentConfig config;
    std::vector<DensityMatrix> snapshots;
    std::vector<PsdReport> reports;
    BoundVerdict verdict;
    bool bounds_gated = false;
    std::map<std::string, PhaseSpaceField> fields;
    std::vector<std::pair<std::string, double>> gains;

    double gain(const std::string& key) const
    {
        for (const auto& [k, v] : gains) {
            if (k == key) {
                return v;
            }
        }
        fail(ErrorKind::invalid_parameter, "no gain named '" + key + "'");
    }

    /// 0 when every gated bound holds, 2 otherwise.
    int status() const { return bounds_gated && !verdict.holds ? 2 : 0; }
};

inline Bundle simulate(const ExperimentConfig& config)
{
    validate(config);
    if (config.semiclassical.particles > 0 && config.initial.kind != InitialKind::gaussian) {
        fail(ErrorKind::config, "test particles need a gaussian initial state");
    }
    Bundle b;
    b.config = config;
    b.hash = config_hash(config);

    const DensityMatrix rho0 = initial_state(config);
    b.snapshots = propagate(rho0, config.sequence, config.dt, config.samples);

    ReportOptions ropt;
    ropt.husimi_sigma_r = config.smoothing.s_r;
    ropt.position_oversample = config.grid.position_oversample;
    for (const auto& snap : b.snapshots) {
        b.reports.push_back(psd_report(snap, ropt));
    }
    b.verdict = bound_check(b.reports, config.levels);
    b.bounds_gated = config.initial.kind == InitialKind::delocalized;

    const PositionGrid rg(rho0.grid(), config.grid.position_oversample);
    const double s_r = config.smoothing.s_r;
    const double s_p = config.smoothing.s_p;
    const std::pair<const char*, const DensityMatrix*> ends[] = {
        {"initial", &b.snapshots.front()}, {"final", &b.snapshots.back()}};
    for (const auto& [label, snap] : ends) {
        const DensityMatrix schr = to_schrodinger(*snap);
        const std::string tag = label;
        for (Level lv : {Level::g, Level::e, Level::total}) {
            b.fields["wigner_" + std::string(to_string(lv)) + "_" + tag] = wigner(schr, lv, rg);
        }
        b.fields["wigner_smoothed_" + tag] =
            weierstrass_smooth(b.fields["wigner_total_" + tag], s_r, s_p);
        b.fields["husimi_" + tag] = husimi_direct(schr, s_r, rg);
    }
    auto ratio = [&b](const std::string& name) {
        return b.fields.at(name + "_final").max() / b.fields.at(name + "_initial").max();
    };
    b.gains.emplace_back("wigner_raw", ratio("wigner_total"));
    b.gains.emplace_back("wigner_smoothed", ratio("wigner_smoothed"));
    b.gains.emplace_back("husimi", ratio("husimi"));

    if (config.semiclassical.particles > 0) {
        const auto& sc = config.semiclassical;
        EnsembleSpec spec{sc.particles, config.initial.sigma_r, config.initial.sigma_p, 0.0, 0.0,
                          sc.seed};
        Ensemble ens = sample_ensemble(spec);
        const auto pad_r = static_cast<std::size_t>(std::ceil(6.0 * s_r / sc.cell_r)) + 1;
        const auto pad_p = static_cast<std::size_t>(std::ceil(6.0 * s_p / sc.cell_p)) + 1;
        auto record = [&](const std::string& tag, double t) {
            auto raw = to_field(histogram(ens, sc.cell_r, sc.cell_p, pad_r, pad_p),
                                HistogramScale::probability_density, t);
            b.fields["histogram_smoothed_" + tag] = weierstrass_smooth(raw, s_r, s_p);
            b.fields["histogram_raw_" + tag] = std::move(raw);
        };
        const double t0 = config.samples.front();
        const double t1 = config.samples.back();
        record("initial", t0);
        EnsembleOptions eopt;
        eopt.threads = config.threads;
        propagate_ensemble(ens, config.sequence, config.dt, t0, t1, eopt);
        record("final", t1);
        b.gains.emplace_back("semiclassical_raw", ratio("histogram_raw"));
        b.gains.emplace_back("semiclassical_smoothed", ratio("histogram_smoothed"));
    }
    b.gains.emplace_back("max_rho_A", b.verdict.gain_max_rho_a);
    b.gains.emplace_back("D_VN_A", b.verdict.gain_d_vn_a);
    b.gains.emplace_back("D_Sh_A", b.verdict.gain_d_sh_a);
    b.gains.emplace_back("max_Q", b.verdict.gain_max_q);
    b.gains.emplace_back("D_Sh", b.verdict.gain_d_sh);
    b.gains.emplace_back("D_VN", b.verdict.gain_d_vn);
    b.gains.emplace_back("D_Sh_g", b.verdict.gain_d_sh_g);
    return b;
}

inline std::string verdict_text(const Bundle& b)
{
    if (!b.bounds_gated) {
        return "not applicable (initial state has coherences)";
    }
    return b.verdict.holds ? "all bounds hold" : "bound violated";
}

inline void write_bundle(const Bundle& b, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "config.ini", "# config_hash=" + b.hash + "\n" + canonical_text(b.config));
    write_text(dir / "report.csv", report_csv(b.reports, b.hash));
    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("verdict", verdict_text(b));
    for (const auto& v : b.verdict.violations) {
        entries.emplace_back("violation", v);
    }
    for (const auto& [k, v] : b.gains) {
        entries.emplace_back("gain_" + k, format_double(v));
    }
    write_text(dir / "summary.csv", summary_csv(entries, b.hash));
    for (const auto& [name, field] : b.fields) {
        write_field(dir / (name + ".field"), field, b.hash);
    }
    for (const std::string tag : {"initial", "final"}) {
        write_text(dir / ("marginals_wigner_" + tag + ".csv"),
                   marginals_csv(b.fields.at("wigner_total_" + tag), b.hash));
        const auto h = b.fields.find("histogram_raw_" + tag);
        if (h != b.fields.end()) {
            write_text(dir / ("marginals_histogram_" + tag + ".csv"), marginals_csv(h->second, b.hash));
        }
    }
}

/// Runs and writes a bundle; returns the process status (0 or 2).
inline int run(const ExperimentConfig& config, const std::filesystem::path& dir)
{
    const Bundle b = simulate(config);
    write_bundle(b, dir);
    return b.status();
}

struct CompareTolerances {
    double field = 0.0;
    double report = 0.0;
    bool quantum_only = false;
};

struct CompareEntry {
    std::string file;
    double max_abs_diff = 0.0;
    double tolerance = 0.0;
    bool ok = true;
};

struct CompareResult {
    std::vector<CompareEntry> entries;
    bool ok() const
    {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.ok; });
    }
};

namespace detail {

inline std::vector<std::string> bundle_files(const std::filesystem::path& dir, bool quantum_only)
{
    if (!std::filesystem::is_directory(dir)) {
        fail(ErrorKind::incompatible_bundles, "'" + dir.string() + "' is not a bundle directory");
    }
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        const auto ext = e.path().extension().string();
        if (ext != ".field" && ext != ".csv") {
            continue;
        }
        if (quantum_only && name.find("histogram") != std::string::npos) {
            continue;
        }
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    return names;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool na = std::isnan(a[i]);
        const bool nb = std::isnan(b[i]);
        if (na || nb) {
            if (na != nb) {
                return std::numeric_limits<double>::infinity();
            }
            continue;
        }
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace detail

/// Max-abs differences of every field and table in two bundles. Grids and
/// table shapes must agree; summary text entries must match exactly.
inline CompareResult compare(const std::filesystem::path& a, const std::filesystem::path& b,
                             const CompareTolerances& tol = {})
{
    const auto fa = detail::bundle_files(a, tol.quantum_only);
    const auto fb = detail::bundle_files(b, tol.quantum_only);
    if (fa != fb) {
        fail(ErrorKind::incompatible_bundles, "bundles contain different files");
    }
    CompareResult res;
    for (const auto& name : fa) {
        CompareEntry e;
        e.file = name;
        const bool histogram = name.find("histogram") != std::string::npos;
        if (name.size() > 6 && name.substr(name.size() - 6) == ".field") {
            const auto x = read_field(a / name);
            const auto y = read_field(b / name);
            const bool same_grid = x.field.r_axis() == y.field.r_axis() &&
                                   x.field.p_axis() == y.field.p_axis();
            if (x.field.kind() != y.field.kind() || (!same_grid && !histogram)) {
                fail(ErrorKind::incompatible_bundles, "grid mismatch in " + name);
            }
            // histogram extents follow the particles, so differing samples
            // are a mismatch rather than an incompatibility
            e.max_abs_diff = same_grid ? detail::max_diff(x.field.values(), y.field.values())
                                       : std::numeric_limits<double>::infinity();
            e.tolerance = tol.field;
        } else if (name == "summary.csv") {
            // gain rows compare numerically; text rows (verdict, violations)
            // must agree verbatim
            const auto tx = read_text(a / name);
            const auto ty = read_text(b / name);
            std::istringstream sa(tx.substr(tx.find('\n') + 1)), sb(ty.substr(ty.find('\n') + 1));
            std::vector<std::string> la, lb;
            for (std::string line; std::getline(sa, line);) {
                la.push_back(line);
            }
            for (std::string line; std::getline(sb, line);) {
                lb.push_back(line);
            }
            if (la.size() != lb.size()) {
                fail(ErrorKind::incompatible_bundles, "summary shape mismatch");
            }
            for (std::size_t i = 0; i < la.size(); ++i) {
                const auto ka = la[i].substr(0, la[i].find(','));
                const auto kb = lb[i].substr(0, lb[i].find(','));
                if (ka != kb) {
                    fail(ErrorKind::incompatible_bundles, "summary rows differ: " + ka + " vs " + kb);
                }
                if (tol.quantum_only && ka.find("semiclassical") != std::string::npos) {
                    continue;
                }
                if (ka.rfind("gain_", 0) != 0) {
                    if (la[i] != lb[i]) {
                        e.max_abs_diff = std::numeric_limits<double>::infinity();
                    }
                    continue;
                }
                const double x = std::strtod(la[i].c_str() + ka.size() + 1, nullptr);
                const double y = std::strtod(lb[i].c_str() + kb.size() + 1, nullptr);
                e.max_abs_diff = std::max(e.max_abs_diff, detail::max_diff({x}, {y}));
            }
            e.tolerance = tol.report;
        } else {
            auto x = read_numeric_csv(a / name);
            const auto y = read_numeric_csv(b / name);
            if (x.columns != y.columns) {
                fail(ErrorKind::incompatible_bundles, "table columns differ in " + name);
            }
            if (x.rows.size() != y.rows.size()) {
                if (!histogram) {
                    fail(ErrorKind::incompatible_bundles, "table shape mismatch in " + name);
                }
                e.max_abs_diff = std::numeric_limits<double>::infinity();
                x.rows.clear();
            }
            for (std::size_t i = 0; i < x.rows.size(); ++i) {
                if (x.rows[i].size() != y.rows[i].size()) {
                    fail(ErrorKind::incompatible_bundles, "row length mismatch in " + name);
                }
                if (name.rfind("marginals_", 0) == 0) {
                    // skip the axis-name column
                    e.max_abs_diff = std::max(
                        e.max_abs_diff,
                        detail::max_diff({x.rows[i].begin() + 1, x.rows[i].end()},
                                         {y.rows[i].begin() + 1, y.rows[i].end()}));
                } else {
                    e.max_abs_diff = std::max(e.max_abs_diff, detail::max_diff(x.rows[i], y.rows[i]));
                }
            }
            e.tolerance = name.rfind("marginals_", 0) == 0 ? tol.field : tol.report;
        }
        e.ok = e.max_abs_diff <= e.tolerance;
        res.entries.push_back(e);
    }
    return res;
}

}  // namespace phasecool

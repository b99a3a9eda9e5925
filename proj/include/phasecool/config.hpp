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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phasecool/error.hpp"
#include "phasecool/pulse.hpp"

namespace phasecool {

enum class InitialKind { gaussian, delocalized };

inline const char* to_string(InitialKind k)
{
    return k == InitialKind::gaussian ? "gaussian" : "delocalized";
}

struct GridConfig {
    int subdivision = 10;
    int extent = 8;
    int position_oversample = 1;
    bool operator==(const GridConfig&) const = default;
};

struct InitialConfig {
    InitialKind kind = InitialKind::gaussian;
    double sigma_r = 1.0;
    double sigma_p = 1.0;
    bool operator==(const InitialConfig&) const = default;
};

/// particles = 0 disables the test-particle run.
struct SemiclassicalConfig {
    std::uint64_t particles = 0;
    std::uint64_t seed = 1;
    double cell_r = 0.2;
    double cell_p = 0.1;
    bool operator==(const SemiclassicalConfig&) const = default;
};

struct SmoothingConfig {
    double s_r = 0.70710678118654757;
    double s_p = 0.70710678118654757;
    bool operator==(const SmoothingConfig&) const = default;
};

struct ExperimentConfig {
    std::string name = "custom";
    GridConfig grid;
    InitialConfig initial;
    PulseSequence sequence;
    double dt = 1e-3;
    std::vector<double> samples{0.0};
    SemiclassicalConfig semiclassical;
    SmoothingConfig smoothing;
    int levels = 2;
    // not part of the physics; excluded from the hash
    std::string output_dir = "out";
    unsigned threads = 1;

    bool operator==(const ExperimentConfig&) const = default;
};

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string join_doubles(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? "," : "") + format_double(xs[i]);
    }
    return out;
}

/// Physics sections only, in a fixed order; this text defines the hash.
inline std::string canonical_text(const ExperimentConfig& c)
{
    std::ostringstream o;
    o << "[experiment]\nname = " << c.name << "\nlevels = " << c.levels << "\n\n";
    o << "[grid]\nsubdivision = " << c.grid.subdivision << "\nextent = " << c.grid.extent
      << "\nposition_oversample = " << c.grid.position_oversample << "\n\n";
    o << "[initial]\nkind = " << to_string(c.initial.kind)
      << "\nsigma_r = " << format_double(c.initial.sigma_r)
      << "\nsigma_p = " << format_double(c.initial.sigma_p) << "\n\n";
    o << "[sequence]\ncount = " << c.sequence.size() << "\n\n";
    for (std::size_t i = 0; i < c.sequence.size(); ++i) {
        const auto& p = c.sequence.pulses()[i];
        o << "[pulse." << i << "]\ndirection = " << p.direction
          << "\nrabi = " << format_double(p.rabi) << "\ndetuning = " << format_double(p.detuning)
          << "\nphase = " << format_double(p.phase) << "\nt_start = " << format_double(p.t_start)
          << "\nt_stop = " << format_double(p.t_stop) << "\n\n";
    }
    o << "[integrator]\ndt = " << format_double(c.dt) << "\n\n";
    o << "[samples]\ntimes = " << join_doubles(c.samples) << "\n\n";
    o << "[semiclassical]\nparticles = " << c.semiclassical.particles
      << "\nseed = " << c.semiclassical.seed
      << "\ncell_r = " << format_double(c.semiclassical.cell_r)
      << "\ncell_p = " << format_double(c.semiclassical.cell_p) << "\n\n";
    o << "[smoothing]\ns_r = " << format_double(c.smoothing.s_r)
      << "\ns_p = " << format_double(c.smoothing.s_p) << "\n";
    return o.str();
}

inline std::string to_ini(const ExperimentConfig& c)
{
    return canonical_text(c) + "\n[output]\ndir = " + c.output_dir +
           "\nthreads = " + std::to_string(c.threads) + "\n";
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string config_hash(const ExperimentConfig& c)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_text(c))));
    return buf;
}

namespace detail {

using boost::property_tree::ptree;

// "section.key" with dots allowed in the section name, e.g. "pulse.0.rabi"
inline ptree::path_type key_path(const std::string& key)
{
    std::string k = key;
    const auto dot = k.rfind('.');
    if (dot != std::string::npos) {
        k[dot] = '/';
    }
    return ptree::path_type(k, '/');
}

template <class T>
T get_value(const ptree& tree, const std::string& key)
{
    const auto node = tree.get_optional<std::string>(key_path(key));
    if (!node) {
        fail(ErrorKind::config, "missing key '" + key + "'");
    }
    std::istringstream in(*node);
    T value{};
    in >> value;
    if (in.fail() || !(in >> std::ws).eof()) {
        fail(ErrorKind::config, "bad value '" + *node + "' for key '" + key + "'");
    }
    return value;
}

template <>
inline double get_value<double>(const ptree& tree, const std::string& key)
{
    const auto node = tree.get_optional<std::string>(key_path(key));
    if (!node) {
        fail(ErrorKind::config, "missing key '" + key + "'");
    }
    const char* begin = node->c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && (*end == ' ' || *end == '\t')) {
        ++end;
    }
    if (end == begin || *end != '\0') {
        fail(ErrorKind::config, "bad number '" + *node + "' for key '" + key + "'");
    }
    return v;
}

template <class T>
T get_or(const ptree& tree, const std::string& key, T fallback)
{
    return tree.get_optional<std::string>(key_path(key)) ? get_value<T>(tree, key) : fallback;
}

inline std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        ptree t;
        t.put("v", item);
        out.push_back(get_value<double>(t, "v"));
    }
    return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text)
{
    detail::ptree tree;
    try {
        std::istringstream in(text);
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        fail(ErrorKind::config, e.what());
    }
    using detail::get_or;
    using detail::get_value;
    ExperimentConfig c;
    c.name = get_or<std::string>(tree, "experiment.name", c.name);
    c.levels = get_or<int>(tree, "experiment.levels", c.levels);
    c.grid.subdivision = get_or<int>(tree, "grid.subdivision", c.grid.subdivision);
    c.grid.extent = get_or<int>(tree, "grid.extent", c.grid.extent);
    c.grid.position_oversample =
        get_or<int>(tree, "grid.position_oversample", c.grid.position_oversample);

    const auto kind = get_or<std::string>(tree, "initial.kind", "gaussian");
    if (kind == "gaussian") {
        c.initial.kind = InitialKind::gaussian;
    } else if (kind == "delocalized") {
        c.initial.kind = InitialKind::delocalized;
    } else {
        fail(ErrorKind::config, "initial.kind must be gaussian or delocalized, got '" + kind + "'");
    }
    c.initial.sigma_r = get_or<double>(tree, "initial.sigma_r", c.initial.sigma_r);
    c.initial.sigma_p = get_or<double>(tree, "initial.sigma_p", c.initial.sigma_p);

    std::vector<LaserPulse> pulses;
    const auto preset = tree.get_optional<std::string>("sequence.preset");
    if (preset) {
        if (*preset != "pi_pair") {
            fail(ErrorKind::config, "unknown sequence preset '" + *preset + "'");
        }
        const double rabi = get_value<double>(tree, "sequence.rabi");
        const double detuning = get_value<double>(tree, "sequence.detuning");
        try {
            pulses = counter_propagating_pi_pair(rabi, detuning).pulses();
        } catch (const Error& e) {
            fail(ErrorKind::config, e.what());
        }
    } else {
        const int count = get_or<int>(tree, "sequence.count", 0);
        for (int i = 0; i < count; ++i) {
            const std::string s = "pulse." + std::to_string(i) + ".";
            LaserPulse p;
            p.direction = get_value<int>(tree, s + "direction");
            p.rabi = get_value<double>(tree, s + "rabi");
            p.detuning = get_or<double>(tree, s + "detuning", 0.0);
            p.phase = get_or<double>(tree, s + "phase", 0.0);
            p.t_start = get_value<double>(tree, s + "t_start");
            p.t_stop = get_value<double>(tree, s + "t_stop");
            pulses.push_back(p);
        }
    }
    try {
        c.sequence = PulseSequence(pulses);
    } catch (const Error& e) {
        fail(ErrorKind::config, e.what());
    }

    c.dt = get_or<double>(tree, "integrator.dt", c.dt);
    if (tree.get_optional<std::string>("samples.times")) {
        c.samples = detail::parse_list(tree.get<std::string>("samples.times"));
    } else if (tree.get_optional<std::string>("samples.count")) {
        const int n = get_value<int>(tree, "samples.count");
        const double t_end = get_value<double>(tree, "samples.t_end");
        if (n < 1) {
            fail(ErrorKind::config, "samples.count must be >= 1");
        }
        c.samples.clear();
        for (int i = 0; i < n; ++i) {
            c.samples.push_back(n == 1 ? 0.0 : t_end * i / (n - 1));
        }
    }
    c.semiclassical.particles =
        get_or<std::uint64_t>(tree, "semiclassical.particles", c.semiclassical.particles);
    c.semiclassical.seed = get_or<std::uint64_t>(tree, "semiclassical.seed", c.semiclassical.seed);
    c.semiclassical.cell_r = get_or<double>(tree, "semiclassical.cell_r", c.semiclassical.cell_r);
    c.semiclassical.cell_p = get_or<double>(tree, "semiclassical.cell_p", c.semiclassical.cell_p);
    c.smoothing.s_r = get_or<double>(tree, "smoothing.s_r", c.smoothing.s_r);
    c.smoothing.s_p = get_or<double>(tree, "smoothing.s_p", c.smoothing.s_p);
    c.output_dir = get_or<std::string>(tree, "output.dir", c.output_dir);
    c.threads = get_or<unsigned>(tree, "output.threads", c.threads);
    return c;
}

/// Structural checks that do not need to build any state.
inline void validate(const ExperimentConfig& c)
{
    auto bad = [](const std::string& what) { fail(ErrorKind::config, what); };
    if (c.grid.subdivision < 2 || c.grid.subdivision % 2 != 0) {
        bad("grid.subdivision must be even and >= 2");
    }
    if (c.grid.extent < 1) {
        bad("grid.extent must be >= 1");
    }
    if (c.grid.position_oversample < 1) {
        bad("grid.position_oversample must be >= 1");
    }
    if (!(c.initial.sigma_p > 0.0) || !(c.initial.sigma_r > 0.0)) {
        bad("initial widths must be positive");
    }
    if (!(c.dt > 0.0)) {
        bad("integrator.dt must be positive");
    }
    if (c.samples.empty()) {
        bad("at least one sample time is required");
    }
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        if (c.samples[i] < 0.0 || (i > 0 && c.samples[i] <= c.samples[i - 1])) {
            bad("sample times must be non-negative and strictly ascending");
        }
    }
    if (c.semiclassical.particles > 0 &&
        (!(c.semiclassical.cell_r > 0.0) || !(c.semiclassical.cell_p > 0.0))) {
        bad("semiclassical cells must be positive");
    }
    if (!(c.smoothing.s_r > 0.0) || !(c.smoothing.s_p > 0.0)) {
        bad("smoothing widths must be positive");
    }
    if (c.levels < 1) {
        bad("experiment.levels must be >= 1");
    }
}

inline ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::config, "cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto c = parse_config(buf.str());
    validate(c);
    return c;
}

}  // namespace phasecool

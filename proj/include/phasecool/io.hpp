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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phasecool/config.hpp"
#include "phasecool/error.hpp"
#include "phasecool/metrics.hpp"
#include "phasecool/phase_space.hpp"

namespace phasecool {

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::config, "cannot write '" + path.string() + "'");
    }
    out << text;
}

inline std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::incompatible_bundles, "cannot read '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string format_axis(const Axis& a)
{
    return format_double(a.origin) + " " + format_double(a.step) + " " + std::to_string(a.count) +
           (a.periodic ? " periodic" : " open");
}

/// Text header followed by one line of values per r sample.
inline std::string field_text(const PhaseSpaceField& f, const std::string& hash)
{
    std::string out;
    out.reserve(f.values().size() * 25 + 256);
    out += "# phasecool field\nkind = ";
    out += to_string(f.kind());
    out += "\nconfig_hash = " + hash;
    out += "\ntime = " + format_double(f.time());
    out += "\nr_axis = " + format_axis(f.r_axis());
    out += "\np_axis = " + format_axis(f.p_axis());
    out += "\nvalues\n";
    char buf[40];
    for (std::size_t i = 0; i < f.r_axis().count; ++i) {
        for (std::size_t j = 0; j < f.p_axis().count; ++j) {
            std::snprintf(buf, sizeof buf, j ? " %.17g" : "%.17g", f(i, j));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

inline void write_field(const std::filesystem::path& path, const PhaseSpaceField& f,
                        const std::string& hash)
{
    write_text(path, field_text(f, hash));
}

struct StoredField {
    PhaseSpaceField field;
    std::string hash;
};

inline StoredField read_field(const std::filesystem::path& path)
{
    std::istringstream in(read_text(path));
    std::string line;
    auto bad = [&path](const std::string& why) {
        fail(ErrorKind::incompatible_bundles, "malformed field file '" + path.string() + "': " + why);
    };
    auto value_of = [&](const std::string& key) {
        if (!std::getline(in, line) || line.rfind(key + " = ", 0) != 0) {
            bad("expected '" + key + "'");
        }
        return line.substr(key.size() + 3);
    };
    auto parse_axis = [&](const std::string& text) {
        std::istringstream s(text);
        Axis a;
        std::string mode;
        s >> a.origin >> a.step >> a.count >> mode;
        if (s.fail() || (mode != "periodic" && mode != "open")) {
            bad("axis '" + text + "'");
        }
        a.periodic = mode == "periodic";
        return a;
    };
    std::getline(in, line);
    if (line != "# phasecool field") {
        bad("missing signature");
    }
    const FieldKind kind = field_kind_from_string(value_of("kind"));
    const std::string hash = value_of("config_hash");
    const double time = std::strtod(value_of("time").c_str(), nullptr);
    const Axis ra = parse_axis(value_of("r_axis"));
    const Axis pa = parse_axis(value_of("p_axis"));
    if (!std::getline(in, line) || line != "values") {
        bad("expected 'values'");
    }
    PhaseSpaceField f(ra, pa, kind, time);
    for (double& v : f.values()) {
        if (!(in >> v)) {
            bad("too few values");
        }
    }
    return {std::move(f), hash};
}

inline const std::vector<std::string>& report_columns()
{
    static const std::vector<std::string> cols{
        "time",      "S_VN",      "S_Sh",        "S_VN_A",      "S_Sh_A",       "S_Sh_g",
        "max_rho_A", "max_Q",     "S_Wehrl",     "D_VN",        "D_Sh",         "D_VN_A",
        "D_Sh_A",    "D_Sh_g",    "D_Wehrl",     "gain_D_VN",   "gain_D_Sh",    "gain_D_VN_A",
        "gain_D_Sh_A", "gain_D_Sh_g", "gain_max_rho_A", "gain_max_Q", "gain_D_Wehrl"};
    return cols;
}

inline std::vector<double> report_row(const PsdReport& r, const PsdReport& r0)
{
    return {r.time,
            r.s_vn,
            r.s_sh,
            r.s_vn_a,
            r.s_sh_a,
            r.s_sh_g,
            r.max_rho_a,
            r.max_q,
            r.s_wehrl,
            r.d_vn(),
            r.d_sh(),
            r.d_vn_a(),
            r.d_sh_a(),
            r.d_sh_g(),
            r.d_wehrl(),
            r.d_vn() / r0.d_vn(),
            r.d_sh() / r0.d_sh(),
            r.d_vn_a() / r0.d_vn_a(),
            r.d_sh_a() / r0.d_sh_a(),
            r.d_sh_g() / r0.d_sh_g(),
            r.max_rho_a / r0.max_rho_a,
            r.max_q / r0.max_q,
            r.d_wehrl() / r0.d_wehrl()};
}

inline std::string report_csv(const std::vector<PsdReport>& series, const std::string& hash)
{
    std::string out = "# config_hash=" + hash + "\n";
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i ? "," : "") + cols[i];
    }
    out += '\n';
    for (const auto& r : series) {
        const auto row = report_row(r, series.front());
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

/// Numeric CSV with a leading "# config_hash=" line and a header row.
struct CsvTable {
    std::string hash;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_numeric_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_text(path));
    CsvTable t;
    std::string line;
    std::getline(in, line);
    if (line.rfind("# config_hash=", 0) != 0) {
        fail(ErrorKind::incompatible_bundles, "missing config hash in '" + path.string() + "'");
    }
    t.hash = line.substr(14);
    std::getline(in, line);
    {
        std::stringstream s(line);
        std::string cell;
        while (std::getline(s, cell, ',')) {
            t.columns.push_back(cell);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream s(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(s, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            row.push_back(end == cell.c_str() ? std::nan("") : v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Rows "axis,coordinate,density" for both marginals.
inline std::string marginals_csv(const PhaseSpaceField& f, const std::string& hash)
{
    const auto m = marginals(f);
    std::string out = "# config_hash=" + hash + "\naxis,coordinate,density\n";
    for (std::size_t i = 0; i < m.position.density.size(); ++i) {
        out += "r," + format_double(m.position.axis.at(i)) + "," +
               format_double(m.position.density[i]) + "\n";
    }
    for (std::size_t i = 0; i < m.momentum.density.size(); ++i) {
        out += "p," + format_double(m.momentum.axis.at(i)) + "," +
               format_double(m.momentum.density[i]) + "\n";
    }
    return out;
}

/// Key/value summary lines, "key,value".
inline std::string summary_csv(const std::vector<std::pair<std::string, std::string>>& entries,
                               const std::string& hash)
{
    std::string out = "# config_hash=" + hash + "\nkey,value\n";
    for (const auto& [k, v] : entries) {
        out += k + "," + v + "\n";
    }
    return out;
}

}  // namespace phasecool

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

// Command-line front end: run experiments, list presets, compare bundles.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phasecool/phasecool.hpp"

namespace {

using namespace phasecool;

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::integration_diverged:
    case ErrorKind::non_physical_state:
    case ErrorKind::boundary:
        return 3;
    default:
        return 4;
    }
}

struct RunArgs {
    std::string config_path;
    std::string preset_name;
    std::string out;
    std::optional<double> dt;
    std::optional<std::uint64_t> particles;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

int do_run(const RunArgs& a)
{
    ExperimentConfig c = a.config_path.empty() ? preset(a.preset_name) : load_config(a.config_path);
    if (a.dt) {
        c.dt = *a.dt;
    }
    if (a.particles) {
        c.semiclassical.particles = *a.particles;
    }
    if (a.seed) {
        c.semiclassical.seed = *a.seed;
    }
    if (a.threads) {
        c.threads = *a.threads;
    }
    if (!a.out.empty()) {
        c.output_dir = a.out;
    }
    validate(c);
    const Bundle b = simulate(c);
    write_bundle(b, c.output_dir);
    std::printf("config_hash %s\n", b.hash.c_str());
    for (const auto& [k, v] : b.gains) {
        std::printf("gain %-24s %.6f\n", k.c_str(), v);
    }
    std::printf("verdict: %s\n", verdict_text(b).c_str());
    for (const auto& v : b.verdict.violations) {
        std::printf("  %s\n", v.c_str());
    }
    return b.status();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-level atom phase-space simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run an experiment and write an output bundle");
    auto* cfg_opt = run->add_option("--config", run_args.config_path, "Config file (INI)");
    auto* pre_opt = run->add_option("--preset", run_args.preset_name, "Preset name");
    cfg_opt->excludes(pre_opt);
    run->add_option("--out", run_args.out, "Output directory");
    run->add_option("--dt", run_args.dt, "Integrator step");
    run->add_option("--particles", run_args.particles, "Test-particle count (0 disables)");
    run->add_option("--seed", run_args.seed, "Test-particle seed");
    run->add_option("--threads", run_args.threads, "Worker threads (does not change results)");

    bool list = false;
    std::string show;
    auto* pre = app.add_subcommand("preset", "List presets or print one as a config file");
    pre->add_flag("--list", list, "List preset names");
    pre->add_option("name", show, "Preset to print");

    std::string dir_a, dir_b;
    CompareTolerances tol;
    auto* cmp = app.add_subcommand("compare", "Compare two output bundles");
    cmp->add_option("a", dir_a, "First bundle")->required();
    cmp->add_option("b", dir_b, "Second bundle")->required();
    cmp->add_option("--field-tol", tol.field, "Max-abs tolerance for fields and marginals");
    cmp->add_option("--report-tol", tol.report, "Max-abs tolerance for report and summary");
    cmp->add_flag("--quantum-only", tol.quantum_only, "Skip test-particle outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    try {
        if (*run) {
            if (run_args.config_path.empty() && run_args.preset_name.empty()) {
                std::cerr << "run needs --config or --preset\n";
                return 4;
            }
            return do_run(run_args);
        }
        if (*pre) {
            if (list || show.empty()) {
                for (const auto& n : preset_names()) {
                    std::cout << n << '\n';
                }
                return 0;
            }
            std::cout << to_ini(preset(show));
            return 0;
        }
        if (*cmp) {
            const auto res = compare(dir_a, dir_b, tol);
            for (const auto& e : res.entries) {
                std::printf("%-36s %.3e %s\n", e.file.c_str(), e.max_abs_diff,
                            e.ok ? "ok" : "EXCEEDS");
            }
            std::printf("%s\n", res.ok() ? "bundles agree" : "bundles differ");
            return res.ok() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}

// schr: run, analyse and verify the cocaine-heroin reaction-diffusion models.
//
//   schr presets [--write DIR]
//   schr run        (--preset NAME | --config PATH) [--out DIR] [--stepper S] [--threads N]
//   schr stability  (--preset NAME | --config PATH) [--out DIR] [--jmax N]
//   schr lyapunov   (--preset NAME | --config PATH) [--functional F] [--out DIR]
//   schr converge   (--preset NAME | --config PATH) --kind spatial|temporal --levels a,b,c

#include "schr/commands.hpp"
#include "schr/errors.hpp"
#include "schr/presets.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct SourceOptions {
    std::string preset;
    std::string config;
    std::string out;
    std::string stepper;
    std::optional<int> threads;
    std::optional<double> t_end;
};

void add_source_options(CLI::App* cmd, SourceOptions& o)
{
    auto* preset = cmd->add_option("--preset", o.preset, "built-in scenario name");
    auto* config = cmd->add_option("--config", o.config, "scenario file (INI)");
    preset->excludes(config);
    cmd->add_option("--out", o.out, "output directory (overrides the scenario)");
    cmd->add_option("--stepper", o.stepper, "time stepper")->check(CLI::IsMember({"explicit", "imex"}));
    cmd->add_option("--threads", o.threads, "worker threads for per-node sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--t-end", o.t_end, "final time (overrides the scenario)")->check(CLI::PositiveNumber);
}

schr::Scenario resolve(const SourceOptions& o)
{
    if (o.preset.empty() == o.config.empty()) {
        throw schr::ConfigError("exactly one of --preset or --config is required");
    }
    schr::Scenario s = o.preset.empty() ? schr::load_scenario(o.config) : schr::preset(o.preset);
    if (!o.out.empty()) {
        s.out_dir = o.out;
    }
    if (!o.stepper.empty()) {
        s.config.stepper = *schr::parse_stepper(o.stepper);
    }
    if (o.threads) {
        s.config.threads = *o.threads;
    }
    if (o.t_end) {
        s.config.t_end = *o.t_end;
    }
    schr::validate(s);
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cocaine-heroin reaction-diffusion toolkit"};
    app.require_subcommand(1);

    auto* presets_cmd = app.add_subcommand("presets", "list the built-in scenarios");
    std::string write_dir;
    presets_cmd->add_option("--write", write_dir, "also write each preset as an .ini file into DIR");

    SourceOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "integrate a scenario and write its outputs");
    add_source_options(run_cmd, run_opts);

    SourceOptions stab_opts;
    int jmax = -1;
    auto* stab_cmd = app.add_subcommand("stability", "mode-wise local stability of E_f and E*");
    add_source_options(stab_cmd, stab_opts);
    stab_cmd->add_option("--jmax", jmax, "highest Neumann mode index")->check(CLI::NonNegativeNumber);

    SourceOptions lyap_opts;
    std::string functional;
    auto* lyap_cmd = app.add_subcommand("lyapunov", "Lyapunov functional along a trajectory");
    add_source_options(lyap_cmd, lyap_opts);
    lyap_cmd->add_option("--functional", functional, "g1, g2, extended-free or extended-endemic")
        ->check(CLI::IsMember({"g1", "g2", "extended-free", "extended-endemic"}));

    SourceOptions conv_opts;
    std::string kind = "spatial";
    std::vector<double> levels;
    std::optional<double> conv_dt;
    std::optional<int> conv_cells;
    double conv_t_end = 1.0;
    auto* conv_cmd = app.add_subcommand("converge", "manufactured-solution convergence study");
    add_source_options(conv_cmd, conv_opts);
    conv_cmd->add_option("--kind", kind, "spatial or temporal")->check(CLI::IsMember({"spatial", "temporal"}));
    conv_cmd->add_option("--levels", levels, "cell counts (spatial) or time steps (temporal)")
        ->delimiter(',')
        ->required();
    conv_cmd->add_option("--dt", conv_dt, "time step of a spatial study")->check(CLI::PositiveNumber);
    conv_cmd->add_option("--cells", conv_cells, "grid of a temporal study")->check(CLI::Range(4, 1 << 20));
    conv_cmd->add_option("--horizon", conv_t_end, "final time of the study")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return schr::to_int(schr::ExitCode::usage);
    }

    try {
        if (presets_cmd->parsed()) {
            std::optional<std::filesystem::path> dir;
            if (!write_dir.empty()) {
                dir = write_dir;
            }
            return schr::to_int(schr::presets_command(dir, std::cout, std::cerr));
        }
        if (run_cmd->parsed()) {
            return schr::to_int(schr::run_command(resolve(run_opts), std::cout, std::cerr));
        }
        if (stab_cmd->parsed()) {
            schr::Scenario s = resolve(stab_opts);
            if (jmax >= 0) {
                s.j_max = jmax;
            }
            return schr::to_int(schr::stability_command(s, std::cout, std::cerr));
        }
        if (lyap_cmd->parsed()) {
            std::optional<schr::LyapunovFunctional> f;
            if (!functional.empty()) {
                f = schr::parse_functional(functional);
            }
            return schr::to_int(schr::lyapunov_command(resolve(lyap_opts), f, std::cout, std::cerr));
        }
        if (conv_cmd->parsed()) {
            schr::ConvergenceRequest req;
            req.kind = *schr::parse_convergence_kind(kind);
            req.levels = levels;
            req.dt = conv_dt;
            req.cells = conv_cells;
            req.t_end = conv_t_end;
            return schr::to_int(schr::converge_command(resolve(conv_opts), req, std::cout, std::cerr));
        }
    } catch (const schr::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return schr::to_int(schr::ExitCode::config);
    }
    return schr::to_int(schr::ExitCode::usage);
}

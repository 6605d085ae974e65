#include "schr/commands.hpp"

#include "schr/errors.hpp"
#include "schr/export.hpp"
#include "schr/presets.hpp"
#include "schr/report.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <ostream>

namespace schr {

namespace fs = std::filesystem;

namespace {

class IoFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void prepare_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoFailure(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                    ec ? ec.message() : "not a directory"));
    }
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoFailure(fmt::format("cannot open '{}' for writing", path.string()));
    }
    writer(os);
    os.flush();
    if (!os) {
        throw IoFailure(fmt::format("failed writing '{}'", path.string()));
    }
}

std::string vector_text(const CompartmentVector& v)
{
    std::vector<std::string> parts;
    for (double x : v.values()) {
        parts.push_back(fmt::format("{:.10g}", x));
    }
    return fmt::format("({})", fmt::join(parts, ", "));
}

void print_thresholds(std::ostream& out, const ModelParams& p, Model model)
{
    if (model == Model::basic) {
        fmt::print(out, "R0 = {:.10g}\n", r0_basic(p));
    } else {
        fmt::print(out, "R0 = {:.10g}\n", r0_extended(p));
        fmt::print(out, "exact invasion threshold = {:.10g}\n", effective_threshold_extended(p));
    }
    fmt::print(out, "E_f = {}\n", vector_text(drug_free_equilibrium(p, model).point));
    try {
        fmt::print(out, "E* = {}\n", vector_text(endemic_equilibrium(p, model).point));
    } catch (const NoEndemicEquilibrium&) {
        fmt::print(out, "E* = absent\n");
    }
}

std::optional<LyapunovContext> context_for(LyapunovFunctional functional, const ModelParams& p, Model model,
                                           std::string& why)
{
    LyapunovContext ctx;
    const bool basic_only = functional == LyapunovFunctional::g1 || functional == LyapunovFunctional::g2;
    if (basic_only != (model == Model::basic)) {
        why = fmt::format("functional {} is not defined for the {} model", to_string(functional), model_name(model));
        return std::nullopt;
    }
    if (functional == LyapunovFunctional::g2 || functional == LyapunovFunctional::extended_endemic) {
        try {
            ctx.equilibrium = endemic_equilibrium(p, model);
        } catch (const NoEndemicEquilibrium& e) {
            why = fmt::format("functional {} needs the drug-addiction equilibrium: {}", to_string(functional),
                              e.what());
            return std::nullopt;
        }
    }
    if (functional == LyapunovFunctional::extended_free) {
        ctx.alphas = choose_alphas(p);
        if (!ctx.alphas) {
            why = "no positive weights make the extended drug-free functional decrease for these parameters";
            return std::nullopt;
        }
    }
    return ctx;
}

} // namespace

LyapunovFunctional default_functional(const ModelParams& p, Model model)
{
    if (model == Model::basic) {
        return r0_basic(p) > 1.0 ? LyapunovFunctional::g2 : LyapunovFunctional::g1;
    }
    return effective_threshold_extended(p) > 1.0 ? LyapunovFunctional::extended_endemic
                                                 : LyapunovFunctional::extended_free;
}

ExitCode run_command(const Scenario& scenario, std::ostream& out, std::ostream& err)
{
    const auto& cfg = scenario.config;
    try {
        prepare_dir(scenario.out_dir);
        fmt::print(out, "scenario {} ({} model, Mx = {}, dt = {}, T = {}, {} stepper)\n", scenario.name,
                   model_name(cfg.model), cfg.grid.cells(), cfg.dt, cfg.t_end, to_string(cfg.stepper));
        print_thresholds(out, cfg.params, cfg.model);

        const Trajectory traj = integrate(cfg);
        for (const auto& w : traj.warnings) {
            fmt::print(err, "warning: {}\n", w);
        }

        const fs::path dir = scenario.out_dir;
        write_file(dir / "run_info.kv", [&](std::ostream& os) { write_run_info(os, scenario, traj); });
        if (scenario.wants(OutputKind::trajectory)) {
            write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
        }
        if (scenario.wants(OutputKind::diagnostics)) {
            write_file(dir / "diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(os, traj); });
        }
        if (scenario.wants(OutputKind::stability)) {
            const auto summary = analyse_stability(cfg.params, cfg.model,
                                                   neumann_modes(cfg.grid.length(), scenario.j_max));
            write_file(dir / "stability.txt", [&](std::ostream& os) { write_stability_text(os, summary, scenario); });
            write_file(dir / "stability.kv", [&](std::ostream& os) { write_stability_kv(os, summary, scenario); });
        }
        if (scenario.wants(OutputKind::lyapunov)) {
            const auto functional = scenario.functional.value_or(default_functional(cfg.params, cfg.model));
            std::string why;
            if (const auto ctx = context_for(functional, cfg.params, cfg.model, why)) {
                const auto trace = dissipation_report(traj, functional, *ctx);
                write_file(dir / "lyapunov.csv", [&](std::ostream& os) { write_lyapunov_csv(os, trace); });
            } else {
                fmt::print(err, "warning: lyapunov output skipped: {}\n", why);
            }
        }
        if (scenario.wants(OutputKind::plot)) {
            write_file(dir / "plot.gp", [&](std::ostream& os) { os << plot_script(scenario); });
        }

        const Field& last = traj.final_field();
        fmt::print(out, "termination: {} at t = {}\n", to_string(traj.termination), last.time());
        fmt::print(out, "final steady-state residual: {:.6g}\n", traj.diagnostics.back().residual);
        const EquilibriumPoint attractor = predicted_attractor(cfg.params, cfg.model);
        fmt::print(out, "final sup distance to {} equilibrium: {:.6g}\n", to_string(attractor.kind),
                   last.sup_distance(attractor.point));

        if (traj.termination == Termination::aborted) {
            write_file(dir / "ABORTED", [&](std::ostream& os) { os << traj.abort_reason << '\n'; });
            fmt::print(err, "error: integration aborted: {}\n", traj.abort_reason);
            return ExitCode::solver_abort;
        }
        return ExitCode::success;
    } catch (const IoFailure& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::io;
    } catch (const ConfigError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::config;
    } catch (const DomainError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::config;
    }
}

ExitCode stability_command(const Scenario& scenario, std::ostream& out, std::ostream& err)
{
    const auto& cfg = scenario.config;
    try {
        prepare_dir(scenario.out_dir);
        const auto summary = analyse_stability(cfg.params, cfg.model, neumann_modes(cfg.grid.length(), scenario.j_max));
        write_file(scenario.out_dir / "stability.txt",
                   [&](std::ostream& os) { write_stability_text(os, summary, scenario); });
        write_file(scenario.out_dir / "stability.kv",
                   [&](std::ostream& os) { write_stability_kv(os, summary, scenario); });
        write_stability_text(out, summary, scenario);
        return ExitCode::success;
    } catch (const IoFailure& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::io;
    } catch (const DomainError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::analysis;
    }
}

ExitCode lyapunov_command(const Scenario& scenario, std::optional<LyapunovFunctional> functional, std::ostream& out,
                          std::ostream& err)
{
    const auto& cfg = scenario.config;
    const auto chosen = functional.value_or(scenario.functional.value_or(default_functional(cfg.params, cfg.model)));
    std::string why;
    const auto ctx = context_for(chosen, cfg.params, cfg.model, why);
    if (!ctx) {
        fmt::print(err, "error: {}\n", why);
        return ExitCode::analysis;
    }
    try {
        prepare_dir(scenario.out_dir);
        const Trajectory traj = integrate(cfg);
        const auto trace = dissipation_report(traj, chosen, *ctx);
        write_file(scenario.out_dir / "lyapunov.csv", [&](std::ostream& os) { write_lyapunov_csv(os, trace); });

        fmt::print(out, "functional {} over {} samples\n", to_string(chosen), trace.values.size());
        if (ctx->alphas) {
            fmt::print(out, "weights: ({:.6g}, {:.6g}, {:.6g})\n", (*ctx->alphas)[0], (*ctx->alphas)[1],
                       (*ctx->alphas)[2]);
        }
        fmt::print(out, "initial value: {:.10g}\nfinal value: {:.10g}\n", trace.values.front(), trace.values.back());
        fmt::print(out, "nonpositive slopes: {:.4f} overall, {:.4f} after t = 10\n", trace.fraction_nonpositive(0.0),
                   trace.fraction_nonpositive(10.0));
        if (traj.termination == Termination::aborted) {
            write_file(scenario.out_dir / "ABORTED", [&](std::ostream& os) { os << traj.abort_reason << '\n'; });
            fmt::print(err, "error: integration aborted: {}\n", traj.abort_reason);
            return ExitCode::solver_abort;
        }
        return ExitCode::success;
    } catch (const IoFailure& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::io;
    } catch (const DomainError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::config;
    }
}

ExitCode converge_command(const Scenario& base, const ConvergenceRequest& request, std::ostream& out,
                          std::ostream& err)
{
    if (request.levels.size() < 3) {
        fmt::print(err, "error: a convergence study needs at least 3 refinement levels (got {})\n",
                   request.levels.size());
        return ExitCode::usage;
    }
    const ManufacturedSolution problem{base.config.params.d, base.config.grid.length()};
    try {
        ConvergenceStudy study;
        if (request.kind == ConvergenceKind::spatial) {
            std::vector<int> cells;
            for (double l : request.levels) {
                if (l != std::floor(l) || l < 4) {
                    fmt::print(err, "error: spatial levels must be integer cell counts >= 4 (got {})\n", l);
                    return ExitCode::usage;
                }
                cells.push_back(static_cast<int>(l));
            }
            study = spatial_convergence(problem, cells, request.dt.value_or(2e-6), request.t_end,
                                        base.config.stepper);
        } else {
            study = temporal_convergence(problem, request.levels, request.cells.value_or(base.config.grid.cells()),
                                         request.t_end, base.config.stepper);
        }
        prepare_dir(base.out_dir);
        write_file(base.out_dir / "convergence.csv", [&](std::ostream& os) { write_convergence_csv(os, study); });
        fmt::print(out, "{} convergence, {} stepper, d = {}, T = {}\n", to_string(study.kind),
                   to_string(study.stepper), problem.d, study.t_end);
        for (const auto& l : study.levels) {
            fmt::print(out, "  cells = {:4d}  dt = {:<10g} error = {:.6e}  order = {}\n", l.cells, l.dt, l.error,
                       l.order ? fmt::format("{:.4f}", *l.order) : std::string("-"));
        }
        return ExitCode::success;
    } catch (const IoFailure& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::io;
    } catch (const DomainError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::usage;
    }
}

ExitCode presets_command(const std::optional<fs::path>& write_dir, std::ostream& out, std::ostream& err)
{
    try {
        if (write_dir) {
            prepare_dir(*write_dir);
        }
        for (const auto& s : preset_catalog()) {
            const auto& p = s.config.params;
            const double r0 = s.config.model == Model::basic ? r0_basic(p) : r0_extended(p);
            fmt::print(out, "{:<20} {:<9} R0 = {:.10g}\n", s.name, model_name(s.config.model), r0);
            if (write_dir) {
                write_file(*write_dir / (s.name + ".ini"), [&](std::ostream& os) { os << render_scenario(s); });
            }
        }
        return ExitCode::success;
    } catch (const IoFailure& e) {
        fmt::print(err, "error: {}\n", e.what());
        return ExitCode::io;
    }
}

} // namespace schr

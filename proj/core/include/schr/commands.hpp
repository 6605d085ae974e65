#pragma once

#include "schr/lyapunov.hpp"
#include "schr/manufactured.hpp"
#include "schr/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace schr {

/// Process exit codes. Every failure path has its own value.
enum class ExitCode : int {
    success = 0,
    usage = 1,        // bad command line or convergence levels
    config = 2,       // scenario failed to load or validate
    io = 3,           // output directory or file not writable
    solver_abort = 4, // integration aborted (non-finite or negative state)
    analysis = 5,     // requested analysis undefined for the regime (e.g. G2 without E*)
};

constexpr int to_int(ExitCode c) noexcept { return static_cast<int>(c); }

/// Integrates the scenario and writes the requested artifacts into
/// scenario.out_dir. On abort the partial outputs are kept next to an ABORTED
/// marker file.
ExitCode run_command(const Scenario& scenario, std::ostream& out, std::ostream& err);

/// Writes stability.txt and stability.kv for E_f and, when present, E*.
ExitCode stability_command(const Scenario& scenario, std::ostream& out, std::ostream& err);

/// Integrates the scenario and writes lyapunov.csv for the chosen functional.
ExitCode lyapunov_command(const Scenario& scenario, std::optional<LyapunovFunctional> functional, std::ostream& out,
                          std::ostream& err);

struct ConvergenceRequest {
    ConvergenceKind kind = ConvergenceKind::spatial;
    // Cell counts (spatial) or time steps (temporal).
    std::vector<double> levels;
    std::optional<double> dt;   // spatial study time step
    std::optional<int> cells;   // temporal study grid
    double t_end = 1.0;
};

/// Manufactured-solution study using the diffusion coefficient, domain length
/// and stepper of the base scenario. Writes convergence.csv.
ExitCode converge_command(const Scenario& base, const ConvergenceRequest& request, std::ostream& out,
                          std::ostream& err);

/// Lists the preset catalog; with write_dir, also writes one .ini per preset.
ExitCode presets_command(const std::optional<std::filesystem::path>& write_dir, std::ostream& out,
                         std::ostream& err);

/// Regime-appropriate default functional for a scenario.
LyapunovFunctional default_functional(const ModelParams& p, Model model);

} // namespace schr

#pragma once

#include "schr/lyapunov.hpp"
#include "schr/manufactured.hpp"
#include "schr/rdsolver.hpp"
#include "schr/scenario.hpp"
#include "schr/stability.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace schr {

/// Local stability of both equilibria of one parameter set.
struct StabilitySummary {
    Model model = Model::basic;
    double r0 = 0.0;
    std::optional<double> effective_threshold;
    StabilityReport drug_free;
    std::optional<StabilityReport> endemic;
    // Why the drug-addiction equilibrium is missing, when it is.
    std::string endemic_absent_reason;
    // Set when r0 and the exact invasion threshold disagree.
    std::optional<std::string> threshold_note;
};

StabilitySummary analyse_stability(const ModelParams& p, Model model, const ModeSpectrum& modes);

void write_stability_text(std::ostream& os, const StabilitySummary& s, const Scenario& scenario);

/// Flat key=value lines, one fact per line, numbers with 17 significant digits.
void write_stability_kv(std::ostream& os, const StabilitySummary& s, const Scenario& scenario);

/// t, value, slope (slope empty on the last row), flagged.
void write_lyapunov_csv(std::ostream& os, const LyapunovTrace& trace);

/// level, cells, dt, error, order.
void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study);

/// Grid, time step and stepper of a run as key=value lines.
void write_run_info(std::ostream& os, const Scenario& scenario, const Trajectory& traj);

/// gnuplot script plotting the mid-domain time series from trajectory.csv.
std::string plot_script(const Scenario& scenario);

/// Attractor predicted for the scenario: E* when it exists and invades, else E_f.
EquilibriumPoint predicted_attractor(const ModelParams& p, Model model);

} // namespace schr

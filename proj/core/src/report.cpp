#include "schr/report.hpp"

#include "schr/errors.hpp"
#include "schr/export.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <ostream>

namespace schr {

namespace {

std::string point_text(const CompartmentVector& v)
{
    std::vector<std::string> parts;
    for (double x : v.values()) {
        parts.push_back(fmt::format("{:.10g}", x));
    }
    return fmt::format("({})", fmt::join(parts, ", "));
}

std::string point_kv(const CompartmentVector& v)
{
    std::vector<std::string> parts;
    for (double x : v.values()) {
        parts.push_back(format_double(x));
    }
    return fmt::format("{}", fmt::join(parts, ","));
}

std::string root_text(std::complex<double> r)
{
    if (r.imag() == 0.0) {
        return fmt::format("{:.10g}", r.real());
    }
    return fmt::format("{:.10g} {} {:.10g}i", r.real(), r.imag() < 0 ? '-' : '+', std::abs(r.imag()));
}

double max_real_part(const ModeRoots& m)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (auto r : m.roots) {
        worst = std::max(worst, r.real());
    }
    return worst;
}

void report_text(std::ostream& os, std::string_view label, const StabilityReport& r)
{
    fmt::print(os, "{} equilibrium {} [{}]\n", label, point_text(r.equilibrium.point),
               to_string(r.equilibrium.provenance));
    fmt::print(os, "  verdict: {}\n", to_string(r.verdict));
    fmt::print(os, "  modes: {} (j = 0..{})\n", r.modes.size(), r.modes.size() - 1);
    const ModeRoots& m0 = r.modes.front();
    std::vector<std::string> roots;
    for (auto x : m0.roots) {
        roots.push_back(root_text(x));
    }
    fmt::print(os, "  mode 0 roots: {}\n", fmt::join(roots, ", "));
    if (m0.alpha1 && m0.alpha2) {
        fmt::print(os, "  alpha1 = {:.10g}, alpha2 = {:.10g}\n", *m0.alpha1, *m0.alpha2);
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& m : r.modes) {
        worst = std::max(worst, max_real_part(m));
    }
    fmt::print(os, "  largest real part over all modes: {:.10g}\n", worst);
}

void report_kv(std::ostream& os, std::string_view prefix, const StabilityReport& r)
{
    fmt::print(os, "{}.kind={}\n", prefix, to_string(r.equilibrium.kind));
    fmt::print(os, "{}.point={}\n", prefix, point_kv(r.equilibrium.point));
    fmt::print(os, "{}.provenance={}\n", prefix, to_string(r.equilibrium.provenance));
    fmt::print(os, "{}.verdict={}\n", prefix, to_string(r.verdict));
    fmt::print(os, "{}.modes={}\n", prefix, r.modes.size());
    for (const auto& m : r.modes) {
        const auto key = fmt::format("{}.mode.{}", prefix, m.mode_index);
        fmt::print(os, "{}.lambda={}\n", key, format_double(m.lambda));
        for (std::size_t k = 0; k < m.roots.size(); ++k) {
            fmt::print(os, "{}.root.{}={},{}\n", key, k, format_double(m.roots[k].real()),
                       format_double(m.roots[k].imag()));
        }
        if (m.alpha1 && m.alpha2) {
            fmt::print(os, "{}.alpha1={}\n{}.alpha2={}\n", key, format_double(*m.alpha1), key,
                       format_double(*m.alpha2));
        }
    }
}

} // namespace

StabilitySummary analyse_stability(const ModelParams& p, Model model, const ModeSpectrum& modes)
{
    StabilitySummary s;
    s.model = model;
    s.drug_free = classify(p, drug_free_equilibrium(p, model), modes);
    s.r0 = s.drug_free.r0;
    s.effective_threshold = s.drug_free.effective_threshold;
    if (s.effective_threshold) {
        const double gap = std::abs(*s.effective_threshold - s.r0);
        if (gap > 1e-12 * std::max(1.0, s.r0)) {
            const bool straddles = (s.r0 - 1.0) * (*s.effective_threshold - 1.0) < 0.0;
            s.threshold_note = fmt::format(
                "r0 = {:.10g} ignores the U_c -> C return flow (mu2 > 0); the exact invasion threshold is {:.10g}{}",
                s.r0, *s.effective_threshold,
                straddles ? " and lies on the other side of 1, so the drug-free verdict follows the exact threshold"
                          : "; both lie on the same side of 1");
        }
    }
    try {
        s.endemic = classify(p, endemic_equilibrium(p, model), modes);
    } catch (const NoEndemicEquilibrium& e) {
        s.endemic_absent_reason = e.what();
    }
    return s;
}

void write_stability_text(std::ostream& os, const StabilitySummary& s, const Scenario& scenario)
{
    fmt::print(os, "stability report: {} ({} model)\n", scenario.name, model_name(s.model));
    fmt::print(os, "grid: L = {}, Mx = {}; modes lambda_j = (j pi / L)^2\n", scenario.config.grid.length(),
               scenario.config.grid.cells());
    fmt::print(os, "R0 = {:.10g}\n", s.r0);
    if (s.effective_threshold) {
        fmt::print(os, "exact invasion threshold = {:.10g}\n", *s.effective_threshold);
    }
    if (s.threshold_note) {
        fmt::print(os, "note: {}\n", *s.threshold_note);
    }
    report_text(os, "drug-free", s.drug_free);
    if (s.endemic) {
        report_text(os, "drug-addiction", *s.endemic);
    } else {
        fmt::print(os, "drug-addiction equilibrium: absent ({})\n", s.endemic_absent_reason);
    }
}

void write_stability_kv(std::ostream& os, const StabilitySummary& s, const Scenario& scenario)
{
    fmt::print(os, "scenario={}\n", scenario.name);
    fmt::print(os, "model={}\n", model_name(s.model));
    fmt::print(os, "grid.length={}\ngrid.cells={}\n", format_double(scenario.config.grid.length()),
               scenario.config.grid.cells());
    fmt::print(os, "r0={}\n", format_double(s.r0));
    if (s.effective_threshold) {
        fmt::print(os, "effective_threshold={}\n", format_double(*s.effective_threshold));
    }
    if (s.threshold_note) {
        fmt::print(os, "threshold_note={}\n", *s.threshold_note);
    }
    report_kv(os, "drug_free", s.drug_free);
    fmt::print(os, "drug_addiction.present={}\n", s.endemic ? "true" : "false");
    if (s.endemic) {
        report_kv(os, "drug_addiction", *s.endemic);
    }
}

void write_lyapunov_csv(std::ostream& os, const LyapunovTrace& trace)
{
    os << "t,value,slope,flagged\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        os << format_double(trace.times[k]) << ',' << format_double(trace.values[k]) << ',';
        if (k < trace.slopes.size()) {
            os << format_double(trace.slopes[k]);
        }
        os << ',' << (trace.flagged[k] ? 1 : 0) << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study)
{
    os << "level,cells,dt,error,order\n";
    for (std::size_t k = 0; k < study.levels.size(); ++k) {
        const auto& l = study.levels[k];
        os << k << ',' << l.cells << ',' << format_double(l.dt) << ',' << format_double(l.error) << ',';
        if (l.order) {
            os << format_double(*l.order);
        }
        os << '\n';
    }
}

void write_run_info(std::ostream& os, const Scenario& scenario, const Trajectory& traj)
{
    const auto& c = scenario.config;
    fmt::print(os, "scenario={}\nmodel={}\n", scenario.name, model_name(c.model));
    fmt::print(os, "grid.length={}\ngrid.cells={}\ngrid.dx={}\n", format_double(c.grid.length()), c.grid.cells(),
               format_double(c.grid.spacing()));
    fmt::print(os, "time.dt={}\ntime.t_end={}\ntime.stride={}\ntime.stepper={}\n", format_double(c.dt),
               format_double(c.t_end), c.stride, to_string(c.stepper));
    fmt::print(os, "termination={}\nsamples={}\nmin_value_seen={}\n", to_string(traj.termination), traj.size(),
               format_double(traj.min_value_seen));
    if (!traj.abort_reason.empty()) {
        fmt::print(os, "abort_reason={}\n", traj.abort_reason);
    }
}

std::string plot_script(const Scenario& scenario)
{
    const auto names = compartment_names(scenario.config.model);
    const double mid = scenario.config.grid.node(scenario.config.grid.node_count() / 2);
    std::string s;
    s += fmt::format("# {}: compartments at x = {} versus time\n", scenario.name, mid);
    s += "set datafile separator ','\n";
    s += "set key outside right\n";
    s += "set xlabel 't'\n";
    s += "set ylabel 'individuals'\n";
    s += fmt::format("set title '{}'\n", scenario.name);
    s += "set terminal pngcairo size 1000,600\n";
    s += fmt::format("set output '{}.png'\n", scenario.name);
    s += "plot \\\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        s += fmt::format("  'trajectory.csv' every ::1 using 1:(abs($2 - {}) < 1e-12 ? ${} : 1/0) with lines title '{}'{}\n",
                         format_double(mid), i + 3, names[i], i + 1 < names.size() ? ", \\" : "");
    }
    return s;
}

EquilibriumPoint predicted_attractor(const ModelParams& p, Model model)
{
    try {
        return endemic_equilibrium(p, model);
    } catch (const NoEndemicEquilibrium&) {
        return drug_free_equilibrium(p, model);
    }
}

} // namespace schr
